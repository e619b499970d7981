// SPDX-License-Identifier: Apache-2.0
//
// beamtrain - near-field beam training and sparse channel reconstruction
// Copyright (C) 2026 beamtrain project
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "beamtrain/channel.hpp"
#include "beamtrain/codebook.hpp"
#include "beamtrain/rng.hpp"

namespace beamtrain {

/// One full sweep: y_i = h^H v_i + w_i for every codeword in order.
struct SweepResult {
    Eigen::VectorXcd measurements;
    std::string codebook_ref;
    NoiseModel noise;
};

/// Indices and exact complex measurements of the K strongest beams,
/// ordered by descending magnitude.
struct FeedbackReport {
    std::vector<int> indices;
    Eigen::VectorXcd values;

    int overhead() const { return static_cast<int>(indices.size()); }
};

/// Noiseless measurement row h^H V as a column vector of y_i.
inline Eigen::VectorXcd noiseless_measurements(const Eigen::VectorXcd& h,
                                               const Codebook& codebook) {
    if (h.size() != codebook.columns.rows())
        throw std::invalid_argument("beam_sweep: channel length does not match codebook");
    return (codebook.columns.adjoint() * h).conjugate();
}

/// Unit-variance complex Gaussian noise, one draw per beam. Experiments that
/// sweep the noise level scale a single draw by sigma so every SNR point sees
/// the same realization.
inline Eigen::VectorXcd draw_unit_noise(Rng& rng, Eigen::Index count) {
    Eigen::VectorXcd w(count);
    for (Eigen::Index i = 0; i < count; ++i)
        w[i] = rng.complex_normal();
    return w;
}

inline SweepResult beam_sweep(const Eigen::VectorXcd& h, const Codebook& codebook,
                              const NoiseModel& noise, Rng& rng) {
    SweepResult sweep;
    sweep.measurements = noiseless_measurements(h, codebook);
    if (noise.sigma_sq > 0.0) {
        const double sigma = std::sqrt(noise.sigma_sq);
        sweep.measurements += sigma * draw_unit_noise(rng, sweep.measurements.size());
    }
    sweep.codebook_ref = codebook.name;
    sweep.noise = noise;
    return sweep;
}

/// K strongest measurements by |y|; ties resolve to the lower beam index.
inline FeedbackReport select_top_k(const SweepResult& sweep, int k) {
    const int m = static_cast<int>(sweep.measurements.size());
    if (k < 1 || k > m)
        throw std::invalid_argument("select_top_k: K must lie in [1, M]");

    std::vector<int> order(m);
    std::iota(order.begin(), order.end(), 0);
    const Eigen::VectorXcd& y = sweep.measurements;
    std::partial_sort(order.begin(), order.begin() + k, order.end(),
                      [&y](int a, int b) {
                          const double ma = std::abs(y[a]), mb = std::abs(y[b]);
                          if (ma != mb)
                              return ma > mb;
                          return a < b;
                      });
    order.resize(k);

    FeedbackReport report;
    report.indices = order;
    report.values.resize(k);
    for (int i = 0; i < k; ++i)
        report.values[i] = y[order[i]];
    return report;
}

/// |v_i^H h|^2 per codeword: the projection coefficient power profile.
inline Eigen::VectorXd projection_profile(const Eigen::VectorXcd& h,
                                          const Codebook& codebook) {
    return (codebook.columns.adjoint() * h).cwiseAbs2();
}

/// Number of beams, taken in descending projection order exactly as top-K
/// feedback selects them, before the span of the selected codewords holds the
/// given fraction of the channel energy. This is the noiseless capture curve
/// of feedback plus least-squares reconstruction; for an orthonormal codebook
/// it reduces to counting projection energies. Returns k_max + 1 when the
/// fraction is never reached.
inline int min_beams_for_captured_energy(const Eigen::VectorXcd& h,
                                         const Codebook& codebook, double fraction,
                                         int k_max) {
    if (!(fraction > 0.0) || fraction > 1.0)
        throw std::invalid_argument(
            "min_beams_for_captured_energy: fraction must be in (0, 1]");
    const double energy = h.squaredNorm();
    if (!(energy > 0.0))
        throw std::invalid_argument("min_beams_for_captured_energy: zero channel");

    const Eigen::VectorXd profile = projection_profile(h, codebook);
    std::vector<int> order(codebook.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&profile](int a, int b) {
        return profile[a] != profile[b] ? profile[a] > profile[b] : a < b;
    });

    const double target = fraction * energy;
    const int limit = std::min<int>(k_max, codebook.size());
    std::vector<Eigen::VectorXcd> basis;
    double captured = 0.0;
    for (int k = 0; k < limit; ++k) {
        Eigen::VectorXcd atom = codebook.columns.col(order[k]);
        // Two Gram-Schmidt passes keep the basis orthonormal despite the
        // near-duplicate codewords a dense polar grid produces.
        for (const Eigen::VectorXcd& q : basis)
            atom -= q * q.dot(atom);
        for (const Eigen::VectorXcd& q : basis)
            atom -= q * q.dot(atom);
        const double norm = atom.norm();
        if (norm > 1e-8) {
            atom /= norm;
            captured += std::norm(atom.dot(h));
            basis.push_back(std::move(atom));
        }
        if (captured >= target)
            return k + 1;
    }
    return k_max + 1;
}

} // namespace beamtrain
