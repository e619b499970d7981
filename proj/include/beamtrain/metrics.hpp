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
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace beamtrain {

enum class Scheme { dft, nf, nf_lasso, nf_refine, dft_refine };

inline const char* scheme_name(Scheme scheme) {
    switch (scheme) {
    case Scheme::dft: return "DFT";
    case Scheme::nf: return "NF";
    case Scheme::nf_lasso: return "NF_LASSO";
    case Scheme::nf_refine: return "NF_REFINE";
    case Scheme::dft_refine: return "DFT_REFINE";
    }
    return "?";
}

inline std::optional<Scheme> scheme_from_name(const std::string& name) {
    if (name == "DFT") return Scheme::dft;
    if (name == "NF") return Scheme::nf;
    if (name == "NF_LASSO") return Scheme::nf_lasso;
    if (name == "NF_REFINE") return Scheme::nf_refine;
    if (name == "DFT_REFINE") return Scheme::dft_refine;
    return std::nullopt;
}

/// One Monte Carlo trial outcome.
struct TrialRecord {
    Scheme scheme = Scheme::dft;
    int overhead = 0;      // K
    double snr_db = 0.0;
    int path_count = 0;    // L
    std::uint64_t seed = 0;
    double l2_error = 0.0;
    double rate_bps_hz = 0.0;
    double rate_upper_bps_hz = 0.0;
    double l2_error_aligned = 0.0; // diagnostic, global phase removed
};

/// Distance between the unit-normalized channel vectors; lies in [0, 2].
inline double l2_error(const Eigen::VectorXcd& h, const Eigen::VectorXcd& h_hat) {
    const double norm_true = h.norm();
    const double norm_est = h_hat.norm();
    if (!(norm_true > 0.0) || !(norm_est > 0.0))
        throw std::invalid_argument("l2_error: zero-norm input");
    return (h / norm_true - h_hat / norm_est).norm();
}

/// Same metric minimized over a global phase rotation of the estimate.
inline double l2_error_phase_aligned(const Eigen::VectorXcd& h,
                                     const Eigen::VectorXcd& h_hat) {
    const double norm_true = h.norm();
    const double norm_est = h_hat.norm();
    if (!(norm_true > 0.0) || !(norm_est > 0.0))
        throw std::invalid_argument("l2_error_phase_aligned: zero-norm input");
    const double cosine = std::abs(h.dot(h_hat)) / (norm_true * norm_est);
    return std::sqrt(std::max(2.0 - 2.0 * std::min(cosine, 1.0), 0.0));
}

/// R = log2(1 + |h^H h_hat|^2 / (||h_hat||^2 sigma^2)); invariant under any
/// nonzero complex scaling of the estimate.
inline double achievable_rate(const Eigen::VectorXcd& h, const Eigen::VectorXcd& h_hat,
                              double sigma_sq) {
    const double norm_est_sq = h_hat.squaredNorm();
    if (!(norm_est_sq > 0.0))
        throw std::invalid_argument("achievable_rate: zero estimate");
    if (!(sigma_sq > 0.0))
        throw std::invalid_argument("achievable_rate: sigma_sq must be > 0");
    const double coupling = std::norm(h.dot(h_hat));
    return std::log2(1.0 + coupling / (norm_est_sq * sigma_sq));
}

/// Rate with the true channel as the beamformer: the perfect-CSI bound.
inline double perfect_csi_rate(const Eigen::VectorXcd& h, double sigma_sq) {
    if (!(sigma_sq > 0.0))
        throw std::invalid_argument("perfect_csi_rate: sigma_sq must be > 0");
    return std::log2(1.0 + h.squaredNorm() / sigma_sq);
}

/// Rate evaluated from subspace quantities instead of full vectors:
/// inner = h^H h_hat and norm_est_sq = ||h_hat||^2. Used by overhead scans
/// that sweep K without materializing every estimate.
inline double achievable_rate_from_inner(const std::complex<double>& inner,
                                         double norm_est_sq, double sigma_sq) {
    if (!(norm_est_sq > 0.0))
        throw std::invalid_argument("achievable_rate_from_inner: zero estimate");
    return std::log2(1.0 + std::norm(inner) / (norm_est_sq * sigma_sq));
}

inline double l2_error_from_inner(const std::complex<double>& inner, double norm_true,
                                  double norm_est) {
    if (!(norm_true > 0.0) || !(norm_est > 0.0))
        throw std::invalid_argument("l2_error_from_inner: zero-norm input");
    const double cosine = std::real(inner) / (norm_true * norm_est);
    return std::sqrt(std::max(2.0 - 2.0 * cosine, 0.0));
}

/// Count of profile entries (taken in decreasing order) needed to reach the
/// given fraction of the total.
inline int count_for_energy_fraction(const Eigen::VectorXd& power_profile,
                                     double fraction) {
    if (!(fraction > 0.0) || fraction > 1.0)
        throw std::invalid_argument("count_for_energy_fraction: fraction must be in (0, 1]");
    std::vector<double> sorted(power_profile.data(),
                               power_profile.data() + power_profile.size());
    std::sort(sorted.begin(), sorted.end(), std::greater<double>());
    const double total = power_profile.sum();
    if (!(total > 0.0))
        return 0;
    double cumulative = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        cumulative += sorted[i];
        if (cumulative >= fraction * total)
            return static_cast<int>(i + 1);
    }
    return static_cast<int>(sorted.size());
}

/// Smallest K whose mean rate clears fraction times the mean perfect-CSI
/// rate. mean_rate_by_k[i] is the ensemble mean at K = i + 1. Empty optional
/// means the fraction was never reached.
inline std::optional<int> min_overhead_for_fraction(const std::vector<double>& mean_rate_by_k,
                                                    double mean_upper, double fraction,
                                                    int k_max) {
    if (fraction < 0.0 || fraction > 1.0)
        throw std::invalid_argument("min_overhead_for_fraction: fraction must be in [0, 1]");
    const int limit = std::min<int>(k_max, static_cast<int>(mean_rate_by_k.size()));
    for (int k = 1; k <= limit; ++k) {
        if (mean_rate_by_k[static_cast<std::size_t>(k - 1)] >= fraction * mean_upper)
            return k;
    }
    return std::nullopt;
}

/// Ensemble form over trial records of one scheme: averages rate per K and
/// the perfect-CSI rate across the ensemble, then searches K = 1..k_max.
inline std::optional<int> min_overhead_for_fraction(const std::vector<TrialRecord>& ensemble,
                                                    Scheme scheme, double fraction,
                                                    int k_max) {
    std::map<int, std::pair<double, int>> by_k; // K -> (rate sum, count)
    double upper_sum = 0.0;
    int upper_count = 0;
    for (const TrialRecord& rec : ensemble) {
        if (rec.scheme != scheme)
            continue;
        auto& cell = by_k[rec.overhead];
        cell.first += rec.rate_bps_hz;
        cell.second += 1;
        upper_sum += rec.rate_upper_bps_hz;
        upper_count += 1;
    }
    if (upper_count == 0)
        throw std::invalid_argument("min_overhead_for_fraction: empty ensemble");
    const double mean_upper = upper_sum / upper_count;
    std::vector<double> mean_rate_by_k;
    for (int k = 1; k <= k_max; ++k) {
        const auto it = by_k.find(k);
        mean_rate_by_k.push_back(it == by_k.end() || it->second.second == 0
                                     ? -1.0
                                     : it->second.first / it->second.second);
    }
    return min_overhead_for_fraction(mean_rate_by_k, mean_upper, fraction, k_max);
}

} // namespace beamtrain
