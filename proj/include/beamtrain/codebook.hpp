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

#include <cmath>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "beamtrain/geometry.hpp"

namespace beamtrain {

enum class CodewordKind { dft, polar };

/// Generating parameters of one codeword. An absent range marks a
/// far-field (planar wavefront) codeword.
struct CodewordMeta {
    int index = 0;
    double theta_grid = 0.0;
    std::optional<double> range_grid;
    CodewordKind kind = CodewordKind::dft;
};

/// Immutable set of unit-norm beamforming vectors plus their grid parameters.
/// Columns are stored as an N x M matrix in sweep order.
struct Codebook {
    ArrayGeometry geometry;
    Eigen::MatrixXcd columns;
    std::vector<CodewordMeta> meta;
    std::string name;

    int size() const { return static_cast<int>(columns.cols()); }
};

/// Evaluates a codeword at arbitrary continuous parameters.
///
/// With a range, entry n carries phase pi delta_n theta
/// - pi d delta_n^2 (1 - theta^2) / (2 r), the quadratic expansion of the
/// spherical steering phase at half-wavelength spacing; without one, the
/// curvature term vanishes and the far-field codeword a(theta) results, so a
/// codeword at (theta, r) matches a source at the same (theta, r). Codebook
/// builders route through this function so a stored column and a
/// re-evaluation at its grid point are bit-identical.
inline Eigen::VectorXcd codeword_at(const ArrayGeometry& geom, double theta,
                                    std::optional<double> range = std::nullopt) {
    if (theta < -1.0 || theta > 1.0 || !std::isfinite(theta))
        throw std::invalid_argument("codeword_at: theta must lie in [-1, 1]");
    if (range && !(*range > 0.0))
        throw std::invalid_argument("codeword_at: range must be > 0");
    const int n_ant = geom.n_antennas;
    const double scale = 1.0 / std::sqrt(static_cast<double>(n_ant));
    const double curvature =
        range ? geom.spacing * (1.0 - theta * theta) / (2.0 * *range) : 0.0;
    Eigen::VectorXcd v(n_ant);
    for (int n = 0; n < n_ant; ++n) {
        const double delta = geom.element_offset(n);
        const double phase = kPi * delta * theta - kPi * delta * delta * curvature;
        v[n] = std::polar(scale, phase);
    }
    return v;
}

/// DFT codebook: N far-field codewords at angles (2n - N + 1) / N.
inline Codebook build_dft_codebook(const ArrayGeometry& geom) {
    const int n_ant = geom.n_antennas;
    Codebook cb;
    cb.geometry = geom;
    cb.columns.resize(n_ant, n_ant);
    cb.meta.reserve(n_ant);
    for (int n = 0; n < n_ant; ++n) {
        const double angle = static_cast<double>(2 * n - n_ant + 1) / n_ant;
        cb.columns.col(n) = codeword_at(geom, angle);
        cb.meta.push_back({n, angle, std::nullopt, CodewordKind::dft});
    }
    cb.name = "dft[N=" + std::to_string(n_ant) + "]";
    return cb;
}

struct PolarCodebookConfig {
    double beta = 1.6;   // distance sampling density
    int angle_count = 512;
    int max_rings = 6;
    // Defaults to [Fresnel distance, Rayleigh distance] of the array.
    std::optional<std::pair<double, double>> range_bounds;
};

/// Ring bookkeeping emitted by the polar builder so the realized codebook
/// size is always visible next to the requested sampling parameters.
struct PolarRingCensus {
    std::vector<int> kept_per_ring; // index s-1 counts angles keeping ring s
    int far_field_codewords = 0;
    int total = 0;
    double range_lo = 0.0, range_hi = 0.0;

    std::string summary() const {
        std::ostringstream os;
        os << "total=" << total << " far_field=" << far_field_codewords << " rings=[";
        for (std::size_t s = 0; s < kept_per_ring.size(); ++s)
            os << (s ? "," : "") << kept_per_ring[s];
        os << "] range=[" << range_lo << "," << range_hi << "]";
        return os.str();
    }
};

/// Polar-domain codebook. Angles are sampled uniformly on [-1, 1]; at each
/// angle the distances follow the inverse-ring rule
///
///   r_s = Z(theta) / s,   Z(theta) = N^2 d^2 (1 - theta^2) / (2 beta^2 lambda),
///
/// for s = 1..max_rings, keeping the rings that land inside range_bounds.
/// Rings beyond the upper bound collapse into a single far-field codeword at
/// that angle, and an angle whose rings all fall outside the bounds also gets
/// one far-field codeword so every direction stays covered. Ordering is
/// angle-major with distances descending (far-field first).
inline Codebook build_polar_codebook(const ArrayGeometry& geom,
                                     const PolarCodebookConfig& cfg,
                                     PolarRingCensus* census = nullptr) {
    if (!(cfg.beta > 0.0))
        throw std::invalid_argument("build_polar_codebook: beta must be > 0");
    if (cfg.angle_count < 1)
        throw std::invalid_argument("build_polar_codebook: angle_count must be >= 1");
    if (cfg.max_rings < 1)
        throw std::invalid_argument("build_polar_codebook: max_rings must be >= 1");

    double lo, hi;
    if (cfg.range_bounds) {
        lo = cfg.range_bounds->first;
        hi = cfg.range_bounds->second;
    } else {
        const auto [fresnel, rayleigh] = fresnel_rayleigh(geom);
        lo = fresnel;
        hi = rayleigh;
    }
    if (!(lo > 0.0) || !(hi > lo))
        throw std::invalid_argument("build_polar_codebook: empty range bounds");

    const double n_d = geom.n_antennas * geom.spacing;
    const double ring_scale = n_d * n_d / (2.0 * cfg.beta * cfg.beta * geom.wavelength);

    PolarRingCensus tally;
    tally.kept_per_ring.assign(cfg.max_rings, 0);
    tally.range_lo = lo;
    tally.range_hi = hi;

    struct Entry {
        double theta;
        std::optional<double> range;
    };
    std::vector<Entry> entries;
    entries.reserve(static_cast<std::size_t>(cfg.angle_count) * cfg.max_rings);

    for (int a = 0; a < cfg.angle_count; ++a) {
        const double theta = static_cast<double>(2 * a - cfg.angle_count + 1) / cfg.angle_count;
        const double z = ring_scale * (1.0 - theta * theta);
        bool beyond_upper = false;
        std::vector<double> rings;
        for (int s = 1; s <= cfg.max_rings; ++s) {
            const double r = z / s;
            if (r > hi) {
                beyond_upper = true;
            } else if (r >= lo) {
                rings.push_back(r);
                ++tally.kept_per_ring[s - 1];
            }
        }
        if (beyond_upper || rings.empty()) {
            entries.push_back({theta, std::nullopt});
            ++tally.far_field_codewords;
        }
        for (double r : rings)
            entries.push_back({theta, r});
    }
    tally.total = static_cast<int>(entries.size());

    Codebook cb;
    cb.geometry = geom;
    cb.columns.resize(geom.n_antennas, static_cast<Eigen::Index>(entries.size()));
    cb.meta.reserve(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) {
        cb.columns.col(static_cast<Eigen::Index>(i)) =
            codeword_at(geom, entries[i].theta, entries[i].range);
        cb.meta.push_back({static_cast<int>(i), entries[i].theta, entries[i].range,
                           CodewordKind::polar});
    }
    std::ostringstream name;
    name << "polar[beta=" << cfg.beta << ",angles=" << cfg.angle_count
         << ",rings<=" << cfg.max_rings << ",M=" << tally.total << "]";
    cb.name = name.str();
    if (census)
        *census = tally;
    return cb;
}

} // namespace beamtrain
