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
#include <complex>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Dense>

namespace beamtrain {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSpeedOfLight = 299792458.0; // m/s

/// Uniform linear array along the y axis, centered at the origin.
/// Element n sits at offset delta_n * d with delta_n = (2n - N + 1) / 2,
/// so the offsets are symmetric and sum to zero.
struct ArrayGeometry {
    int n_antennas = 1;    // N
    double spacing = 0.0;  // element spacing d [m]
    double wavelength = 0.0; // carrier wavelength [m]

    ArrayGeometry() = default;
    ArrayGeometry(int n, double d, double lambda)
        : n_antennas(n), spacing(d), wavelength(lambda) {
        if (n < 1)
            throw std::invalid_argument("ArrayGeometry: n_antennas must be >= 1");
        if (!(d > 0.0))
            throw std::invalid_argument("ArrayGeometry: spacing must be > 0");
        if (!(lambda > 0.0))
            throw std::invalid_argument("ArrayGeometry: wavelength must be > 0");
    }

    double element_offset(int n) const { return 0.5 * (2 * n - n_antennas + 1); }
    double aperture() const { return (n_antennas - 1) * spacing; }
};

/// Half-wavelength ULA at the given carrier frequency.
inline ArrayGeometry make_half_wavelength_array(int n_antennas, double carrier_hz) {
    if (!(carrier_hz > 0.0))
        throw std::invalid_argument("make_half_wavelength_array: carrier must be > 0");
    const double lambda = kSpeedOfLight / carrier_hz;
    return ArrayGeometry(n_antennas, lambda / 2.0, lambda);
}

/// Position in the array's polar coordinates. theta is the spatial angle
/// sin(phi) in [-1, 1]; range is the distance to the array center in meters.
struct PolarPoint {
    double theta = 0.0;
    double range = 0.0;
};

inline void validate_point(const ArrayGeometry& geom, const PolarPoint& p) {
    if (p.theta < -1.0 || p.theta > 1.0 || !std::isfinite(p.theta))
        throw std::invalid_argument("PolarPoint: theta must lie in [-1, 1]");
    if (!(p.range > 0.0) || !std::isfinite(p.range))
        throw std::invalid_argument("PolarPoint: range must be > 0");
    // Points inside the aperture have no meaningful channel; reject, never clamp.
    if (p.range <= 0.5 * geom.aperture())
        throw std::domain_error("PolarPoint: range must exceed half the array aperture");
}

/// Exact distance from element n to the point: sqrt(r^2 + delta^2 d^2 - 2 r theta delta d).
inline double element_distance(const ArrayGeometry& geom, const PolarPoint& p, int n) {
    if (n < 0 || n >= geom.n_antennas)
        throw std::invalid_argument("element_distance: antenna index out of range");
    const double off = geom.element_offset(n) * geom.spacing;
    const double radicand = p.range * p.range + off * off - 2.0 * p.range * p.theta * off;
    if (!(radicand > 0.0))
        throw std::domain_error("element_distance: point lies on the array line");
    return std::sqrt(radicand);
}

/// Near-field boundaries: Fresnel distance sqrt(D^3/lambda)/2 and
/// Rayleigh distance 2 D^2 / lambda.
inline std::pair<double, double> fresnel_rayleigh(const ArrayGeometry& geom) {
    if (geom.n_antennas < 2)
        throw std::invalid_argument("fresnel_rayleigh: needs at least 2 antennas");
    const double d = geom.aperture();
    const double fresnel = 0.5 * std::sqrt(d * d * d / geom.wavelength);
    const double rayleigh = 2.0 * d * d / geom.wavelength;
    return {fresnel, rayleigh};
}

/// Spherical-wave steering vector b(theta, r): entry n is
/// exp(-j 2 pi (r_n - r) / lambda) / sqrt(N).
///
/// The difference r_n - r is evaluated as (r_n^2 - r^2) / (r_n + r); the direct
/// subtraction cancels catastrophically once r is far beyond the aperture.
inline Eigen::VectorXcd near_field_steering(const ArrayGeometry& geom, const PolarPoint& p) {
    validate_point(geom, p);
    const int n_ant = geom.n_antennas;
    const double scale = 1.0 / std::sqrt(static_cast<double>(n_ant));
    Eigen::VectorXcd steering(n_ant);
    for (int n = 0; n < n_ant; ++n) {
        const double off = geom.element_offset(n) * geom.spacing;
        const double quad = off * off - 2.0 * p.range * p.theta * off; // r_n^2 - r^2
        const double radicand = p.range * p.range + quad;
        if (!(radicand > 0.0))
            throw std::domain_error("near_field_steering: point lies on the array line");
        const double rn = std::sqrt(radicand);
        const double path_delta = quad / (rn + p.range);
        steering[n] = std::polar(scale, -2.0 * kPi * path_delta / geom.wavelength);
    }
    return steering;
}

} // namespace beamtrain
