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
#include <vector>

#include <Eigen/Dense>

#include "beamtrain/geometry.hpp"
#include "beamtrain/rng.hpp"

namespace beamtrain {

struct Scatterer {
    PolarPoint position;               // (theta_l, r_l1) seen from the array
    std::complex<double> reflection;   // complex reflection coefficient
};

struct ChannelScene {
    ArrayGeometry geometry;
    PolarPoint user;
    std::vector<Scatterer> scatterers; // one fewer than the path count

    int path_count() const { return 1 + static_cast<int>(scatterers.size()); }
};

struct NoiseModel {
    double sigma_sq = 0.0;        // linear noise power
    double reference_snr_db = 0.0;
};

/// The scatterer-to-user leg applies the law of cosines to an angle
/// difference. `spatial` feeds it the sine-space parameters directly;
/// `physical` converts to physical angles first. The spatial form is the
/// model default.
enum class CosineConvention { spatial, physical };

inline double scatter_user_distance(const PolarPoint& user, const PolarPoint& scatter,
                                    CosineConvention convention) {
    const double arg = convention == CosineConvention::spatial
                           ? user.theta - scatter.theta
                           : std::asin(user.theta) - std::asin(scatter.theta);
    const double sq = scatter.range * scatter.range + user.range * user.range -
                      2.0 * user.range * scatter.range * std::cos(arg);
    return std::sqrt(std::max(sq, 0.0));
}

/// Deterministic multipath synthesis: a line-of-sight term
///   sqrt(N) g_u exp(-j 2 pi r_u / lambda) b(theta_u, r_u), g_u = lambda / (4 pi r_u),
/// plus one reflected term per scatterer with gain
/// lambda p_l / (4 pi r_l1 r_l2) and the two-leg propagation phase.
inline Eigen::VectorXcd synthesize_channel(const ChannelScene& scene,
                                           CosineConvention convention =
                                               CosineConvention::spatial) {
    const ArrayGeometry& geom = scene.geometry;
    const double lambda = geom.wavelength;
    const double root_n = std::sqrt(static_cast<double>(geom.n_antennas));

    const double gain_los = lambda / (4.0 * kPi * scene.user.range);
    const std::complex<double> amp_los =
        root_n * gain_los * std::polar(1.0, -2.0 * kPi * scene.user.range / lambda);
    Eigen::VectorXcd h = amp_los * near_field_steering(geom, scene.user);

    for (const Scatterer& sc : scene.scatterers) {
        const double leg1 = sc.position.range;
        const double leg2 = scatter_user_distance(scene.user, sc.position, convention);
        if (!(leg2 > 0.0))
            throw std::domain_error("synthesize_channel: scatterer coincides with user");
        const std::complex<double> gain =
            lambda * sc.reflection / (4.0 * kPi * leg1 * leg2);
        const std::complex<double> amp =
            root_n * gain * std::polar(1.0, -2.0 * kPi * (leg1 + leg2) / lambda);
        h += amp * near_field_steering(geom, sc.position);
    }
    return h;
}

/// Rectangular region in (theta, range) space used for scene sampling.
struct SceneRegion {
    double theta_min = -0.8;
    double theta_max = 0.8;
    double range_min = 0.0;
    double range_max = 0.0;
};

inline void validate_region(const ArrayGeometry& geom, const SceneRegion& region,
                            const char* label) {
    const std::string where(label);
    if (region.theta_min < -1.0 || region.theta_max > 1.0 ||
        region.theta_min > region.theta_max)
        throw std::invalid_argument(where + ": theta bounds must satisfy -1 <= lo <= hi <= 1");
    if (!(region.range_min > 0.5 * geom.aperture()))
        throw std::invalid_argument(where + ": range_min must exceed half the aperture");
    if (!(region.range_max >= region.range_min))
        throw std::invalid_argument(where + ": range bounds are empty");
    if (geom.n_antennas >= 2) {
        const double rayleigh = fresnel_rayleigh(geom).second;
        if (region.range_max > rayleigh * (1.0 + 1e-12))
            throw std::invalid_argument(where + ": range_max lies beyond the Rayleigh distance");
    }
}

/// Draws a scene: user uniform over the user region, path_count - 1
/// scatterers uniform over the scatter region, reflection coefficients
/// standard complex Gaussian. Fully determined by the rng state.
inline ChannelScene sample_scene(Rng& rng, int path_count, const SceneRegion& user_region,
                                 const SceneRegion& scatter_region,
                                 const ArrayGeometry& geom) {
    if (path_count < 1)
        throw std::invalid_argument("sample_scene: path_count must be >= 1");
    validate_region(geom, user_region, "user_region");
    validate_region(geom, scatter_region, "scatter_region");

    ChannelScene scene;
    scene.geometry = geom;
    scene.user.theta = rng.uniform(user_region.theta_min, user_region.theta_max);
    scene.user.range = rng.uniform(user_region.range_min, user_region.range_max);
    scene.scatterers.reserve(path_count - 1);
    for (int l = 1; l < path_count; ++l) {
        Scatterer sc;
        sc.position.theta = rng.uniform(scatter_region.theta_min, scatter_region.theta_max);
        sc.position.range = rng.uniform(scatter_region.range_min, scatter_region.range_max);
        sc.reflection = rng.complex_normal();
        scene.scatterers.push_back(sc);
    }
    return scene;
}

/// Whether the reference SNR counts the single-antenna line-of-sight power
/// only, or includes the full array gain N.
enum class SnrReference { per_antenna, array };

/// Noise power from a reference SNR: sigma^2 = p_ref / 10^(snr/10) with
/// p_ref the line-of-sight power of a user at the reference point.
inline NoiseModel derive_noise(const PolarPoint& reference, double snr_db,
                               const ArrayGeometry& geom,
                               SnrReference mode = SnrReference::per_antenna) {
    if (!std::isfinite(snr_db))
        throw std::invalid_argument("derive_noise: snr_db must be finite");
    if (!(reference.range > 0.0))
        throw std::invalid_argument("derive_noise: reference range must be > 0");
    const double gain = geom.wavelength / (4.0 * kPi * reference.range);
    double power = gain * gain;
    if (mode == SnrReference::array)
        power *= geom.n_antennas;
    NoiseModel noise;
    noise.reference_snr_db = snr_db;
    noise.sigma_sq = power / std::pow(10.0, snr_db / 10.0);
    return noise;
}

} // namespace beamtrain
