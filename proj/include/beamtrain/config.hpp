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

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "beamtrain/channel.hpp"
#include "beamtrain/codebook.hpp"
#include "beamtrain/lasso.hpp"
#include "beamtrain/metrics.hpp"
#include "beamtrain/refine.hpp"

namespace beamtrain {

/// Configuration problem, carrying the offending field path.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& field, const std::string& message)
        : std::runtime_error(field + ": " + message), field_(field) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

struct GeometryConfig {
    int n_antennas = 512;
    double spacing_wavelengths = 0.5;
    double carrier_hz = 100e9;

    ArrayGeometry make() const {
        const double lambda = kSpeedOfLight / carrier_hz;
        return ArrayGeometry(n_antennas, spacing_wavelengths * lambda, lambda);
    }
};

struct SceneConfig {
    int path_count = 5;
    int seed_count = 100;
    std::uint64_t base_seed = 1;
    // Either explicit bounds, or the geometry's [Fresnel, Rayleigh] span.
    std::optional<SceneRegion> user_region;
    std::optional<SceneRegion> scatter_region;
    double theta_min = -0.8;
    double theta_max = 0.8;
    CosineConvention cosine = CosineConvention::spatial;

    SceneRegion resolve_user(const ArrayGeometry& geom) const {
        return resolve(user_region, geom);
    }
    SceneRegion resolve_scatter(const ArrayGeometry& geom) const {
        return resolve(scatter_region, geom);
    }

private:
    SceneRegion resolve(const std::optional<SceneRegion>& explicit_region,
                        const ArrayGeometry& geom) const {
        if (explicit_region)
            return *explicit_region;
        const auto [fresnel, rayleigh] = fresnel_rayleigh(geom);
        return SceneRegion{theta_min, theta_max, fresnel, rayleigh};
    }
};

struct NoiseConfig {
    PolarPoint reference{0.0, 5.0};
    SnrReference mode = SnrReference::per_antenna;
};

struct SolverConfig {
    LassoConfig lasso;
    bool lasso_weight_auto = true;  // weight sigma sqrt(2 log K) scaled by the factor below
    double lasso_weight_scale = 1.0;
    RefineConfig refine;
    double pinv_tol = 1e-10;
    double max_failure_fraction = 0.05;

    double resolve_lasso_weight(double sigma, int k) const {
        return lasso_weight_auto ? universal_lasso_weight(sigma, k, lasso_weight_scale)
                                 : lasso.lasso_weight;
    }
};

struct OverheadExperiment {
    double snr_db = 4.0;
    std::vector<int> k_list;
    std::vector<Scheme> schemes{Scheme::dft, Scheme::nf, Scheme::nf_lasso};
};

struct SnrExperiment {
    int overhead = 15;
    std::vector<double> snr_db_list;
    std::vector<Scheme> schemes{Scheme::dft, Scheme::nf, Scheme::nf_lasso};
};

struct PathsExperiment {
    double snr_db = 40.0;
    std::vector<int> path_list{1, 3, 5, 7, 9};
    double fraction = 0.99;
    int k_max = 80;
    std::vector<Scheme> schemes{Scheme::nf, Scheme::dft};
};

struct RefineExperiment {
    double snr_db = 30.0;
    std::vector<int> k_list{15};
    std::vector<std::string> codebooks{"polar", "polar_coarse"};
    std::vector<Scheme> schemes{Scheme::nf_lasso, Scheme::nf_refine, Scheme::dft,
                                Scheme::dft_refine};
};

struct ExperimentConfig {
    GeometryConfig geometry;
    std::map<std::string, PolarCodebookConfig> polar_codebooks;
    SceneConfig scene;
    NoiseConfig noise;
    SolverConfig solver;
    OverheadExperiment overhead;
    SnrExperiment snr;
    PathsExperiment paths;
    RefineExperiment refine;
    nlohmann::json source; // parsed file, echoed into manifests
};

/// Full-scale preset: N = 512 at 100 GHz with the fine (beta = 1.6) and
/// coarse (beta = 2.384) polar codebooks.
inline ExperimentConfig full_scale_config() {
    ExperimentConfig cfg;
    cfg.polar_codebooks["polar"] = PolarCodebookConfig{1.6, 512, 6, std::nullopt};
    cfg.polar_codebooks["polar_coarse"] = PolarCodebookConfig{2.384, 332, 2, std::nullopt};
    for (int k = 1; k <= 25; ++k)
        cfg.overhead.k_list.push_back(k);
    for (double snr = 4.0; snr <= 30.0; snr += 2.0)
        cfg.snr.snr_db_list.push_back(snr);
    return cfg;
}

/// Desk-scale preset: N = 128 with proportionally scaled codebooks; runs the
/// whole pipeline in seconds for smoke tests and demos.
inline ExperimentConfig desk_scale_config() {
    ExperimentConfig cfg = full_scale_config();
    cfg.geometry.n_antennas = 128;
    cfg.polar_codebooks["polar"] = PolarCodebookConfig{1.6, 128, 6, std::nullopt};
    cfg.polar_codebooks["polar_coarse"] = PolarCodebookConfig{2.384, 84, 2, std::nullopt};
    cfg.scene.seed_count = 20;
    cfg.paths.k_max = 40;
    return cfg;
}

namespace detail {

template <typename T>
T get_field(const nlohmann::json& j, const std::string& path, const std::string& key) {
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(path + "." + key, e.what());
    }
}

template <typename T>
void maybe_set(const nlohmann::json& j, const std::string& path, const std::string& key,
               T& target) {
    if (j.contains(key))
        target = get_field<T>(j, path, key);
}

inline std::vector<Scheme> parse_schemes(const nlohmann::json& j, const std::string& path) {
    std::vector<Scheme> schemes;
    for (const auto& name : j) {
        const auto scheme = scheme_from_name(name.get<std::string>());
        if (!scheme)
            throw ConfigError(path, "unknown scheme '" + name.get<std::string>() + "'");
        schemes.push_back(*scheme);
    }
    if (schemes.empty())
        throw ConfigError(path, "scheme list must be non-empty");
    return schemes;
}

inline SceneRegion parse_region(const nlohmann::json& j, const std::string& path) {
    SceneRegion region;
    const auto theta = get_field<std::vector<double>>(j, path, "theta");
    const auto range = get_field<std::vector<double>>(j, path, "range_m");
    if (theta.size() != 2 || range.size() != 2)
        throw ConfigError(path, "theta and range_m must be [lo, hi] pairs");
    region.theta_min = theta[0];
    region.theta_max = theta[1];
    region.range_min = range[0];
    region.range_max = range[1];
    return region;
}

} // namespace detail

inline ExperimentConfig parse_config(const nlohmann::json& j) {
    ExperimentConfig cfg = full_scale_config();
    cfg.source = j;
    using detail::get_field;
    using detail::maybe_set;

    if (j.contains("preset")) {
        const auto preset = j.at("preset").get<std::string>();
        if (preset == "desk_scale")
            cfg = desk_scale_config();
        else if (preset != "full_scale")
            throw ConfigError("preset", "unknown preset '" + preset + "'");
        cfg.source = j;
    }

    if (j.contains("geometry")) {
        const auto& g = j.at("geometry");
        maybe_set(g, "geometry", "n_antennas", cfg.geometry.n_antennas);
        maybe_set(g, "geometry", "spacing_wavelengths", cfg.geometry.spacing_wavelengths);
        maybe_set(g, "geometry", "carrier_hz", cfg.geometry.carrier_hz);
        if (cfg.geometry.n_antennas < 1)
            throw ConfigError("geometry.n_antennas", "must be >= 1");
        if (!(cfg.geometry.spacing_wavelengths > 0.0))
            throw ConfigError("geometry.spacing_wavelengths", "must be > 0");
        if (!(cfg.geometry.carrier_hz > 0.0))
            throw ConfigError("geometry.carrier_hz", "must be > 0");
    }

    if (j.contains("codebooks")) {
        for (const auto& [name, spec] : j.at("codebooks").items()) {
            const std::string path = "codebooks." + name;
            PolarCodebookConfig pc;
            maybe_set(spec, path, "beta", pc.beta);
            maybe_set(spec, path, "angle_count", pc.angle_count);
            maybe_set(spec, path, "max_rings", pc.max_rings);
            if (spec.contains("range_bounds_m")) {
                const auto bounds =
                    detail::get_field<std::vector<double>>(spec, path, "range_bounds_m");
                if (bounds.size() != 2)
                    throw ConfigError(path + ".range_bounds_m", "must be [lo, hi]");
                pc.range_bounds = std::make_pair(bounds[0], bounds[1]);
            }
            if (!(pc.beta > 0.0))
                throw ConfigError(path + ".beta", "must be > 0");
            if (pc.angle_count < 1)
                throw ConfigError(path + ".angle_count", "must be >= 1");
            if (pc.max_rings < 1)
                throw ConfigError(path + ".max_rings", "must be >= 1");
            cfg.polar_codebooks[name] = pc;
        }
    }

    if (j.contains("scene")) {
        const auto& s = j.at("scene");
        maybe_set(s, "scene", "paths", cfg.scene.path_count);
        maybe_set(s, "scene", "seed_count", cfg.scene.seed_count);
        maybe_set(s, "scene", "base_seed", cfg.scene.base_seed);
        maybe_set(s, "scene", "theta_min", cfg.scene.theta_min);
        maybe_set(s, "scene", "theta_max", cfg.scene.theta_max);
        if (s.contains("user_region"))
            cfg.scene.user_region = detail::parse_region(s.at("user_region"), "scene.user_region");
        if (s.contains("scatter_region"))
            cfg.scene.scatter_region =
                detail::parse_region(s.at("scatter_region"), "scene.scatter_region");
        if (s.contains("cosine_angles")) {
            const auto mode = s.at("cosine_angles").get<std::string>();
            if (mode == "spatial")
                cfg.scene.cosine = CosineConvention::spatial;
            else if (mode == "physical")
                cfg.scene.cosine = CosineConvention::physical;
            else
                throw ConfigError("scene.cosine_angles", "must be 'spatial' or 'physical'");
        }
        if (cfg.scene.path_count < 1)
            throw ConfigError("scene.paths", "must be >= 1");
        if (cfg.scene.seed_count < 1)
            throw ConfigError("scene.seed_count", "must be >= 1");
    }

    if (j.contains("noise")) {
        const auto& n = j.at("noise");
        maybe_set(n, "noise", "reference_theta", cfg.noise.reference.theta);
        maybe_set(n, "noise", "reference_range_m", cfg.noise.reference.range);
        if (n.contains("snr_reference")) {
            const auto mode = n.at("snr_reference").get<std::string>();
            if (mode == "per_antenna")
                cfg.noise.mode = SnrReference::per_antenna;
            else if (mode == "array")
                cfg.noise.mode = SnrReference::array;
            else
                throw ConfigError("noise.snr_reference", "must be 'per_antenna' or 'array'");
        }
        if (!(cfg.noise.reference.range > 0.0))
            throw ConfigError("noise.reference_range_m", "must be > 0");
    }

    if (j.contains("solver")) {
        const auto& s = j.at("solver");
        if (s.contains("lasso")) {
            const auto& l = s.at("lasso");
            if (l.contains("weight")) {
                if (l.at("weight").is_string()) {
                    if (l.at("weight").get<std::string>() != "auto")
                        throw ConfigError("solver.lasso.weight", "must be a number or 'auto'");
                    cfg.solver.lasso_weight_auto = true;
                } else {
                    cfg.solver.lasso_weight_auto = false;
                    cfg.solver.lasso.lasso_weight = l.at("weight").get<double>();
                    if (cfg.solver.lasso.lasso_weight < 0.0)
                        throw ConfigError("solver.lasso.weight", "must be >= 0");
                }
            }
            maybe_set(l, "solver.lasso", "weight_scale", cfg.solver.lasso_weight_scale);
            maybe_set(l, "solver.lasso", "max_iters", cfg.solver.lasso.max_iters);
            maybe_set(l, "solver.lasso", "tol", cfg.solver.lasso.tol);
            if (l.contains("algorithm")) {
                const auto algo = l.at("algorithm").get<std::string>();
                if (algo == "coordinate_descent")
                    cfg.solver.lasso.algorithm = LassoAlgorithm::coordinate_descent;
                else if (algo == "ista")
                    cfg.solver.lasso.algorithm = LassoAlgorithm::ista;
                else if (algo == "fista")
                    cfg.solver.lasso.algorithm = LassoAlgorithm::fista;
                else
                    throw ConfigError("solver.lasso.algorithm",
                                      "must be coordinate_descent, ista, or fista");
            }
            if (!(cfg.solver.lasso.tol > 0.0))
                throw ConfigError("solver.lasso.tol", "must be > 0");
        }
        if (s.contains("refine")) {
            const auto& r = s.at("refine");
            maybe_set(r, "solver.refine", "step_theta", cfg.solver.refine.step_theta);
            maybe_set(r, "solver.refine", "step_range", cfg.solver.refine.step_range);
            maybe_set(r, "solver.refine", "max_outer_iters",
                      cfg.solver.refine.max_outer_iters);
            maybe_set(r, "solver.refine", "alternate_inner_iters",
                      cfg.solver.refine.alternate_inner_iters);
            maybe_set(r, "solver.refine", "range_min_m", cfg.solver.refine.range_min);
            if (!(cfg.solver.refine.step_theta > 0.0) ||
                !(cfg.solver.refine.step_range > 0.0))
                throw ConfigError("solver.refine", "step sizes must be > 0");
        }
        maybe_set(s, "solver", "pinv_tol", cfg.solver.pinv_tol);
        maybe_set(s, "solver", "max_failure_fraction", cfg.solver.max_failure_fraction);
    }

    if (j.contains("overhead")) {
        const auto& o = j.at("overhead");
        maybe_set(o, "overhead", "snr_db", cfg.overhead.snr_db);
        if (o.contains("k_list"))
            cfg.overhead.k_list = get_field<std::vector<int>>(o, "overhead", "k_list");
        if (o.contains("schemes"))
            cfg.overhead.schemes = detail::parse_schemes(o.at("schemes"), "overhead.schemes");
        if (cfg.overhead.k_list.empty())
            throw ConfigError("overhead.k_list", "must be non-empty");
        for (int k : cfg.overhead.k_list)
            if (k < 1)
                throw ConfigError("overhead.k_list", "entries must be >= 1");
    }

    if (j.contains("snr")) {
        const auto& s = j.at("snr");
        maybe_set(s, "snr", "k", cfg.snr.overhead);
        if (s.contains("snr_db_list"))
            cfg.snr.snr_db_list = get_field<std::vector<double>>(s, "snr", "snr_db_list");
        if (s.contains("schemes"))
            cfg.snr.schemes = detail::parse_schemes(s.at("schemes"), "snr.schemes");
        if (cfg.snr.overhead < 1)
            throw ConfigError("snr.k", "must be >= 1");
        if (cfg.snr.snr_db_list.empty())
            throw ConfigError("snr.snr_db_list", "must be non-empty");
    }

    if (j.contains("paths")) {
        const auto& p = j.at("paths");
        maybe_set(p, "paths", "snr_db", cfg.paths.snr_db);
        maybe_set(p, "paths", "fraction", cfg.paths.fraction);
        maybe_set(p, "paths", "k_max", cfg.paths.k_max);
        if (p.contains("l_list"))
            cfg.paths.path_list = get_field<std::vector<int>>(p, "paths", "l_list");
        if (p.contains("schemes"))
            cfg.paths.schemes = detail::parse_schemes(p.at("schemes"), "paths.schemes");
        if (cfg.paths.path_list.empty())
            throw ConfigError("paths.l_list", "must be non-empty");
        if (!(cfg.paths.fraction > 0.0) || cfg.paths.fraction > 1.0)
            throw ConfigError("paths.fraction", "must be in (0, 1]");
        if (cfg.paths.k_max < 1)
            throw ConfigError("paths.k_max", "must be >= 1");
    }

    if (j.contains("refine")) {
        const auto& r = j.at("refine");
        maybe_set(r, "refine", "snr_db", cfg.refine.snr_db);
        if (r.contains("k_list"))
            cfg.refine.k_list = get_field<std::vector<int>>(r, "refine", "k_list");
        if (r.contains("codebooks"))
            cfg.refine.codebooks =
                get_field<std::vector<std::string>>(r, "refine", "codebooks");
        if (r.contains("schemes"))
            cfg.refine.schemes = detail::parse_schemes(r.at("schemes"), "refine.schemes");
        if (cfg.refine.k_list.empty())
            throw ConfigError("refine.k_list", "must be non-empty");
        if (cfg.refine.codebooks.empty())
            throw ConfigError("refine.codebooks", "must be non-empty");
    }

    for (const std::string& name : cfg.refine.codebooks)
        if (!cfg.polar_codebooks.count(name))
            throw ConfigError("refine.codebooks", "unknown codebook '" + name + "'");

    return cfg;
}

inline ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("config", "cannot open '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config", std::string("parse failure: ") + e.what());
    }
    return parse_config(j);
}

} // namespace beamtrain
