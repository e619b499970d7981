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

#include <atomic>
#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "beamtrain/channel.hpp"
#include "beamtrain/codebook.hpp"
#include "beamtrain/config.hpp"
#include "beamtrain/io.hpp"
#include "beamtrain/metrics.hpp"
#include "beamtrain/reconstruct.hpp"
#include "beamtrain/refine.hpp"
#include "beamtrain/rng.hpp"
#include "beamtrain/sweep.hpp"

namespace beamtrain {

/// Runs body(0..count-1) on a worker pool. Each index owns its output slot,
/// so the result is identical for any worker count.
inline void parallel_for(std::size_t count, int workers,
                         const std::function<void(std::size_t)>& body) {
    workers = std::max(workers, 1);
    if (workers == 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i)
            body(i);
        return;
    }
    std::atomic<std::size_t> cursor{0};
    std::atomic<bool> failed{false};
    std::mutex error_mutex;
    std::exception_ptr first_error;
    auto drain = [&]() {
        while (!failed.load(std::memory_order_relaxed)) {
            const std::size_t i = cursor.fetch_add(1);
            if (i >= count)
                return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error)
                    first_error = std::current_exception();
                failed.store(true, std::memory_order_relaxed);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w)
        pool.emplace_back(drain);
    for (std::thread& t : pool)
        t.join();
    if (first_error)
        std::rethrow_exception(first_error);
}

struct RunOutput {
    std::vector<TrialRecord> records;
    std::size_t solver_calls = 0;
    std::size_t solver_failures = 0;
    nlohmann::json summary;

    double failure_fraction() const {
        return solver_calls ? static_cast<double>(solver_failures) / solver_calls : 0.0;
    }
};

namespace detail {

// Stream tags keep scene sampling, and the noise of each swept codebook,
// on independent reproducible substreams of the base seed.
inline constexpr std::uint64_t kSceneTag = 0x5CE9E0ULL;
inline constexpr std::uint64_t kNoiseTag = 0xA015E0ULL;

inline ChannelScene trial_scene(const ExperimentConfig& cfg, const ArrayGeometry& geom,
                                std::uint64_t seed_index, int path_count) {
    Rng rng(derive_stream(cfg.scene.base_seed, kSceneTag + seed_index,
                          static_cast<std::uint64_t>(path_count)));
    return sample_scene(rng, path_count, cfg.scene.resolve_user(geom),
                        cfg.scene.resolve_scatter(geom), geom);
}

inline Eigen::VectorXcd trial_unit_noise(const ExperimentConfig& cfg,
                                         std::uint64_t seed_index,
                                         std::uint64_t codebook_slot, Eigen::Index count) {
    Rng rng(derive_stream(cfg.scene.base_seed, kNoiseTag + seed_index, codebook_slot));
    return draw_unit_noise(rng, count);
}

inline bool scheme_uses_polar(Scheme scheme) {
    return scheme == Scheme::nf || scheme == Scheme::nf_lasso ||
           scheme == Scheme::nf_refine;
}

inline bool any_scheme_uses_polar(const std::vector<Scheme>& schemes) {
    for (Scheme s : schemes)
        if (scheme_uses_polar(s))
            return true;
    return false;
}

inline bool any_scheme_uses_dft(const std::vector<Scheme>& schemes) {
    for (Scheme s : schemes)
        if (!scheme_uses_polar(s))
            return true;
    return false;
}

inline ReconstructionResult reconstruct_scheme(Scheme scheme, const Codebook& codebook,
                                               const FeedbackReport& report,
                                               const ArrayGeometry& geom,
                                               const SolverConfig& solver, double sigma) {
    const Eigen::MatrixXcd subset = subcodebook(codebook, report.indices);
    switch (scheme) {
    case Scheme::dft:
        return reconstruct_orthonormal(subset, report);
    case Scheme::nf:
        return reconstruct_ls(subset, report, solver.pinv_tol);
    case Scheme::nf_lasso: {
        LassoConfig lasso = solver.lasso;
        lasso.lasso_weight = solver.resolve_lasso_weight(sigma, report.overhead());
        return reconstruct_lasso(subset, report, lasso);
    }
    case Scheme::nf_refine: {
        LassoConfig lasso = solver.lasso;
        lasso.lasso_weight = solver.resolve_lasso_weight(sigma, report.overhead());
        return refine(geom, subset, report, submeta(codebook, report.indices),
                      solver.refine, lasso, RefineMode::polar);
    }
    case Scheme::dft_refine:
        return refine(geom, subset, report, submeta(codebook, report.indices),
                      solver.refine, solver.lasso, RefineMode::dft);
    }
    throw std::logic_error("reconstruct_scheme: unhandled scheme");
}

inline constexpr double kZeroEstimateL2 = 1.4142135623730951; // orthogonal-estimate level

inline TrialRecord make_record(Scheme scheme, int overhead, double snr_db, int path_count,
                               std::uint64_t seed, const Eigen::VectorXcd& h,
                               const Eigen::VectorXcd& h_hat, double sigma_sq,
                               double rate_upper) {
    TrialRecord rec;
    rec.scheme = scheme;
    rec.overhead = overhead;
    rec.snr_db = snr_db;
    rec.path_count = path_count;
    rec.seed = seed;
    rec.rate_upper_bps_hz = rate_upper;
    if (h_hat.squaredNorm() > 0.0) {
        rec.l2_error = l2_error(h, h_hat);
        rec.l2_error_aligned = l2_error_phase_aligned(h, h_hat);
        rec.rate_bps_hz = achievable_rate(h, h_hat, sigma_sq);
    } else {
        // An all-zero estimate carries no beam: rate 0, error at the
        // orthogonal level.
        rec.l2_error = kZeroEstimateL2;
        rec.l2_error_aligned = kZeroEstimateL2;
        rec.rate_bps_hz = 0.0;
    }
    return rec;
}

inline void tally(RunOutput& out, const SolverDiagnostics& diag) {
    out.solver_calls += 1;
    out.solver_failures += diag.converged ? 0 : 1;
}

struct CellResult {
    std::vector<TrialRecord> records;
    std::size_t solver_calls = 0;
    std::size_t solver_failures = 0;
};

inline void merge_cells(RunOutput& out, std::vector<CellResult>& cells) {
    for (CellResult& cell : cells) {
        out.records.insert(out.records.end(), cell.records.begin(), cell.records.end());
        out.solver_calls += cell.solver_calls;
        out.solver_failures += cell.solver_failures;
    }
}

} // namespace detail

/// Feedback overhead sweep at a fixed SNR: one scene per seed, one sweep per
/// codebook, every K reselects from the same measurements.
inline RunOutput run_overhead_sweep(const ExperimentConfig& cfg, int parallel = 1) {
    const ArrayGeometry geom = cfg.geometry.make();
    const NoiseModel noise =
        derive_noise(cfg.noise.reference, cfg.overhead.snr_db, geom, cfg.noise.mode);
    const double sigma = std::sqrt(noise.sigma_sq);

    std::optional<Codebook> dft_book, polar_book;
    if (detail::any_scheme_uses_dft(cfg.overhead.schemes))
        dft_book = build_dft_codebook(geom);
    if (detail::any_scheme_uses_polar(cfg.overhead.schemes))
        polar_book = build_polar_codebook(geom, cfg.polar_codebooks.at("polar"));

    const std::size_t seeds = static_cast<std::size_t>(cfg.scene.seed_count);
    std::vector<detail::CellResult> cells(seeds);

    parallel_for(seeds, parallel, [&](std::size_t seed_index) {
        detail::CellResult& cell = cells[seed_index];
        const ChannelScene scene =
            detail::trial_scene(cfg, geom, seed_index, cfg.scene.path_count);
        const Eigen::VectorXcd h = synthesize_channel(scene, cfg.scene.cosine);
        const double upper = perfect_csi_rate(h, noise.sigma_sq);

        std::map<bool, SweepResult> sweeps; // keyed by "uses polar"
        if (dft_book) {
            SweepResult sweep;
            sweep.measurements =
                noiseless_measurements(h, *dft_book) +
                sigma * detail::trial_unit_noise(cfg, seed_index, 0, dft_book->size());
            sweep.codebook_ref = dft_book->name;
            sweep.noise = noise;
            sweeps[false] = std::move(sweep);
        }
        if (polar_book) {
            SweepResult sweep;
            sweep.measurements =
                noiseless_measurements(h, *polar_book) +
                sigma * detail::trial_unit_noise(cfg, seed_index, 1, polar_book->size());
            sweep.codebook_ref = polar_book->name;
            sweep.noise = noise;
            sweeps[true] = std::move(sweep);
        }

        for (int k : cfg.overhead.k_list) {
            for (Scheme scheme : cfg.overhead.schemes) {
                const bool polar = detail::scheme_uses_polar(scheme);
                const Codebook& book = polar ? *polar_book : *dft_book;
                if (k > book.size())
                    throw ConfigError("overhead.k_list",
                                      "K exceeds codebook size " + std::to_string(book.size()));
                const FeedbackReport report = select_top_k(sweeps.at(polar), k);
                const ReconstructionResult res = detail::reconstruct_scheme(
                    scheme, book, report, geom, cfg.solver, sigma);
                cell.solver_calls += 1;
                cell.solver_failures += res.diagnostics.converged ? 0 : 1;
                cell.records.push_back(detail::make_record(
                    scheme, k, cfg.overhead.snr_db, cfg.scene.path_count, seed_index, h,
                    res.h_hat, noise.sigma_sq, upper));
            }
        }
    });

    RunOutput out;
    detail::merge_cells(out, cells);
    return out;
}

/// SNR sweep at fixed K. The noise realization of each (seed, codebook) is
/// drawn once and scaled per SNR point, pairing the whole axis.
inline RunOutput run_snr_sweep(const ExperimentConfig& cfg, int parallel = 1) {
    const ArrayGeometry geom = cfg.geometry.make();
    std::optional<Codebook> dft_book, polar_book;
    if (detail::any_scheme_uses_dft(cfg.snr.schemes))
        dft_book = build_dft_codebook(geom);
    if (detail::any_scheme_uses_polar(cfg.snr.schemes))
        polar_book = build_polar_codebook(geom, cfg.polar_codebooks.at("polar"));

    const std::size_t seeds = static_cast<std::size_t>(cfg.scene.seed_count);
    std::vector<detail::CellResult> cells(seeds);

    parallel_for(seeds, parallel, [&](std::size_t seed_index) {
        detail::CellResult& cell = cells[seed_index];
        const ChannelScene scene =
            detail::trial_scene(cfg, geom, seed_index, cfg.scene.path_count);
        const Eigen::VectorXcd h = synthesize_channel(scene, cfg.scene.cosine);

        Eigen::VectorXcd dft_clean, dft_unit, polar_clean, polar_unit;
        if (dft_book) {
            dft_clean = noiseless_measurements(h, *dft_book);
            dft_unit = detail::trial_unit_noise(cfg, seed_index, 0, dft_book->size());
        }
        if (polar_book) {
            polar_clean = noiseless_measurements(h, *polar_book);
            polar_unit = detail::trial_unit_noise(cfg, seed_index, 1, polar_book->size());
        }

        for (double snr_db : cfg.snr.snr_db_list) {
            const NoiseModel noise =
                derive_noise(cfg.noise.reference, snr_db, geom, cfg.noise.mode);
            const double sigma = std::sqrt(noise.sigma_sq);
            const double upper = perfect_csi_rate(h, noise.sigma_sq);

            std::map<bool, SweepResult> sweeps;
            if (dft_book) {
                SweepResult sweep{dft_clean + sigma * dft_unit, dft_book->name, noise};
                sweeps[false] = std::move(sweep);
            }
            if (polar_book) {
                SweepResult sweep{polar_clean + sigma * polar_unit, polar_book->name, noise};
                sweeps[true] = std::move(sweep);
            }

            for (Scheme scheme : cfg.snr.schemes) {
                const bool polar = detail::scheme_uses_polar(scheme);
                const Codebook& book = polar ? *polar_book : *dft_book;
                if (cfg.snr.overhead > book.size())
                    throw ConfigError("snr.k", "K exceeds codebook size");
                const FeedbackReport report =
                    select_top_k(sweeps.at(polar), cfg.snr.overhead);
                const ReconstructionResult res = detail::reconstruct_scheme(
                    scheme, book, report, geom, cfg.solver, sigma);
                cell.solver_calls += 1;
                cell.solver_failures += res.diagnostics.converged ? 0 : 1;
                cell.records.push_back(detail::make_record(
                    scheme, cfg.snr.overhead, snr_db, cfg.scene.path_count, seed_index,
                    h, res.h_hat, noise.sigma_sq, upper));
            }
        }
    });

    RunOutput out;
    detail::merge_cells(out, cells);
    return out;
}

namespace detail {

/// Records for K = 1..k_max of one scheme within one trial, computed from
/// the top-k_max selection. Selections nest, so the Gram matrix and clean
/// projections of the widest report cover every K by prefix.
inline void scan_overheads(Scheme scheme, const Codebook& book, const SweepResult& sweep,
                           const Eigen::VectorXcd& clean, const Eigen::VectorXcd& h,
                           double sigma_sq, double rate_upper, int k_max, double snr_db,
                           int path_count, std::uint64_t seed, const SolverConfig& solver,
                           CellResult& cell) {
    const int limit = std::min<int>(k_max, book.size());
    const FeedbackReport widest = select_top_k(sweep, limit);
    const double norm_true = h.norm();
    const double sigma = std::sqrt(sigma_sq);

    Eigen::VectorXcd clean_sel(limit);
    for (int i = 0; i < limit; ++i)
        clean_sel[i] = clean[widest.indices[static_cast<std::size_t>(i)]];

    Eigen::MatrixXcd gram;
    if (scheme != Scheme::dft) {
        const Eigen::MatrixXcd subset = subcodebook(book, widest.indices);
        gram = subset.adjoint() * subset;
    }
    const Eigen::VectorXcd target = widest.values.conjugate();

    for (int k = 1; k <= limit; ++k) {
        Eigen::VectorXcd alpha;
        if (scheme == Scheme::dft) {
            alpha = target.head(k);
        } else if (scheme == Scheme::nf) {
            alpha = ls_coefficients_from_gram(gram.topLeftCorner(k, k), target.head(k),
                                              solver.pinv_tol);
            cell.solver_calls += 1;
        } else {
            LassoConfig lasso = solver.lasso;
            lasso.lasso_weight = solver.resolve_lasso_weight(sigma, k);
            const LassoSolution sol =
                lasso_solve(gram.topLeftCorner(k, k), target.head(k), lasso);
            alpha = sol.coefficients;
            cell.solver_calls += 1;
            cell.solver_failures += sol.converged ? 0 : 1;
        }

        TrialRecord rec;
        rec.scheme = scheme;
        rec.overhead = k;
        rec.snr_db = snr_db;
        rec.path_count = path_count;
        rec.seed = seed;
        rec.rate_upper_bps_hz = rate_upper;
        const double norm_est_sq =
            scheme == Scheme::dft
                ? alpha.squaredNorm()
                : std::real(alpha.dot(gram.topLeftCorner(k, k) * alpha));
        if (norm_est_sq > 0.0) {
            // h^H h_hat equals the clean projections contracted with alpha.
            const std::complex<double> inner =
                clean_sel.head(k).cwiseProduct(alpha).sum();
            const double norm_est = std::sqrt(norm_est_sq);
            rec.rate_bps_hz = achievable_rate_from_inner(inner, norm_est_sq, sigma_sq);
            rec.l2_error = l2_error_from_inner(inner, norm_true, norm_est);
            const double cosine = std::abs(inner) / (norm_true * norm_est);
            rec.l2_error_aligned =
                std::sqrt(std::max(2.0 - 2.0 * std::min(cosine, 1.0), 0.0));
        } else {
            rec.rate_bps_hz = 0.0;
            rec.l2_error = kZeroEstimateL2;
            rec.l2_error_aligned = kZeroEstimateL2;
        }
        cell.records.push_back(rec);
    }
}

} // namespace detail

/// Path-count sweep: for each L, rates over K = 1..k_max feed the minimum
/// overhead search. The summary carries both the ensemble-mean answer and
/// the per-seed answers.
inline RunOutput run_path_sweep(const ExperimentConfig& cfg, int parallel = 1) {
    for (Scheme scheme : cfg.paths.schemes)
        if (scheme == Scheme::nf_refine || scheme == Scheme::dft_refine)
            throw ConfigError("paths.schemes",
                              "refined schemes are not supported in the overhead scan");

    const ArrayGeometry geom = cfg.geometry.make();
    const NoiseModel noise =
        derive_noise(cfg.noise.reference, cfg.paths.snr_db, geom, cfg.noise.mode);
    const double sigma = std::sqrt(noise.sigma_sq);

    std::optional<Codebook> dft_book, polar_book;
    if (detail::any_scheme_uses_dft(cfg.paths.schemes))
        dft_book = build_dft_codebook(geom);
    if (detail::any_scheme_uses_polar(cfg.paths.schemes))
        polar_book = build_polar_codebook(geom, cfg.polar_codebooks.at("polar"));

    const std::size_t seeds = static_cast<std::size_t>(cfg.scene.seed_count);
    const std::size_t cells_count = seeds * cfg.paths.path_list.size();
    std::vector<detail::CellResult> cells(cells_count);

    parallel_for(cells_count, parallel, [&](std::size_t cell_index) {
        const std::size_t l_index = cell_index / seeds;
        const std::uint64_t seed_index = cell_index % seeds;
        const int path_count = cfg.paths.path_list[l_index];

        detail::CellResult& cell = cells[cell_index];
        const ChannelScene scene = detail::trial_scene(cfg, geom, seed_index, path_count);
        const Eigen::VectorXcd h = synthesize_channel(scene, cfg.scene.cosine);
        const double upper = perfect_csi_rate(h, noise.sigma_sq);

        for (Scheme scheme : cfg.paths.schemes) {
            const bool polar = detail::scheme_uses_polar(scheme);
            const Codebook& book = polar ? *polar_book : *dft_book;
            const Eigen::VectorXcd clean = noiseless_measurements(h, book);
            SweepResult sweep;
            sweep.measurements =
                clean + sigma * detail::trial_unit_noise(cfg, seed_index, polar ? 1 : 0,
                                                         book.size());
            sweep.codebook_ref = book.name;
            sweep.noise = noise;
            detail::scan_overheads(scheme, book, sweep, clean, h, noise.sigma_sq, upper,
                                   cfg.paths.k_max, cfg.paths.snr_db, path_count,
                                   seed_index, cfg.solver, cell);
        }
    });

    RunOutput out;
    detail::merge_cells(out, cells);

    // Minimum overhead per (scheme, L): ensemble-mean form plus per-seed values.
    nlohmann::json summary;
    for (Scheme scheme : cfg.paths.schemes) {
        nlohmann::json per_l = nlohmann::json::object();
        nlohmann::json per_seed_l = nlohmann::json::object();
        for (std::size_t l_index = 0; l_index < cfg.paths.path_list.size(); ++l_index) {
            const int path_count = cfg.paths.path_list[l_index];
            std::vector<TrialRecord> slice;
            for (const TrialRecord& rec : out.records)
                if (rec.scheme == scheme && rec.path_count == path_count)
                    slice.push_back(rec);
            const auto k_min =
                min_overhead_for_fraction(slice, scheme, cfg.paths.fraction, cfg.paths.k_max);
            per_l[std::to_string(path_count)] =
                k_min ? nlohmann::json(*k_min) : nlohmann::json(nullptr);

            nlohmann::json seeds_json = nlohmann::json::array();
            for (std::uint64_t seed_index = 0; seed_index < seeds; ++seed_index) {
                std::optional<int> found;
                for (const TrialRecord& rec : slice) {
                    if (rec.seed != seed_index)
                        continue;
                    if (rec.rate_bps_hz >= cfg.paths.fraction * rec.rate_upper_bps_hz &&
                        (!found || rec.overhead < *found))
                        found = rec.overhead;
                }
                seeds_json.push_back(found ? nlohmann::json(*found) : nlohmann::json(nullptr));
            }
            per_seed_l[std::to_string(path_count)] = std::move(seeds_json);
        }
        summary["min_overhead"][scheme_name(scheme)] = std::move(per_l);
        summary["per_seed_min_overhead"][scheme_name(scheme)] = std::move(per_seed_l);
    }
    summary["fraction"] = cfg.paths.fraction;
    summary["k_max"] = cfg.paths.k_max;
    out.summary = std::move(summary);
    return out;
}

/// Grid-mismatch comparison for one polar codebook variant: on-grid and
/// refined schemes on the same off-grid scenes.
inline RunOutput run_refine_compare(const ExperimentConfig& cfg,
                                    const std::string& variant, int parallel = 1) {
    if (!cfg.polar_codebooks.count(variant))
        throw ConfigError("refine.codebooks", "unknown codebook '" + variant + "'");
    const ArrayGeometry geom = cfg.geometry.make();
    const NoiseModel noise =
        derive_noise(cfg.noise.reference, cfg.refine.snr_db, geom, cfg.noise.mode);
    const double sigma = std::sqrt(noise.sigma_sq);

    std::optional<Codebook> dft_book, polar_book;
    PolarRingCensus census;
    if (detail::any_scheme_uses_dft(cfg.refine.schemes))
        dft_book = build_dft_codebook(geom);
    if (detail::any_scheme_uses_polar(cfg.refine.schemes))
        polar_book = build_polar_codebook(geom, cfg.polar_codebooks.at(variant), &census);

    const std::uint64_t polar_slot = fnv1a_hash("codebook:" + variant);
    const std::size_t seeds = static_cast<std::size_t>(cfg.scene.seed_count);
    std::vector<detail::CellResult> cells(seeds);

    parallel_for(seeds, parallel, [&](std::size_t seed_index) {
        detail::CellResult& cell = cells[seed_index];
        const ChannelScene scene =
            detail::trial_scene(cfg, geom, seed_index, cfg.scene.path_count);
        const Eigen::VectorXcd h = synthesize_channel(scene, cfg.scene.cosine);
        const double upper = perfect_csi_rate(h, noise.sigma_sq);

        std::map<bool, SweepResult> sweeps;
        if (dft_book) {
            SweepResult sweep;
            sweep.measurements =
                noiseless_measurements(h, *dft_book) +
                sigma * detail::trial_unit_noise(cfg, seed_index, 0, dft_book->size());
            sweep.codebook_ref = dft_book->name;
            sweep.noise = noise;
            sweeps[false] = std::move(sweep);
        }
        if (polar_book) {
            SweepResult sweep;
            sweep.measurements = noiseless_measurements(h, *polar_book) +
                                 sigma * detail::trial_unit_noise(cfg, seed_index,
                                                                  polar_slot,
                                                                  polar_book->size());
            sweep.codebook_ref = polar_book->name;
            sweep.noise = noise;
            sweeps[true] = std::move(sweep);
        }

        for (int k : cfg.refine.k_list) {
            for (Scheme scheme : cfg.refine.schemes) {
                const bool polar = detail::scheme_uses_polar(scheme);
                const Codebook& book = polar ? *polar_book : *dft_book;
                if (k > book.size())
                    throw ConfigError("refine.k_list",
                                      "K exceeds codebook size " + std::to_string(book.size()));
                const FeedbackReport report = select_top_k(sweeps.at(polar), k);
                const ReconstructionResult res = detail::reconstruct_scheme(
                    scheme, book, report, geom, cfg.solver, sigma);
                cell.solver_calls += 1;
                cell.solver_failures += res.diagnostics.converged ? 0 : 1;
                cell.records.push_back(detail::make_record(
                    scheme, k, cfg.refine.snr_db, cfg.scene.path_count, seed_index, h,
                    res.h_hat, noise.sigma_sq, upper));
            }
        }
    });

    RunOutput out;
    detail::merge_cells(out, cells);
    out.summary["codebook_variant"] = variant;
    if (polar_book) {
        out.summary["polar_codebook_size"] = polar_book->size();
        out.summary["polar_ring_census"] = census.summary();
    }
    return out;
}

/// Manifest describing one experiment run; the CSV stays byte-stable across
/// reruns while volatile details (timing) live here.
inline nlohmann::json make_manifest(const ExperimentConfig& cfg, const std::string& name,
                                    const RunOutput& out, double wall_time_s) {
    nlohmann::json manifest;
    manifest["experiment"] = name;
    manifest["config"] = cfg.source.is_null() ? nlohmann::json::object() : cfg.source;
    manifest["config_hash"] = hex_string(fnv1a_hash(cfg.source.dump()));
    manifest["records"] = out.records.size();
    manifest["solver_calls"] = out.solver_calls;
    manifest["solver_failures"] = out.solver_failures;
    manifest["wall_time_s"] = wall_time_s;
    if (!out.summary.is_null())
        manifest["summary"] = out.summary;
    return manifest;
}

} // namespace beamtrain
