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

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "beamtrain/beamtrain.hpp"

namespace {

using namespace beamtrain;

struct CliOptions {
    std::string config_path;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed_override;
    int parallel = 1;
    std::string variant = "polar";
    std::uint64_t demo_seed = 0;
};

ExperimentConfig load_config(const CliOptions& opts) {
    ExperimentConfig cfg = opts.config_path.empty() ? full_scale_config()
                                                    : load_config_file(opts.config_path);
    if (opts.seed_override)
        cfg.scene.base_seed = *opts.seed_override;
    return cfg;
}

void write_outputs(const ExperimentConfig& cfg, const std::string& out_dir,
                   const std::string& name, const RunOutput& out, double wall_s) {
    std::filesystem::create_directories(out_dir);
    const std::string csv_path = out_dir + "/" + name + ".csv";
    write_text_file(csv_path, trial_records_to_csv(out.records));
    const std::string manifest_path = out_dir + "/" + name + ".manifest.json";
    write_text_file(manifest_path, make_manifest(cfg, name, out, wall_s).dump(2) + "\n");
    std::cout << name << ": " << out.records.size() << " records -> " << csv_path
              << " (solver failures " << out.solver_failures << "/" << out.solver_calls
              << ")\n";
}

int check_failures(const ExperimentConfig& cfg, const RunOutput& out) {
    if (out.failure_fraction() > cfg.solver.max_failure_fraction) {
        std::cerr << "solver non-convergence fraction " << out.failure_fraction()
                  << " exceeds limit " << cfg.solver.max_failure_fraction << "\n";
        return 3;
    }
    return 0;
}

int cmd_codebook(const CliOptions& opts) {
    const ExperimentConfig cfg = load_config(opts);
    const ArrayGeometry geom = cfg.geometry.make();
    std::filesystem::create_directories(opts.out_dir);
    const std::string path = opts.out_dir + "/codebook_" + opts.variant + ".json";

    if (opts.variant == "dft") {
        const Codebook book = build_dft_codebook(geom);
        write_text_file(path, codebook_to_json(book).dump(2) + "\n");
        std::cout << book.name << ": " << book.size() << " codewords -> " << path << "\n";
        return 0;
    }
    const auto it = cfg.polar_codebooks.find(opts.variant);
    if (it == cfg.polar_codebooks.end())
        throw ConfigError("codebooks", "unknown variant '" + opts.variant + "'");
    PolarRingCensus census;
    const Codebook book = build_polar_codebook(geom, it->second, &census);
    write_text_file(path, codebook_to_json(book, it->second.beta).dump(2) + "\n");
    std::cout << book.name << ": " << book.size() << " codewords -> " << path << "\n";
    std::cout << "ring census: " << census.summary() << "\n";
    return 0;
}

int cmd_sweep_demo(const CliOptions& opts) {
    const ExperimentConfig cfg = load_config(opts);
    const ArrayGeometry geom = cfg.geometry.make();
    const ChannelScene scene = [&] {
        Rng rng(derive_stream(cfg.scene.base_seed, 0x5CE9E0ULL + opts.demo_seed,
                              static_cast<std::uint64_t>(cfg.scene.path_count)));
        return sample_scene(rng, cfg.scene.path_count, cfg.scene.resolve_user(geom),
                            cfg.scene.resolve_scatter(geom), geom);
    }();
    const Eigen::VectorXcd h = synthesize_channel(scene, cfg.scene.cosine);

    Codebook book;
    if (opts.variant == "dft") {
        book = build_dft_codebook(geom);
    } else {
        const auto it = cfg.polar_codebooks.find(opts.variant);
        if (it == cfg.polar_codebooks.end())
            throw ConfigError("codebooks", "unknown variant '" + opts.variant + "'");
        book = build_polar_codebook(geom, it->second);
    }

    const Eigen::VectorXd profile = projection_profile(h, book);
    std::printf("index,theta,range,alpha_sq\n");
    for (int i = 0; i < book.size(); ++i) {
        const CodewordMeta& meta = book.meta[static_cast<std::size_t>(i)];
        if (meta.range_grid)
            std::printf("%d,%.12g,%.12g,%.12g\n", i, meta.theta_grid, *meta.range_grid,
                        profile[i]);
        else
            std::printf("%d,%.12g,,%.12g\n", i, meta.theta_grid, profile[i]);
    }
    return 0;
}

template <typename Runner>
int run_experiment(const CliOptions& opts, const std::string& name, Runner&& runner) {
    const ExperimentConfig cfg = load_config(opts);
    const auto start = std::chrono::steady_clock::now();
    const RunOutput out = runner(cfg);
    const double wall_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_outputs(cfg, opts.out_dir, name, out, wall_s);
    return check_failures(cfg, out);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"near-field beam training simulation"};
    app.require_subcommand(1);

    CliOptions opts;
    app.add_option("--config", opts.config_path, "JSON config file (defaults to the full-scale preset)");
    app.add_option("--out", opts.out_dir, "output directory");
    app.add_option("--seed", opts.seed_override, "override the config base seed");
    app.add_option("--parallel", opts.parallel, "worker threads")->check(CLI::PositiveNumber);

    auto* cmd_cb = app.add_subcommand("codebook", "emit a codebook JSON file plus size summary");
    cmd_cb->add_option("--variant", opts.variant, "dft or a configured polar variant");

    auto* cmd_demo =
        app.add_subcommand("sweep-demo", "print the per-beam coefficient power profile as CSV");
    cmd_demo->add_option("--variant", opts.variant, "dft or a configured polar variant");
    cmd_demo->add_option("--demo-seed", opts.demo_seed, "scene index within the seed stream");

    auto* cmd_overhead = app.add_subcommand("overhead", "feedback overhead sweep");
    auto* cmd_snr = app.add_subcommand("snr", "SNR sweep at fixed overhead");
    auto* cmd_paths = app.add_subcommand("paths", "path-count sweep with minimum-overhead search");
    auto* cmd_refine = app.add_subcommand("refine", "on-grid vs off-grid refined comparison");

    try {
        app.parse(argc, argv);

        if (cmd_cb->parsed())
            return cmd_codebook(opts);
        if (cmd_demo->parsed())
            return cmd_sweep_demo(opts);
        if (cmd_overhead->parsed())
            return run_experiment(opts, "overhead", [&](const ExperimentConfig& cfg) {
                return run_overhead_sweep(cfg, opts.parallel);
            });
        if (cmd_snr->parsed())
            return run_experiment(opts, "snr", [&](const ExperimentConfig& cfg) {
                return run_snr_sweep(cfg, opts.parallel);
            });
        if (cmd_paths->parsed())
            return run_experiment(opts, "paths", [&](const ExperimentConfig& cfg) {
                return run_path_sweep(cfg, opts.parallel);
            });
        if (cmd_refine->parsed()) {
            const ExperimentConfig cfg = load_config(opts);
            int status = 0;
            for (const std::string& variant : cfg.refine.codebooks) {
                const auto start = std::chrono::steady_clock::now();
                const RunOutput out = run_refine_compare(cfg, variant, opts.parallel);
                const double wall_s = std::chrono::duration<double>(
                                          std::chrono::steady_clock::now() - start)
                                          .count();
                write_outputs(cfg, opts.out_dir, "refine_" + variant, out, wall_s);
                status = std::max(status, check_failures(cfg, out));
            }
            return status;
        }
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const beamtrain::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
