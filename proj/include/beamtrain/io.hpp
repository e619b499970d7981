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
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "beamtrain/channel.hpp"
#include "beamtrain/codebook.hpp"
#include "beamtrain/metrics.hpp"

namespace beamtrain {

inline nlohmann::json geometry_to_json(const ArrayGeometry& geom) {
    return {{"n_antennas", geom.n_antennas},
            {"spacing_m", geom.spacing},
            {"wavelength_m", geom.wavelength}};
}

inline ArrayGeometry geometry_from_json(const nlohmann::json& j) {
    return ArrayGeometry(j.at("n_antennas").get<int>(), j.at("spacing_m").get<double>(),
                         j.at("wavelength_m").get<double>());
}

/// Codebook on disk: geometry and per-codeword grid parameters only.
/// Columns are regenerated on load, never serialized.
inline nlohmann::json codebook_to_json(const Codebook& codebook,
                                       std::optional<double> beta = std::nullopt) {
    nlohmann::json j;
    j["geometry"] = geometry_to_json(codebook.geometry);
    j["name"] = codebook.name;
    if (beta)
        j["beta"] = *beta;
    nlohmann::json words = nlohmann::json::array();
    for (const CodewordMeta& meta : codebook.meta) {
        nlohmann::json w;
        w["index"] = meta.index;
        w["theta"] = meta.theta_grid;
        w["range"] = meta.range_grid ? nlohmann::json(*meta.range_grid)
                                     : nlohmann::json(nullptr);
        w["kind"] = meta.kind == CodewordKind::dft ? "dft" : "polar";
        words.push_back(std::move(w));
    }
    j["codewords"] = std::move(words);
    return j;
}

inline Codebook codebook_from_json(const nlohmann::json& j) {
    Codebook codebook;
    codebook.geometry = geometry_from_json(j.at("geometry"));
    codebook.name = j.value("name", std::string("codebook"));
    const auto& words = j.at("codewords");
    codebook.columns.resize(codebook.geometry.n_antennas,
                            static_cast<Eigen::Index>(words.size()));
    codebook.meta.reserve(words.size());
    for (std::size_t i = 0; i < words.size(); ++i) {
        const auto& w = words[i];
        CodewordMeta meta;
        meta.index = w.at("index").get<int>();
        if (meta.index != static_cast<int>(i))
            throw std::invalid_argument("codebook_from_json: indices must be 0..M-1 in order");
        meta.theta_grid = w.at("theta").get<double>();
        if (!w.at("range").is_null())
            meta.range_grid = w.at("range").get<double>();
        meta.kind = w.at("kind").get<std::string>() == "dft" ? CodewordKind::dft
                                                             : CodewordKind::polar;
        codebook.columns.col(static_cast<Eigen::Index>(i)) =
            codeword_at(codebook.geometry, meta.theta_grid, meta.range_grid);
        codebook.meta.push_back(std::move(meta));
    }
    return codebook;
}

/// Scene on disk: everything needed to replay a trial exactly.
inline nlohmann::json scene_to_json(const ChannelScene& scene) {
    nlohmann::json j;
    j["geometry"] = geometry_to_json(scene.geometry);
    j["user"] = {{"theta", scene.user.theta}, {"range", scene.user.range}};
    nlohmann::json scatterers = nlohmann::json::array();
    for (const Scatterer& sc : scene.scatterers) {
        scatterers.push_back({{"theta", sc.position.theta},
                              {"range", sc.position.range},
                              {"p_re", sc.reflection.real()},
                              {"p_im", sc.reflection.imag()}});
    }
    j["scatterers"] = std::move(scatterers);
    return j;
}

inline ChannelScene scene_from_json(const nlohmann::json& j) {
    ChannelScene scene;
    scene.geometry = geometry_from_json(j.at("geometry"));
    scene.user.theta = j.at("user").at("theta").get<double>();
    scene.user.range = j.at("user").at("range").get<double>();
    for (const auto& s : j.at("scatterers")) {
        Scatterer sc;
        sc.position.theta = s.at("theta").get<double>();
        sc.position.range = s.at("range").get<double>();
        sc.reflection = {s.at("p_re").get<double>(), s.at("p_im").get<double>()};
        scene.scatterers.push_back(sc);
    }
    return scene;
}

inline std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", value);
    return buf;
}

inline constexpr const char* kTrialCsvHeader =
    "scheme,K,snr_db,L,seed,l2_error,rate,rate_upper,l2_error_aligned";

inline std::string trial_records_to_csv(const std::vector<TrialRecord>& records) {
    std::string out(kTrialCsvHeader);
    out.push_back('\n');
    for (const TrialRecord& rec : records) {
        out += scheme_name(rec.scheme);
        out.push_back(',');
        out += std::to_string(rec.overhead);
        out.push_back(',');
        out += format_double(rec.snr_db);
        out.push_back(',');
        out += std::to_string(rec.path_count);
        out.push_back(',');
        out += std::to_string(rec.seed);
        out.push_back(',');
        out += format_double(rec.l2_error);
        out.push_back(',');
        out += format_double(rec.rate_bps_hz);
        out.push_back(',');
        out += format_double(rec.rate_upper_bps_hz);
        out.push_back(',');
        out += format_double(rec.l2_error_aligned);
        out.push_back('\n');
    }
    return out;
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("write_text_file: cannot open " + path);
    out << content;
    if (!out)
        throw std::runtime_error("write_text_file: write failed for " + path);
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("read_text_file: cannot open " + path);
    return std::string(std::istreambuf_iterator<char>(in),
                       std::istreambuf_iterator<char>());
}

inline std::uint64_t fnv1a_hash(const std::string& text) {
    std::uint64_t hash = 0xCBF29CE484222325ULL;
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 0x100000001B3ULL;
    }
    return hash;
}

inline std::string hex_string(std::uint64_t value) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(value));
    return buf;
}

} // namespace beamtrain
