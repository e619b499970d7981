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
//
// Minimal end-to-end walk: sample a multipath scene, sweep the polar
// codebook, feed back the strongest beams, and compare the least-squares
// and lasso reconstructions.

#include <cstdio>

#include "beamtrain/beamtrain.hpp"

int main() {
    using namespace beamtrain;

    const ArrayGeometry geom = make_half_wavelength_array(128, 100e9);
    const auto [fresnel, rayleigh] = fresnel_rayleigh(geom);
    std::printf("aperture %.4f m, near field spans [%.2f, %.2f] m\n", geom.aperture(),
                fresnel, rayleigh);

    const Codebook polar =
        build_polar_codebook(geom, PolarCodebookConfig{1.6, 128, 6, std::nullopt});
    std::printf("polar codebook: %d codewords\n", polar.size());

    Rng rng(7);
    const SceneRegion region{-0.8, 0.8, fresnel, rayleigh};
    const ChannelScene scene = sample_scene(rng, 5, region, region, geom);
    const Eigen::VectorXcd h = synthesize_channel(scene);

    const NoiseModel noise = derive_noise({0.0, 5.0}, 10.0, geom);
    Rng noise_rng(11);
    const SweepResult sweep = beam_sweep(h, polar, noise, noise_rng);
    const FeedbackReport report = select_top_k(sweep, 8);

    const Eigen::MatrixXcd subset = subcodebook(polar, report.indices);
    const ReconstructionResult ls = reconstruct_ls(subset, report);

    LassoConfig lasso;
    lasso.lasso_weight = universal_lasso_weight(std::sqrt(noise.sigma_sq), 8);
    const ReconstructionResult sparse = reconstruct_lasso(subset, report, lasso);

    std::printf("least squares : l2 error %.4f, rate %.3f bps/Hz\n",
                l2_error(h, ls.h_hat), achievable_rate(h, ls.h_hat, noise.sigma_sq));
    std::printf("lasso         : l2 error %.4f, rate %.3f bps/Hz\n",
                l2_error(h, sparse.h_hat),
                achievable_rate(h, sparse.h_hat, noise.sigma_sq));
    std::printf("perfect CSI   : rate %.3f bps/Hz\n", perfect_csi_rate(h, noise.sigma_sq));
    return 0;
}
