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
#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "beamtrain/codebook.hpp"
#include "beamtrain/lasso.hpp"
#include "beamtrain/reconstruct.hpp"
#include "beamtrain/sweep.hpp"

namespace beamtrain {

/// polar: optimize (theta, r) per beam with the l1 term active.
/// dft: far-field dictionary, theta only, l1 term dropped.
enum class RefineMode { polar, dft };

struct RefineConfig {
    double step_theta = 1e-2;      // initial gradient step, halved until descent
    double step_range = 1e3;       // meters; generous start, backtracking adapts it
    int max_outer_iters = 20;
    int alternate_inner_iters = 5; // gradient steps per parameter block per outer pass
    double theta_min = -1.0;
    double theta_max = 1.0;
    double range_min = 0.5;        // meters; no upper clamp
};

using OptionalRanges = std::vector<std::optional<double>>;

/// Synthesis dictionary V_K(theta, r): one codeword per selected beam at the
/// current continuous parameters. Entries without a range stay far-field.
inline Eigen::MatrixXcd refine_dictionary(const ArrayGeometry& geom,
                                          const Eigen::VectorXd& theta,
                                          const OptionalRanges& range) {
    Eigen::MatrixXcd cols(geom.n_antennas, theta.size());
    for (Eigen::Index j = 0; j < theta.size(); ++j)
        cols.col(j) = codeword_at(geom, theta[j], range[static_cast<std::size_t>(j)]);
    return cols;
}

/// Smooth data term 0.5 || b - V_swept^H V(theta, r) alpha ||^2.
inline double refine_smooth_objective(const ArrayGeometry& geom,
                                      const Eigen::MatrixXcd& swept,
                                      const Eigen::VectorXcd& b,
                                      const Eigen::VectorXd& theta,
                                      const OptionalRanges& range,
                                      const Eigen::VectorXcd& alpha) {
    const Eigen::MatrixXcd dict = refine_dictionary(geom, theta, range);
    return 0.5 * (b - swept.adjoint() * (dict * alpha)).squaredNorm();
}

struct RefineGradient {
    Eigen::VectorXd wrt_theta;
    Eigen::VectorXd wrt_range; // zero where the beam has no range parameter
};

/// Analytic gradient of the smooth term with respect to each beam's (theta, r).
/// Entry n of codeword j equals exp(j phi_n) / sqrt(N) with
///   phi_n = pi delta_n theta - pi d delta_n^2 (1 - theta^2) / (2 r),
/// so d phi/d theta = pi delta_n + pi d delta_n^2 theta / r and
/// d phi/d r = pi d delta_n^2 (1 - theta^2) / (2 r^2). Far-field beams keep
/// only the linear term.
inline RefineGradient refine_smooth_gradient(const ArrayGeometry& geom,
                                             const Eigen::MatrixXcd& swept,
                                             const Eigen::VectorXcd& b,
                                             const Eigen::VectorXd& theta,
                                             const OptionalRanges& range,
                                             const Eigen::VectorXcd& alpha) {
    const Eigen::Index k = theta.size();
    const Eigen::MatrixXcd dict = refine_dictionary(geom, theta, range);
    const Eigen::VectorXcd residual = b - swept.adjoint() * (dict * alpha);
    const Eigen::VectorXcd back_projected = swept * residual; // (e^H V^H)^H

    RefineGradient grad;
    grad.wrt_theta = Eigen::VectorXd::Zero(k);
    grad.wrt_range = Eigen::VectorXd::Zero(k);
    const std::complex<double> imag_unit(0.0, 1.0);

    Eigen::VectorXcd dcol(geom.n_antennas);
    for (Eigen::Index j = 0; j < k; ++j) {
        const auto& r_j = range[static_cast<std::size_t>(j)];
        for (int n = 0; n < geom.n_antennas; ++n) {
            const double delta = geom.element_offset(n);
            double dphi = kPi * delta;
            if (r_j)
                dphi += kPi * geom.spacing * delta * delta * theta[j] / *r_j;
            dcol[n] = dict(n, j) * (imag_unit * dphi);
        }
        grad.wrt_theta[j] = -std::real(back_projected.dot(dcol) * alpha[j]);

        if (r_j) {
            const double one_minus = 1.0 - theta[j] * theta[j];
            for (int n = 0; n < geom.n_antennas; ++n) {
                const double delta = geom.element_offset(n);
                const double dphi = kPi * geom.spacing * delta * delta * one_minus /
                                    (2.0 * *r_j * *r_j);
                dcol[n] = dict(n, j) * (imag_unit * dphi);
            }
            grad.wrt_range[j] = -std::real(back_projected.dot(dcol) * alpha[j]);
        }
    }
    return grad;
}

namespace detail {

struct RefineWorkspace {
    Eigen::VectorXd theta;
    OptionalRanges range;
    Eigen::MatrixXcd dict;    // V(theta, r), N x K
    Eigen::MatrixXcd design;  // V_swept^H V(theta, r), K x K
};

inline void rebuild(RefineWorkspace& ws, const ArrayGeometry& geom,
                    const Eigen::MatrixXcd& swept) {
    ws.dict = refine_dictionary(geom, ws.theta, ws.range);
    ws.design = swept.adjoint() * ws.dict;
}

inline double refine_full_objective(const RefineWorkspace& ws, const Eigen::VectorXcd& b,
                                    const Eigen::VectorXcd& alpha, double weight) {
    return 0.5 * (b - ws.design * alpha).squaredNorm() +
           weight * alpha.cwiseAbs().sum();
}

enum class ParamBlock { theta, range };

/// One projected gradient step on a parameter block, halving the step until
/// the objective decreases. Returns false when no descent step was found.
inline bool refine_line_search(RefineWorkspace& ws, const ArrayGeometry& geom,
                               const Eigen::MatrixXcd& swept, const Eigen::VectorXcd& b,
                               const Eigen::VectorXcd& alpha, double weight,
                               const RefineConfig& cfg, ParamBlock block, double& f) {
    const RefineGradient grad =
        refine_smooth_gradient(geom, swept, b, ws.theta, ws.range, alpha);
    const Eigen::VectorXd& direction =
        block == ParamBlock::theta ? grad.wrt_theta : grad.wrt_range;
    if (direction.cwiseAbs().maxCoeff() == 0.0)
        return false;

    double step = block == ParamBlock::theta ? cfg.step_theta : cfg.step_range;
    for (int halving = 0; halving < 60; ++halving, step *= 0.5) {
        RefineWorkspace trial = ws;
        bool moved = false;
        if (block == ParamBlock::theta) {
            for (Eigen::Index j = 0; j < trial.theta.size(); ++j) {
                const double updated = std::clamp(trial.theta[j] - step * direction[j],
                                                  cfg.theta_min, cfg.theta_max);
                moved |= updated != trial.theta[j];
                trial.theta[j] = updated;
            }
        } else {
            for (Eigen::Index j = 0; j < trial.theta.size(); ++j) {
                auto& r_j = trial.range[static_cast<std::size_t>(j)];
                if (!r_j)
                    continue;
                const double updated =
                    std::max(*r_j - step * direction[j], cfg.range_min);
                moved |= updated != *r_j;
                r_j = updated;
            }
        }
        if (!moved)
            return false;
        rebuild(trial, geom, swept);
        const double f_trial = refine_full_objective(trial, b, alpha, weight);
        if (f_trial < f) {
            ws = std::move(trial);
            f = f_trial;
            return true;
        }
    }
    return false;
}

} // namespace detail

/// Off-grid refinement: alternates a sparse-coefficient solve at fixed
/// (theta, r) with projected gradient steps on the continuous parameters,
/// keeping the swept-side matrix fixed at the codewords that produced the
/// measurements. The full objective never increases across outer passes.
/// The refined channel is V_K(theta_hat, r_hat) alpha_hat.
inline ReconstructionResult refine(const ArrayGeometry& geom,
                                   const Eigen::MatrixXcd& swept,
                                   const FeedbackReport& report,
                                   const std::vector<CodewordMeta>& init,
                                   const RefineConfig& cfg, const LassoConfig& lasso_cfg,
                                   RefineMode mode) {
    const Eigen::Index k = report.values.size();
    if (k < 1)
        throw std::invalid_argument("refine: empty report");
    if (swept.cols() != k || static_cast<Eigen::Index>(init.size()) != k)
        throw std::invalid_argument("refine: swept columns and init meta must match report");
    if (cfg.max_outer_iters < 1 || cfg.alternate_inner_iters < 1)
        throw std::invalid_argument("refine: iteration counts must be >= 1");
    if (!(cfg.step_theta > 0.0) || !(cfg.step_range > 0.0))
        throw std::invalid_argument("refine: step sizes must be > 0");

    LassoConfig sub_cfg = lasso_cfg;
    if (mode == RefineMode::dft)
        sub_cfg.lasso_weight = 0.0;
    const double weight = sub_cfg.lasso_weight;

    detail::RefineWorkspace ws;
    ws.theta.resize(k);
    ws.range.resize(static_cast<std::size_t>(k));
    for (Eigen::Index j = 0; j < k; ++j) {
        ws.theta[j] = init[static_cast<std::size_t>(j)].theta_grid;
        ws.range[static_cast<std::size_t>(j)] =
            mode == RefineMode::dft ? std::nullopt
                                    : init[static_cast<std::size_t>(j)].range_grid;
    }
    detail::rebuild(ws, geom, swept);

    const Eigen::VectorXcd b = report.values.conjugate();
    Eigen::VectorXcd alpha = Eigen::VectorXcd::Zero(k);
    double f = detail::refine_full_objective(ws, b, alpha, weight);

    ReconstructionResult result;
    result.objective_trace.push_back(f);

    LassoSolution last_solve;
    int outer = 0;
    for (; outer < cfg.max_outer_iters; ++outer) {
        last_solve = lasso_solve(ws.design, b, sub_cfg, &alpha);
        alpha = last_solve.coefficients;
        f = detail::refine_full_objective(ws, b, alpha, weight);

        for (int rep = 0; rep < cfg.alternate_inner_iters; ++rep) {
            if (!detail::refine_line_search(ws, geom, swept, b, alpha, weight, cfg,
                                            detail::ParamBlock::theta, f)) {
                ++result.diagnostics.line_search_stalls;
                break;
            }
        }
        if (mode == RefineMode::polar) {
            for (int rep = 0; rep < cfg.alternate_inner_iters; ++rep) {
                if (!detail::refine_line_search(ws, geom, swept, b, alpha, weight, cfg,
                                                detail::ParamBlock::range, f)) {
                    ++result.diagnostics.line_search_stalls;
                    break;
                }
            }
        }

        const double previous = result.objective_trace.back();
        result.objective_trace.push_back(f);
        if (previous - f <= 1e-14 * std::max(1.0, std::abs(previous)))
            break;
    }

    // Final coefficient solve so alpha matches the final parameters.
    last_solve = lasso_solve(ws.design, b, sub_cfg, &alpha);
    alpha = last_solve.coefficients;
    f = detail::refine_full_objective(ws, b, alpha, weight);
    result.objective_trace.push_back(f);

    result.alpha = alpha;
    result.h_hat = ws.dict * alpha;
    result.refined_theta = ws.theta;
    result.refined_range = ws.range;
    result.diagnostics.iterations = outer + 1;
    result.diagnostics.converged = last_solve.converged;
    result.diagnostics.kkt_residual = last_solve.kkt_residual;
    result.diagnostics.final_objective = f;
    return result;
}

} // namespace beamtrain
