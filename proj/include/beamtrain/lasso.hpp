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
#include <Eigen/Eigenvalues>

#include "beamtrain/geometry.hpp"

namespace beamtrain {

enum class LassoAlgorithm { coordinate_descent, ista, fista };

struct LassoConfig {
    double lasso_weight = 0.0; // l1 weight; 0 reduces the problem to least squares
    int max_iters = 5000;
    double tol = 1e-8;         // first-order optimality target, relative to problem scale
    LassoAlgorithm algorithm = LassoAlgorithm::coordinate_descent;
};

struct LassoSolution {
    Eigen::VectorXcd coefficients;
    std::vector<double> objective_trace; // objective after each iteration, non-increasing
    int iterations = 0;
    bool converged = false;
    double kkt_residual = 0.0;
};

/// Complex soft threshold: shrinks the modulus by t, preserving the phase.
inline std::complex<double> soft_threshold(const std::complex<double>& z, double t) {
    const double mag = std::abs(z);
    if (mag <= t)
        return {0.0, 0.0};
    return z * ((mag - t) / mag);
}

inline double lasso_objective(const Eigen::MatrixXcd& a, const Eigen::VectorXcd& b,
                              const Eigen::VectorXcd& x, double weight) {
    return 0.5 * (b - a * x).squaredNorm() + weight * x.cwiseAbs().sum();
}

/// First-order optimality residual of min 0.5||b - A x||^2 + w ||x||_1.
/// For active coefficients the gradient must cancel the subgradient
/// w x/|x|; for zero coefficients |A^H(Ax - b)| may not exceed w.
inline double lasso_kkt_residual(const Eigen::MatrixXcd& a, const Eigen::VectorXcd& b,
                                 const Eigen::VectorXcd& x, double weight) {
    const Eigen::VectorXcd grad = a.adjoint() * (a * x - b);
    double worst = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        double res;
        if (x[i] != std::complex<double>(0.0, 0.0)) {
            res = std::abs(grad[i] + weight * x[i] / std::abs(x[i]));
        } else {
            res = std::max(0.0, std::abs(grad[i]) - weight);
        }
        worst = std::max(worst, res);
    }
    return worst;
}

inline double lasso_problem_scale(const Eigen::MatrixXcd& a, const Eigen::VectorXcd& b) {
    const double correlation = (a.adjoint() * b).cwiseAbs().maxCoeff();
    return std::max(1.0, correlation);
}

namespace detail {

inline LassoSolution lasso_coordinate_descent(const Eigen::MatrixXcd& a,
                                              const Eigen::VectorXcd& b,
                                              const LassoConfig& cfg,
                                              Eigen::VectorXcd x) {
    const Eigen::Index n = a.cols();
    const double scale = lasso_problem_scale(a, b);

    Eigen::VectorXd col_norm_sq(n);
    for (Eigen::Index i = 0; i < n; ++i)
        col_norm_sq[i] = a.col(i).squaredNorm();

    Eigen::VectorXcd residual = b - a * x;
    LassoSolution sol;
    sol.objective_trace.push_back(0.5 * residual.squaredNorm() +
                                  cfg.lasso_weight * x.cwiseAbs().sum());

    for (int sweep = 0; sweep < cfg.max_iters; ++sweep) {
        for (Eigen::Index i = 0; i < n; ++i) {
            if (col_norm_sq[i] <= 0.0) {
                x[i] = 0.0;
                continue;
            }
            const std::complex<double> corr =
                a.col(i).dot(residual) + col_norm_sq[i] * x[i];
            const std::complex<double> updated =
                soft_threshold(corr, cfg.lasso_weight) / col_norm_sq[i];
            if (updated != x[i]) {
                residual += a.col(i) * (x[i] - updated);
                x[i] = updated;
            }
        }
        sol.iterations = sweep + 1;
        sol.objective_trace.push_back(0.5 * residual.squaredNorm() +
                                      cfg.lasso_weight * x.cwiseAbs().sum());
        sol.kkt_residual = lasso_kkt_residual(a, b, x, cfg.lasso_weight);
        if (sol.kkt_residual <= cfg.tol * scale) {
            sol.converged = true;
            break;
        }
    }
    sol.coefficients = std::move(x);
    return sol;
}

inline double lipschitz_constant(const Eigen::MatrixXcd& a) {
    const Eigen::MatrixXcd gram = a.adjoint() * a;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(gram,
                                                        Eigen::EigenvaluesOnly);
    return std::max(eig.eigenvalues().maxCoeff(), 0.0);
}

inline Eigen::VectorXcd prox_step(const Eigen::MatrixXcd& a, const Eigen::VectorXcd& b,
                                  const Eigen::VectorXcd& point, double step,
                                  double weight) {
    const Eigen::VectorXcd grad = a.adjoint() * (a * point - b);
    Eigen::VectorXcd next = point - step * grad;
    for (Eigen::Index i = 0; i < next.size(); ++i)
        next[i] = soft_threshold(next[i], weight * step);
    return next;
}

inline LassoSolution lasso_ista(const Eigen::MatrixXcd& a, const Eigen::VectorXcd& b,
                                const LassoConfig& cfg, Eigen::VectorXcd x) {
    const double scale = lasso_problem_scale(a, b);
    const double lipschitz = lipschitz_constant(a);
    LassoSolution sol;
    sol.objective_trace.push_back(lasso_objective(a, b, x, cfg.lasso_weight));
    if (lipschitz <= 0.0) { // zero operator: any x fits equally, take the prox of x itself
        sol.coefficients = Eigen::VectorXcd::Zero(a.cols());
        sol.converged = true;
        return sol;
    }
    const double step = 1.0 / lipschitz;
    for (int iter = 0; iter < cfg.max_iters; ++iter) {
        x = prox_step(a, b, x, step, cfg.lasso_weight);
        sol.iterations = iter + 1;
        sol.objective_trace.push_back(lasso_objective(a, b, x, cfg.lasso_weight));
        sol.kkt_residual = lasso_kkt_residual(a, b, x, cfg.lasso_weight);
        if (sol.kkt_residual <= cfg.tol * scale) {
            sol.converged = true;
            break;
        }
    }
    sol.coefficients = std::move(x);
    return sol;
}

// Monotone FISTA: the momentum sequence runs on the raw prox iterates while
// the reported iterate never lets the objective rise.
inline LassoSolution lasso_fista(const Eigen::MatrixXcd& a, const Eigen::VectorXcd& b,
                                 const LassoConfig& cfg, Eigen::VectorXcd x) {
    const double scale = lasso_problem_scale(a, b);
    const double lipschitz = lipschitz_constant(a);
    LassoSolution sol;
    double fx = lasso_objective(a, b, x, cfg.lasso_weight);
    sol.objective_trace.push_back(fx);
    if (lipschitz <= 0.0) {
        sol.coefficients = Eigen::VectorXcd::Zero(a.cols());
        sol.converged = true;
        return sol;
    }
    const double step = 1.0 / lipschitz;
    Eigen::VectorXcd y = x;
    double t = 1.0;
    for (int iter = 0; iter < cfg.max_iters; ++iter) {
        const Eigen::VectorXcd z = prox_step(a, b, y, step, cfg.lasso_weight);
        const double fz = lasso_objective(a, b, z, cfg.lasso_weight);
        const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
        Eigen::VectorXcd x_next;
        double fx_next;
        if (fz <= fx) {
            x_next = z;
            fx_next = fz;
        } else {
            x_next = x;
            fx_next = fx;
        }
        y = x_next + (t / t_next) * (z - x_next) + ((t - 1.0) / t_next) * (x_next - x);
        x = std::move(x_next);
        fx = fx_next;
        t = t_next;
        sol.iterations = iter + 1;
        sol.objective_trace.push_back(fx);
        sol.kkt_residual = lasso_kkt_residual(a, b, x, cfg.lasso_weight);
        if (sol.kkt_residual <= cfg.tol * scale) {
            sol.converged = true;
            break;
        }
    }
    sol.coefficients = std::move(x);
    return sol;
}

} // namespace detail

/// Solves min_x 0.5 ||b - A x||^2 + w ||x||_1 with complex-modulus l1.
///
/// The design matrix is the Gram form V_K^H V_K when reconstructing from a
/// swept codebook subset, but any complex matrix is accepted (the off-grid
/// refinement passes a non-Hermitian parameterized dictionary). Exits once
/// the first-order optimality residual drops below tol * scale; hitting
/// max_iters first returns the best iterate with converged = false.
inline LassoSolution lasso_solve(const Eigen::MatrixXcd& a, const Eigen::VectorXcd& b,
                                 const LassoConfig& cfg,
                                 const Eigen::VectorXcd* warm_start = nullptr) {
    if (a.rows() != b.size())
        throw std::invalid_argument("lasso_solve: dimension mismatch");
    if (cfg.lasso_weight < 0.0)
        throw std::invalid_argument("lasso_solve: lasso_weight must be >= 0");
    if (!(cfg.tol > 0.0))
        throw std::invalid_argument("lasso_solve: tol must be > 0");
    if (cfg.max_iters < 1)
        throw std::invalid_argument("lasso_solve: max_iters must be >= 1");
    Eigen::VectorXcd x0 = warm_start && warm_start->size() == a.cols()
                              ? *warm_start
                              : Eigen::VectorXcd::Zero(a.cols()).eval();
    switch (cfg.algorithm) {
    case LassoAlgorithm::ista:
        return detail::lasso_ista(a, b, cfg, std::move(x0));
    case LassoAlgorithm::fista:
        return detail::lasso_fista(a, b, cfg, std::move(x0));
    case LassoAlgorithm::coordinate_descent:
    default:
        return detail::lasso_coordinate_descent(a, b, cfg, std::move(x0));
    }
}

/// Noise-adaptive default weight sigma * sqrt(2 log K).
inline double universal_lasso_weight(double sigma, int k, double scale_factor = 1.0) {
    if (k < 1)
        throw std::invalid_argument("universal_lasso_weight: K must be >= 1");
    return scale_factor * sigma * std::sqrt(2.0 * std::log(static_cast<double>(k)));
}

} // namespace beamtrain
