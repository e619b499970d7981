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

#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "beamtrain/codebook.hpp"
#include "beamtrain/lasso.hpp"
#include "beamtrain/sweep.hpp"

namespace beamtrain {

struct SolverDiagnostics {
    int iterations = 0;
    double final_objective = 0.0;
    double kkt_residual = 0.0;
    bool converged = true;
    bool rank_truncated = false;     // pseudo-inverse dropped singular values
    int truncated_values = 0;
    int line_search_stalls = 0;      // refinement line searches that found no descent
};

struct ReconstructionResult {
    Eigen::VectorXcd h_hat;
    Eigen::VectorXcd alpha;
    std::optional<Eigen::VectorXd> refined_theta;
    std::optional<std::vector<std::optional<double>>> refined_range;
    std::vector<double> objective_trace;
    SolverDiagnostics diagnostics;
};

/// Columns of the codebook at the reported beam indices, in report order.
inline Eigen::MatrixXcd subcodebook(const Codebook& codebook,
                                    const std::vector<int>& indices) {
    Eigen::MatrixXcd sub(codebook.columns.rows(),
                         static_cast<Eigen::Index>(indices.size()));
    for (std::size_t i = 0; i < indices.size(); ++i) {
        const int idx = indices[i];
        if (idx < 0 || idx >= codebook.size())
            throw std::invalid_argument("subcodebook: beam index out of range");
        sub.col(static_cast<Eigen::Index>(i)) = codebook.columns.col(idx);
    }
    return sub;
}

inline std::vector<CodewordMeta> submeta(const Codebook& codebook,
                                         const std::vector<int>& indices) {
    std::vector<CodewordMeta> meta;
    meta.reserve(indices.size());
    for (int idx : indices)
        meta.push_back(codebook.meta.at(static_cast<std::size_t>(idx)));
    return meta;
}

/// Orthonormal combination h = V_K y_K^H. Valid when the swept codebook has
/// orthonormal columns, where the conjugated measurements are already the
/// projection coefficients.
inline ReconstructionResult reconstruct_orthonormal(const Eigen::MatrixXcd& subset,
                                                    const FeedbackReport& report) {
    ReconstructionResult result;
    result.alpha = report.values.conjugate();
    result.h_hat = subset * result.alpha;
    return result;
}

/// Minimum-norm least squares coefficients from a Hermitian PSD Gram matrix,
/// truncating eigenvalues below pinv_tol times the largest.
inline Eigen::VectorXcd ls_coefficients_from_gram(const Eigen::MatrixXcd& gram,
                                                  const Eigen::VectorXcd& target,
                                                  double pinv_tol,
                                                  SolverDiagnostics* diag = nullptr) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(gram);
    if (eig.info() != Eigen::Success)
        throw std::runtime_error("ls_coefficients_from_gram: eigendecomposition failed");
    const Eigen::VectorXd values = eig.eigenvalues();
    const double largest = values.size() ? std::max(values.maxCoeff(), 0.0) : 0.0;
    const double cutoff = pinv_tol * largest;

    Eigen::VectorXcd projected = eig.eigenvectors().adjoint() * target;
    int truncated = 0;
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        if (values[i] > cutoff && values[i] > 0.0) {
            projected[i] /= values[i];
        } else {
            projected[i] = 0.0;
            ++truncated;
        }
    }
    if (diag) {
        diag->truncated_values = truncated;
        diag->rank_truncated = truncated > 0;
    }
    return eig.eigenvectors() * projected;
}

/// Least squares rule alpha = (V_K^H V_K)^+ y_K^H, h = V_K alpha.
inline ReconstructionResult reconstruct_ls(const Eigen::MatrixXcd& subset,
                                           const FeedbackReport& report,
                                           double pinv_tol = 1e-10) {
    if (report.values.size() < 1)
        throw std::invalid_argument("reconstruct_ls: empty report");
    ReconstructionResult result;
    const Eigen::MatrixXcd gram = subset.adjoint() * subset;
    const Eigen::VectorXcd target = report.values.conjugate();
    result.alpha =
        ls_coefficients_from_gram(gram, target, pinv_tol, &result.diagnostics);
    result.h_hat = subset * result.alpha;
    result.diagnostics.final_objective = 0.5 * (target - gram * result.alpha).squaredNorm();
    return result;
}

/// Sparse rule: alpha from the Gram-form lasso, h = V_K alpha.
inline ReconstructionResult reconstruct_lasso(const Eigen::MatrixXcd& subset,
                                              const FeedbackReport& report,
                                              const LassoConfig& cfg) {
    if (report.values.size() < 1)
        throw std::invalid_argument("reconstruct_lasso: empty report");
    const Eigen::MatrixXcd gram = subset.adjoint() * subset;
    const Eigen::VectorXcd target = report.values.conjugate();
    LassoSolution sol = lasso_solve(gram, target, cfg);

    ReconstructionResult result;
    result.alpha = sol.coefficients;
    result.h_hat = subset * result.alpha;
    result.objective_trace = std::move(sol.objective_trace);
    result.diagnostics.iterations = sol.iterations;
    result.diagnostics.converged = sol.converged;
    result.diagnostics.kkt_residual = sol.kkt_residual;
    result.diagnostics.final_objective =
        result.objective_trace.empty() ? 0.0 : result.objective_trace.back();
    return result;
}

} // namespace beamtrain
