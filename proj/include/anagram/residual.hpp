#pragma once

// Stacked collocation residual and its exact parameter-Jacobian.
//
// Row scaling: interior rows carry 1/sqrt(S_D), boundary rows 1/sqrt(S_B), so
// (1/2)·‖residual‖² reproduces the per-block-averaged training loss and the
// stacked vector feeds the natural-gradient update directly.

#include <Eigen/Dense>

#include "anagram/mlp.hpp"
#include "anagram/problems.hpp"

namespace anagram {

struct ResidualBundle {
    Eigen::VectorXd residual;  ///< length S = S_D + S_B, interior block first
    Eigen::MatrixXd feature;   ///< S×P Jacobian of the residual w.r.t. params
    int interior_count = 0;
    int boundary_count = 0;

    int sample_count() const { return interior_count + boundary_count; }
    double loss() const { return 0.5 * residual.squaredNorm(); }
};

/// Residual and feature matrix at the given parameters.
ResidualBundle residual_bundle(const PdeProblem& problem, const MlpSpec& spec,
                               const Eigen::VectorXd& params);

/// Residual only (no Jacobian): the line-search fast path.
Eigen::VectorXd residual_vector(const PdeProblem& problem, const MlpSpec& spec,
                                const Eigen::VectorXd& params);

/// (1/2)·‖residual‖² — the per-block averaged collocation loss.
double residual_loss(const PdeProblem& problem, const MlpSpec& spec,
                     const Eigen::VectorXd& params);

}  // namespace anagram
