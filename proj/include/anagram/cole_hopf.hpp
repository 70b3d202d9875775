#pragma once

// Reference solution of the viscous Burgers equation
//   u_t + u·u_x = nu·u_xx,  u(x,0) = -sin(pi x),  u(±1,t) = 0
// via the Cole–Hopf transform, evaluated with Gauss–Hermite quadrature.

#include <Eigen/Dense>

namespace anagram {

struct QuadratureRule {
    Eigen::VectorXd nodes;
    Eigen::VectorXd weights;
};

/// Gauss–Hermite rule (weight e^{-z²}) by Golub–Welsch.
QuadratureRule gauss_hermite(int n);

/// Cole–Hopf solution at a single point; exact initial data at t = 0.
double burgers_cole_hopf(double x, double t, double nu, const QuadratureRule& rule);

/// Convenience wrapper with a shared 128-node rule.
double burgers_reference(double x, double t, double nu);

}  // namespace anagram
