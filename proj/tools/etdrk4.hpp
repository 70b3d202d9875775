#pragma once

// Fourier-collocation ETDRK4 solver for the Allen–Cahn benchmark
//   u_t = 1e-4 u_xx - 5u^3 + 5u,  x in [-1,1] periodic,  u(x,0) = x^2 cos(pi x).
// Reference-table oracle only; the training stack never calls it.

#include <vector>

#include <Eigen/Dense>

namespace anagram::oracle {

struct AllenCahnSolution {
    Eigen::VectorXd x;          ///< modes physical grid, endpoint excluded
    std::vector<double> times;
    Eigen::MatrixXd u;          ///< times × x
};

AllenCahnSolution solve_allen_cahn(int n_modes, double dt, const std::vector<double>& times);

}  // namespace anagram::oracle
