#pragma once

// Independent test oracles: finite-difference jets, adaptive quadrature,
// least-squares by orthogonal decomposition, dense-grid minimization. These
// deliberately avoid the library's own computation paths.

#include <cmath>
#include <functional>
#include <random>

#include <Eigen/Dense>

#include "anagram/jet.hpp"

namespace oracles {

using ScalarFn = std::function<double(const Eigen::VectorXd&)>;

// Fourth-order central differences for the gradient and diagonal Hessian,
// second-order cross differences for the mixed entries.
inline anagram::Jet2 fd_jet(const ScalarFn& f, const Eigen::VectorXd& x, double h = 2e-3) {
    const int d = static_cast<int>(x.size());
    anagram::Jet2 jet;
    jet.dim = d;
    jet.value = f(x);
    const auto at = [&](int i, double hi, int j = -1, double hj = 0.0) {
        Eigen::VectorXd p = x;
        p[i] += hi;
        if (j >= 0) p[j] += hj;
        return f(p);
    };
    for (int i = 0; i < d; ++i) {
        jet.grad[i] =
            (8.0 * (at(i, h) - at(i, -h)) - (at(i, 2 * h) - at(i, -2 * h))) / (12.0 * h);
        jet.hess[i * d + i] = (-at(i, 2 * h) + 16.0 * at(i, h) - 30.0 * jet.value +
                               16.0 * at(i, -h) - at(i, -2 * h)) /
                              (12.0 * h * h);
    }
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) {
            const double v = (at(i, h, j, h) - at(i, h, j, -h) - at(i, -h, j, h) +
                              at(i, -h, j, -h)) /
                             (4.0 * h * h);
            jet.hess[i * d + j] = v;
            jet.hess[j * d + i] = v;
        }
    return jet;
}

// Adaptive Simpson quadrature.
inline double adaptive_simpson_rec(const std::function<double(double)>& f, double a, double b,
                                   double fa, double fm, double fb, double whole, double tol,
                                   int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol = 1e-12, int depth = 40) {
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, depth);
}

// Cole–Hopf Burgers reference by adaptive quadrature over the physical kernel
// (no Hermite substitution, unlike the production path).
inline double burgers_simpson(double x, double t, double nu) {
    const double pi = 3.14159265358979323846;
    if (t <= 0.0) return -std::sin(pi * x);
    const double amp = 1.0 / (2.0 * pi * nu);
    const double var = 4.0 * nu * t;
    const auto weight = [&](double eta) {
        return std::exp(-eta * eta / var - std::cos(pi * (x - eta)) * amp + amp);
    };
    const double half = std::max(1.5, 10.0 * std::sqrt(var));
    const auto num = [&](double eta) { return std::sin(pi * (x - eta)) * weight(eta); };
    const double top = adaptive_simpson(num, -half, half, 1e-14);
    const double bottom = adaptive_simpson(weight, -half, half, 1e-14);
    return -top / bottom;
}

// Minimum-norm least squares by complete orthogonal decomposition (QR-based,
// independent of the SVD path under test).
inline Eigen::VectorXd min_norm_least_squares(const Eigen::MatrixXd& a,
                                              const Eigen::VectorXd& y) {
    return a.completeOrthogonalDecomposition().solve(y);
}

// Normal-equations solve for full-column-rank systems.
inline Eigen::VectorXd normal_equations(const Eigen::MatrixXd& a, const Eigen::VectorXd& y) {
    return (a.transpose() * a).ldlt().solve(a.transpose() * y);
}

// Dense-grid 1-D minimizer.
inline double grid_minimize(const std::function<double(double)>& f, double lo, double hi,
                            int n) {
    double best_x = lo, best_f = f(lo);
    for (int i = 1; i <= n; ++i) {
        const double x = lo + (hi - lo) * i / n;
        const double v = f(x);
        if (v < best_f) {
            best_f = v;
            best_x = x;
        }
    }
    return best_x;
}

inline Eigen::MatrixXd random_matrix(std::mt19937_64& eng, int rows, int cols,
                                     double scale = 1.0) {
    std::uniform_real_distribution<double> dist(-scale, scale);
    Eigen::MatrixXd m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = dist(eng);
    return m;
}

inline Eigen::VectorXd random_vector(std::mt19937_64& eng, int n, double scale = 1.0) {
    return random_matrix(eng, n, 1, scale).col(0);
}

}  // namespace oracles
