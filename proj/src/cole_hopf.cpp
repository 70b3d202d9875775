#include "anagram/cole_hopf.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace anagram {

QuadratureRule gauss_hermite(int n) {
    if (n < 1) throw std::invalid_argument("gauss_hermite: n must be >= 1");
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) {
        const double off = std::sqrt(k / 2.0);
        jacobi(k, k - 1) = off;
        jacobi(k - 1, k) = off;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jacobi);
    QuadratureRule rule;
    rule.nodes = eig.eigenvalues();
    rule.weights.resize(n);
    const double total = std::sqrt(std::numbers::pi);
    for (int i = 0; i < n; ++i) {
        const double v0 = eig.eigenvectors()(0, i);
        rule.weights[i] = total * v0 * v0;
    }
    return rule;
}

double burgers_cole_hopf(double x, double t, double nu, const QuadratureRule& rule) {
    const double pi = std::numbers::pi;
    if (t <= 0.0) return -std::sin(pi * x);
    const double scale = 2.0 * std::sqrt(nu * t);
    const double amp = 1.0 / (2.0 * pi * nu);
    double num = 0.0, den = 0.0;
    for (int i = 0; i < rule.nodes.size(); ++i) {
        const double y = x - scale * rule.nodes[i];
        const double f = std::exp(-std::cos(pi * y) * amp);
        num += rule.weights[i] * std::sin(pi * y) * f;
        den += rule.weights[i] * f;
    }
    return -num / den;
}

double burgers_reference(double x, double t, double nu) {
    static const QuadratureRule rule = gauss_hermite(128);
    return burgers_cole_hopf(x, t, nu, rule);
}

}  // namespace anagram
