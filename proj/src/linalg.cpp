#include "anagram/linalg.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace anagram {

namespace {

void check_finite(const Eigen::MatrixXd& m) {
    if (m.allFinite()) return;
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            if (!std::isfinite(m(i, j)))
                throw std::invalid_argument("thin_svd: non-finite entry at (" +
                                            std::to_string(i) + ", " + std::to_string(j) + ")");
}

}  // namespace

SvdFactors thin_svd(const Eigen::MatrixXd& matrix) {
    if (matrix.rows() < 1 || matrix.cols() < 1)
        throw std::invalid_argument("thin_svd: matrix must be at least 1x1");
    check_finite(matrix);

    Eigen::BDCSVD<Eigen::MatrixXd> svd(matrix, Eigen::ComputeThinU | Eigen::ComputeThinV);
    SvdFactors f;
    f.sample_side = svd.matrixU();
    f.parameter_side = svd.matrixV();
    f.singular_values = svd.singularValues();
    f.r = static_cast<int>(f.singular_values.size());

    // Fix signs: first nonzero parameter-side entry of each column non-negative.
    for (int c = 0; c < f.r; ++c) {
        for (Eigen::Index i = 0; i < f.parameter_side.rows(); ++i) {
            const double v = f.parameter_side(i, c);
            if (v != 0.0) {
                if (v < 0.0) {
                    f.parameter_side.col(c) = -f.parameter_side.col(c);
                    f.sample_side.col(c) = -f.sample_side.col(c);
                }
                break;
            }
        }
    }
    return f;
}

Eigen::VectorXd filtered_inverse_spectrum(const Eigen::VectorXd& singular_values,
                                          const SpectralFilter& filter, bool* rank_clamped) {
    const int r = static_cast<int>(singular_values.size());
    if (rank_clamped) *rank_clamped = false;
    Eigen::VectorXd out = Eigen::VectorXd::Zero(r);

    if (const auto* hard = std::get_if<HardCutoffByThreshold>(&filter)) {
        for (int i = 0; i < r; ++i) {
            const double s = singular_values[i];
            if (s >= hard->alpha && s > 0.0) out[i] = 1.0 / s;
        }
        return out;
    }
    if (const auto* rank = std::get_if<HardCutoffByRank>(&filter)) {
        int k = rank->retained;
        if (k < 0) throw std::invalid_argument("HardCutoffByRank: retained must be >= 0");
        if (k > r) {
            k = r;
            if (rank_clamped) *rank_clamped = true;
        }
        for (int i = 0; i < k; ++i)
            if (singular_values[i] > 0.0) out[i] = 1.0 / singular_values[i];
        return out;
    }
    const auto& ridge = std::get<RidgeFilter>(filter);
    if (ridge.alpha <= 0.0) throw std::invalid_argument("RidgeFilter: alpha must be > 0");
    if (ridge.sample_count < 1)
        throw std::invalid_argument("RidgeFilter: sample_count must be >= 1");
    for (int i = 0; i < r; ++i) {
        const double s = singular_values[i];
        if (s > 0.0) out[i] = s / (s * s + ridge.sample_count * ridge.alpha);
    }
    return out;
}

Eigen::VectorXd apply_pseudoinverse(const SvdFactors& factors, const SpectralFilter& filter,
                                    const Eigen::VectorXd& g) {
    if (g.size() != factors.sample_side.rows())
        throw std::invalid_argument("apply_pseudoinverse: g has length " +
                                    std::to_string(g.size()) + ", expected " +
                                    std::to_string(factors.sample_side.rows()));
    const Eigen::VectorXd filtered = filtered_inverse_spectrum(factors.singular_values, filter);
    Eigen::VectorXd coeffs = factors.sample_side.transpose() * g;
    coeffs.array() *= filtered.array();
    return factors.parameter_side * coeffs;
}

Eigen::MatrixXd projection_kernel(const SvdFactors& factors, int retained) {
    int k = retained;
    if (k < 0) k = 0;
    if (k > factors.r) k = factors.r;
    const auto vk = factors.sample_side.leftCols(k);
    return vk * vk.transpose();
}

int rank_from_threshold(const Eigen::VectorXd& singular_values, double alpha) {
    int count = 0;
    for (Eigen::Index i = 0; i < singular_values.size(); ++i)
        if (singular_values[i] >= alpha && singular_values[i] > 0.0) ++count;
    return count;
}

}  // namespace anagram
