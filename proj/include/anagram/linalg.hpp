#pragma once

// Thin SVD of the feature matrix and the two spectral regularization filters
// (hard cutoff, ridge) that every optimizer step and diagnostic consumes.
//
// Orientation: the factored matrix A (S×P) decomposes as
//     A = sample_side · diag(singular_values) · parameter_sideᵀ
// with the sample-side factor on the left. Do not silently transpose: the
// pseudo-inverse applied to a sample-space vector is
//     parameter_side · diag(filtered) · sample_sideᵀ · g.

#include <variant>

#include <Eigen/Dense>

namespace anagram {

struct SvdFactors {
    Eigen::MatrixXd sample_side;      ///< S×r, orthonormal columns
    Eigen::MatrixXd parameter_side;   ///< P×r, orthonormal columns
    Eigen::VectorXd singular_values;  ///< length r, non-increasing, >= 0
    int r = 0;                        ///< min(S, P)

    int sample_count() const { return static_cast<int>(sample_side.rows()); }
    int parameter_count() const { return static_cast<int>(parameter_side.rows()); }
};

/// Deterministic thin SVD. Sign convention: the first nonzero entry of each
/// parameter-side column is non-negative. Rejects non-finite input naming the
/// offending entry.
SvdFactors thin_svd(const Eigen::MatrixXd& matrix);

/// Keep 1/σ for σ >= alpha, zero the rest.
struct HardCutoffByThreshold {
    double alpha;
};

/// Keep 1/σ for the leading `retained` components (and σ > 0), zero the rest.
struct HardCutoffByRank {
    int retained;
};

/// σ / (σ² + S·alpha); the spectral form of ridge regression on the
/// sample-normalized Gram matrix.
struct RidgeFilter {
    double alpha;
    int sample_count;
};

using SpectralFilter = std::variant<HardCutoffByThreshold, HardCutoffByRank, RidgeFilter>;

/// Filtered inverse spectrum, one entry per singular value. Zero singular
/// values always map to zero. HardCutoffByRank clamps retained > r to r and
/// reports it through `rank_clamped` when provided; RidgeFilter rejects
/// alpha <= 0.
Eigen::VectorXd filtered_inverse_spectrum(const Eigen::VectorXd& singular_values,
                                          const SpectralFilter& filter,
                                          bool* rank_clamped = nullptr);

/// parameter_side · diag(filtered) · sample_sideᵀ · g — the natural-gradient
/// direction for a sample-space vector g of length S.
Eigen::VectorXd apply_pseudoinverse(const SvdFactors& factors, const SpectralFilter& filter,
                                    const Eigen::VectorXd& g);

/// Kernel of the orthogonal projection onto the span of the first `retained`
/// sample-side singular vectors: S×S, symmetric, idempotent, trace = retained.
/// `retained` is clamped to [0, r].
Eigen::MatrixXd projection_kernel(const SvdFactors& factors, int retained);

/// Number of singular values >= alpha (the retained count of a hard threshold
/// cutoff).
int rank_from_threshold(const Eigen::VectorXd& singular_values, double alpha);

}  // namespace anagram
