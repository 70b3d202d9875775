#pragma once

// Reconstruction-error curves and the rank selectors (intersection, precision,
// elbow, flattening span) that drive the adaptive multi-cutoff strategy.

#include <Eigen/Dense>

#include "anagram/linalg.hpp"

namespace anagram {

/// Reconstruction errors RCE_0 … RCE_r of a sample-space vector g against the
/// sample-side singular directions, plus the singular values the curve is
/// compared with. values[N]² = (‖g‖² − Σ_{p<=N} (Vᵀg)_p²) / S, so values[0]²
/// equals ‖g‖²/S and the curve is non-increasing in N.
struct RceCurve {
    Eigen::VectorXd values;           ///< length r+1, index 0 … r
    Eigen::VectorXd singular_values;  ///< length r
    int sample_count = 0;

    int rank() const { return static_cast<int>(singular_values.size()); }
};

/// O(S·r) beyond the SVD itself: one projection of g onto the sample-side
/// basis and a prefix sum of squared coefficients.
RceCurve reconstruction_errors(const SvdFactors& factors, const Eigen::VectorXd& g);

/// #{ j in 1…r : values[j] <= sigma_j } — how many components the curve lies
/// at or below the singular-value curve.
int intersection_rank(const RceCurve& curve);

/// #{ j in 1…r : values[j] >= epsilon } — how many components still carry
/// signal above the target precision.
int precision_rank(const RceCurve& curve, double epsilon);

/// One-based index of the point farthest (clockwise) from the chord of a
/// decreasing curve; ties resolve to the smallest index. Requires m >= 2.
int find_elbow(const Eigen::VectorXd& xs, const Eigen::VectorXd& fs);

/// Smallest N with values[N] − values[r_cutoff] <= tol_rel · values[0];
/// returns r_cutoff when nothing smaller qualifies.
int flattening_span(const RceCurve& curve, int r_cutoff, double tol_rel);

/// Elbow of a singular-value spectrum over its strictly positive prefix,
/// returned as a retained-component count. log_scale applies the elbow to
/// log(sigma) (spectra span many decades); raw values are the literal mode.
int spectrum_elbow(const Eigen::VectorXd& singular_values, bool log_scale);

}  // namespace anagram
