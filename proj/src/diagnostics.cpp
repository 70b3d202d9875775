#include "anagram/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace anagram {

RceCurve reconstruction_errors(const SvdFactors& factors, const Eigen::VectorXd& g) {
    if (g.size() != factors.sample_side.rows())
        throw std::invalid_argument("reconstruction_errors: g length mismatch");
    const int r = factors.r;
    const int sample_count = static_cast<int>(g.size());

    RceCurve curve;
    curve.singular_values = factors.singular_values;
    curve.sample_count = sample_count;
    curve.values.resize(r + 1);

    const Eigen::VectorXd coeffs = factors.sample_side.transpose() * g;
    double remaining = g.squaredNorm();
    curve.values[0] = std::sqrt(remaining / sample_count);
    for (int n = 1; n <= r; ++n) {
        remaining -= coeffs[n - 1] * coeffs[n - 1];
        curve.values[n] = std::sqrt(std::max(0.0, remaining) / sample_count);
    }
    return curve;
}

int intersection_rank(const RceCurve& curve) {
    int count = 0;
    for (int j = 1; j <= curve.rank(); ++j)
        if (curve.values[j] <= curve.singular_values[j - 1]) ++count;
    return count;
}

int precision_rank(const RceCurve& curve, double epsilon) {
    if (epsilon <= 0.0) throw std::invalid_argument("precision_rank: epsilon must be > 0");
    int count = 0;
    for (int j = 1; j <= curve.rank(); ++j)
        if (curve.values[j] >= epsilon) ++count;
    return count;
}

int find_elbow(const Eigen::VectorXd& xs, const Eigen::VectorXd& fs) {
    const int m = static_cast<int>(xs.size());
    if (m < 2 || fs.size() != m)
        throw std::invalid_argument("find_elbow: need two equal-length sequences of size >= 2");
    // Clockwise normal to the chord (x_m - x_1, f_m - f_1).
    const double nx = fs[m - 1] - fs[0];
    const double ny = xs[0] - xs[m - 1];
    int best = 1;
    double best_score = 0.0;  // j = 1 scores exactly zero
    for (int j = 1; j < m; ++j) {
        const double score = nx * (xs[j] - xs[0]) + ny * (fs[j] - fs[0]);
        if (score > best_score) {
            best_score = score;
            best = j + 1;
        }
    }
    return best;
}

int flattening_span(const RceCurve& curve, int r_cutoff, double tol_rel) {
    if (r_cutoff < 0 || r_cutoff > curve.rank())
        throw std::invalid_argument("flattening_span: r_cutoff out of range");
    const double threshold = tol_rel * curve.values[0];
    for (int n = 0; n <= r_cutoff; ++n)
        if (curve.values[n] - curve.values[r_cutoff] <= threshold) return n;
    return r_cutoff;
}

int spectrum_elbow(const Eigen::VectorXd& singular_values, bool log_scale) {
    int m = 0;
    while (m < singular_values.size() && singular_values[m] > 0.0) ++m;
    if (m < 2) return std::max(m, 1);
    Eigen::VectorXd xs(m), fs(m);
    for (int i = 0; i < m; ++i) {
        xs[i] = i + 1;
        fs[i] = log_scale ? std::log(singular_values[i]) : singular_values[i];
    }
    return find_elbow(xs, fs);
}

}  // namespace anagram
