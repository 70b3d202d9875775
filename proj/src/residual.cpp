#include "anagram/residual.hpp"

#include <cmath>
#include <stdexcept>

#include "anagram/threading.hpp"

namespace anagram {

namespace {

constexpr int kChunk = 4096;  // caps per-chunk workspace memory

double pair_component(const Jet2& j, int axis) {
    return axis < 0 ? j.value : j.d(axis);
}

struct Weights {
    double interior;
    double boundary;
};

Weights block_weights(const PdeProblem& problem) {
    const int sd = problem.interior_count();
    const int sb = problem.boundary_count();
    if (sd < 1) throw std::invalid_argument("residual: problem has no interior points");
    return {1.0 / std::sqrt(static_cast<double>(sd)),
            sb > 0 ? 1.0 / std::sqrt(static_cast<double>(sb)) : 0.0};
}

}  // namespace

Eigen::VectorXd residual_vector(const PdeProblem& problem, const MlpSpec& spec,
                                const Eigen::VectorXd& params) {
    const auto w = block_weights(problem);
    const int sd = problem.interior_count();
    const int nb = static_cast<int>(problem.boundary_points.rows());
    const int np = static_cast<int>(problem.pairs.size());
    Eigen::VectorXd residual(sd + nb + np);

    for (int at = 0; at < sd; at += kChunk) {
        const int n = std::min(kChunk, sd - at);
        const JetBatch jets =
            forward_jet_batch(spec, params, problem.interior_points.middleRows(at, n));
        for (int i = 0; i < n; ++i) {
            const Eigen::VectorXd x = problem.interior_points.row(at + i).transpose();
            residual[at + i] = (problem.interior_op.real(jets.jet(i)) - problem.source(x)) *
                               w.interior;
        }
    }
    for (int at = 0; at < nb; at += kChunk) {
        const int n = std::min(kChunk, nb - at);
        const JetBatch jets =
            forward_jet_batch(spec, params, problem.boundary_points.middleRows(at, n));
        for (int i = 0; i < n; ++i) {
            const Eigen::VectorXd x = problem.boundary_points.row(at + i).transpose();
            residual[sd + at + i] =
                (problem.boundary_op.real(jets.jet(i)) - problem.boundary_data(x)) * w.boundary;
        }
    }
    if (np > 0) {
        Eigen::MatrixXd pts(2 * np, problem.input_dim);
        for (int k = 0; k < np; ++k) {
            pts.row(2 * k) = problem.pairs[k].point_a.transpose();
            pts.row(2 * k + 1) = problem.pairs[k].point_b.transpose();
        }
        const JetBatch jets = forward_jet_batch(spec, params, pts);
        for (int k = 0; k < np; ++k)
            residual[sd + nb + k] = (pair_component(jets.jet(2 * k), problem.pairs[k].deriv_axis) -
                                     pair_component(jets.jet(2 * k + 1), problem.pairs[k].deriv_axis)) *
                                    w.boundary;
    }
    return residual;
}

double residual_loss(const PdeProblem& problem, const MlpSpec& spec,
                     const Eigen::VectorXd& params) {
    return 0.5 * residual_vector(problem, spec, params).squaredNorm();
}

ResidualBundle residual_bundle(const PdeProblem& problem, const MlpSpec& spec,
                               const Eigen::VectorXd& params) {
    if (spec.input_dim != problem.input_dim)
        throw std::invalid_argument("residual_bundle: model input_dim " +
                                    std::to_string(spec.input_dim) + " != problem dim " +
                                    std::to_string(problem.input_dim));
    const auto w = block_weights(problem);
    const int sd = problem.interior_count();
    const int nb = static_cast<int>(problem.boundary_points.rows());
    const int np = static_cast<int>(problem.pairs.size());
    const int total = sd + nb + np;
    const int pcount = param_count(spec);

    ResidualBundle bundle;
    bundle.interior_count = sd;
    bundle.boundary_count = nb + np;
    bundle.residual.resize(total);
    bundle.feature.resize(total, pcount);

    // Interior rows: D[u](x) − f(x), then one tangent pass per parameter.
    for (int at = 0; at < sd; at += kChunk) {
        const int n = std::min(kChunk, sd - at);
        const Eigen::MatrixXd pts = problem.interior_points.middleRows(at, n);
        const detail::ForwardCache cache = detail::forward_cache(spec, params, pts);
        const JetBatch primal = detail::output_jets(cache);
        for (int i = 0; i < n; ++i) {
            const Eigen::VectorXd x = pts.row(i).transpose();
            bundle.residual[at + i] =
                (problem.interior_op.real(primal.jet(i)) - problem.source(x)) * w.interior;
        }
        parallel_for(0, pcount, [&](int p) {
            const detail::TangentRow tangent = detail::output_tangent(spec, params, cache, p);
            for (int i = 0; i < n; ++i)
                bundle.feature(at + i, p) =
                    problem.interior_op.dual(detail::dual_jet(primal, tangent, i)).b * w.interior;
        });
    }

    // Boundary rows: B[u](x) − g(x).
    for (int at = 0; at < nb; at += kChunk) {
        const int n = std::min(kChunk, nb - at);
        const Eigen::MatrixXd pts = problem.boundary_points.middleRows(at, n);
        const detail::ForwardCache cache = detail::forward_cache(spec, params, pts);
        const JetBatch primal = detail::output_jets(cache);
        for (int i = 0; i < n; ++i) {
            const Eigen::VectorXd x = pts.row(i).transpose();
            bundle.residual[sd + at + i] =
                (problem.boundary_op.real(primal.jet(i)) - problem.boundary_data(x)) * w.boundary;
        }
        parallel_for(0, pcount, [&](int p) {
            const detail::TangentRow tangent = detail::output_tangent(spec, params, cache, p);
            for (int i = 0; i < n; ++i)
                bundle.feature(sd + at + i, p) =
                    problem.boundary_op.dual(detail::dual_jet(primal, tangent, i)).b * w.boundary;
        });
    }

    // Paired-point rows: component(a) − component(b).
    if (np > 0) {
        Eigen::MatrixXd pts(2 * np, problem.input_dim);
        for (int k = 0; k < np; ++k) {
            pts.row(2 * k) = problem.pairs[k].point_a.transpose();
            pts.row(2 * k + 1) = problem.pairs[k].point_b.transpose();
        }
        const detail::ForwardCache cache = detail::forward_cache(spec, params, pts);
        const JetBatch primal = detail::output_jets(cache);
        for (int k = 0; k < np; ++k)
            bundle.residual[sd + nb + k] =
                (pair_component(primal.jet(2 * k), problem.pairs[k].deriv_axis) -
                 pair_component(primal.jet(2 * k + 1), problem.pairs[k].deriv_axis)) *
                w.boundary;
        parallel_for(0, pcount, [&](int p) {
            const detail::TangentRow tangent = detail::output_tangent(spec, params, cache, p);
            const int d = primal.dim;
            for (int k = 0; k < np; ++k) {
                const int axis = problem.pairs[k].deriv_axis;
                const int a = 2 * k, b = 2 * k + 1;
                const double ta = axis < 0 ? tangent.v(a) : tangent.g(a * d + axis);
                const double tb = axis < 0 ? tangent.v(b) : tangent.g(b * d + axis);
                bundle.feature(sd + nb + k, p) = (ta - tb) * w.boundary;
            }
        });
    }
    return bundle;
}

}  // namespace anagram
