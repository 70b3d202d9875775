#pragma once

// Small fully-connected scalar-output network with exact input-derivatives up
// to order 2 and exact parameter-tangents of those derivatives. Evaluation is
// batched over collocation points; per-layer state is kept as matrices so the
// heavy lifting stays inside dense GEMMs.

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "anagram/jet.hpp"

namespace anagram {

struct MlpSpec {
    int input_dim = 1;
    std::vector<int> hidden_widths = {32};
    Activation activation = Activation::Tanh;
    std::uint64_t seed = 0;
};

/// Total number of weights and biases; pure function of the spec.
int param_count(const MlpSpec& spec);

/// Glorot-uniform weights (±sqrt(6/(fan_in+fan_out))), zero biases.
/// Deterministic for a fixed seed.
Eigen::VectorXd init_params(const MlpSpec& spec);

void validate(const MlpSpec& spec);

/// Jets of the network output at a batch of points.
/// grad is S×d; hess is S×d² with row s holding the point's Hessian row-major.
struct JetBatch {
    Eigen::VectorXd value;
    Eigen::MatrixXd grad;
    Eigen::MatrixXd hess;
    int dim = 0;

    Jet2 jet(int s) const;
    int size() const { return static_cast<int>(value.size()); }
};

/// Values only (no input derivatives); the fast path for error metrics.
Eigen::VectorXd forward_values(const MlpSpec& spec, const Eigen::VectorXd& params,
                               const Eigen::MatrixXd& points);

JetBatch forward_jet_batch(const MlpSpec& spec, const Eigen::VectorXd& params,
                           const Eigen::MatrixXd& points);

/// Single-point convenience wrapper around the batched pass.
Jet2 forward_jet(const MlpSpec& spec, const Eigen::VectorXd& params,
                 const Eigen::VectorXd& x);

namespace detail {

/// Per-layer forward state for one batch of points. Column layout: value is
/// n×S, grad n×(S·d) with the d columns of point s at [s·d, s·d+d), hess
/// n×(S·d²) likewise.
struct LayerState {
    Eigen::MatrixXd a_val, a_grad, a_hess;  // pre-activation jets
    Eigen::MatrixXd z_val, z_grad, z_hess;  // post-activation jets
    Eigen::MatrixXd s1, s2, s3;             // activation derivatives at a_val
};

struct ForwardCache {
    std::vector<LayerState> layers;  // hidden layers then output layer
    Eigen::MatrixXd x_val, x_grad, x_hess;  // input jets (d×S, d×S·d, d×S·d²)
    int dim = 0;
    int npts = 0;
};

/// Row-batch of tangent jets (one network scalar across all points).
struct TangentRow {
    Eigen::RowVectorXd v, g, h;
    void setZero(int npts, int dim);
};

ForwardCache forward_cache(const MlpSpec& spec, const Eigen::VectorXd& params,
                           const Eigen::MatrixXd& points);

JetBatch output_jets(const ForwardCache& cache);

/// Identifies one parameter inside the flat layer-major layout.
struct ParamRef {
    int layer;   // 0-based
    bool is_bias;
    int row;     // output neuron index
    int col;     // input index (weights only)
};

ParamRef param_ref(const MlpSpec& spec, int p);

/// Tangent of the output jets along parameter direction p, reusing the primal
/// cache. One forward-mode pass; the tangent stays confined to a single
/// neuron until the next affine layer mixes it.
TangentRow output_tangent(const MlpSpec& spec, const Eigen::VectorXd& params,
                          const ForwardCache& cache, int p);

/// Jet of point s assembled from primal and tangent rows.
JetDual dual_jet(const JetBatch& primal, const TangentRow& tangent, int s);

}  // namespace detail

}  // namespace anagram
