#include "anagram/mlp.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace anagram {

namespace {

std::vector<int> layer_sizes(const MlpSpec& spec) {
    std::vector<int> sizes;
    sizes.push_back(spec.input_dim);
    for (int w : spec.hidden_widths) sizes.push_back(w);
    sizes.push_back(1);
    return sizes;
}

// Uniform in [0,1) from the top 53 bits of the engine output, so that the
// stream does not depend on the standard library's distribution internals.
double uniform01(std::mt19937_64& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

}  // namespace

void validate(const MlpSpec& spec) {
    if (spec.input_dim < 1 || spec.input_dim > kMaxJetDim)
        throw std::invalid_argument("MlpSpec: input_dim must be in [1, " +
                                    std::to_string(kMaxJetDim) + "]");
    if (spec.hidden_widths.empty())
        throw std::invalid_argument("MlpSpec: at least one hidden layer required");
    for (int w : spec.hidden_widths)
        if (w < 1) throw std::invalid_argument("MlpSpec: hidden widths must be >= 1");
}

int param_count(const MlpSpec& spec) {
    validate(spec);
    auto sizes = layer_sizes(spec);
    int count = 0;
    for (std::size_t l = 1; l < sizes.size(); ++l)
        count += sizes[l] * sizes[l - 1] + sizes[l];
    return count;
}

Eigen::VectorXd init_params(const MlpSpec& spec) {
    const int total = param_count(spec);
    auto sizes = layer_sizes(spec);
    Eigen::VectorXd params = Eigen::VectorXd::Zero(total);
    std::mt19937_64 eng(spec.seed);
    int offset = 0;
    for (std::size_t l = 1; l < sizes.size(); ++l) {
        const int fan_in = sizes[l - 1];
        const int fan_out = sizes[l];
        const double bound = std::sqrt(6.0 / (fan_in + fan_out));
        for (int i = 0; i < fan_out * fan_in; ++i)
            params[offset + i] = (2.0 * uniform01(eng) - 1.0) * bound;
        offset += fan_out * fan_in;
        offset += fan_out;  // biases stay zero
    }
    return params;
}

namespace detail {

void TangentRow::setZero(int npts, int dim) {
    v = Eigen::RowVectorXd::Zero(npts);
    g = Eigen::RowVectorXd::Zero(npts * dim);
    h = Eigen::RowVectorXd::Zero(npts * dim * dim);
}

ParamRef param_ref(const MlpSpec& spec, int p) {
    auto sizes = layer_sizes(spec);
    int offset = 0;
    for (std::size_t l = 1; l < sizes.size(); ++l) {
        const int nw = sizes[l] * sizes[l - 1];
        if (p < offset + nw) {
            int local = p - offset;
            return {static_cast<int>(l - 1), false, local / sizes[l - 1], local % sizes[l - 1]};
        }
        offset += nw;
        if (p < offset + sizes[l])
            return {static_cast<int>(l - 1), true, p - offset, 0};
        offset += sizes[l];
    }
    throw std::out_of_range("param_ref: index " + std::to_string(p) + " out of range");
}

namespace {

struct WeightsView {
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> w;
    Eigen::Map<const Eigen::VectorXd> b;
};

WeightsView weights(const Eigen::VectorXd& params, const std::vector<int>& sizes,
                    int layer, const std::vector<int>& offsets) {
    const int n_out = sizes[layer + 1];
    const int n_in = sizes[layer];
    const double* base = params.data() + offsets[layer];
    return {Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
                base, n_out, n_in),
            Eigen::Map<const Eigen::VectorXd>(base + n_out * n_in, n_out)};
}

std::vector<int> layer_offsets(const std::vector<int>& sizes) {
    std::vector<int> offsets;
    int offset = 0;
    for (std::size_t l = 1; l < sizes.size(); ++l) {
        offsets.push_back(offset);
        offset += sizes[l] * sizes[l - 1] + sizes[l];
    }
    return offsets;
}

void check_points(const MlpSpec& spec, const Eigen::MatrixXd& points) {
    if (points.cols() != spec.input_dim)
        throw std::invalid_argument("forward: points have " + std::to_string(points.cols()) +
                                    " columns, expected " + std::to_string(spec.input_dim));
    if (points.rows() < 1) throw std::invalid_argument("forward: empty point batch");
}

// z = act(a) on jets, column block by column block. s1..s3 hold the
// activation derivatives used later by the tangent passes.
void apply_activation(Activation act, LayerState& st, int npts, int d) {
    const int n = static_cast<int>(st.a_val.rows());
    st.s1.resize(n, npts);
    st.s2.resize(n, npts);
    st.s3.resize(n, npts);
    st.z_val.resize(n, npts);
    for (int s = 0; s < npts; ++s)
        for (int i = 0; i < n; ++i) {
            ActivationJet aj = activation_jet(act, st.a_val(i, s));
            st.z_val(i, s) = aj.s0;
            st.s1(i, s) = aj.s1;
            st.s2(i, s) = aj.s2;
            st.s3(i, s) = aj.s3;
        }
    st.z_grad.resize(n, npts * d);
    st.z_hess.resize(n, npts * d * d);
    for (int s = 0; s < npts; ++s) {
        const auto s1c = st.s1.col(s).array();
        const auto s2c = st.s2.col(s).array();
        for (int i = 0; i < d; ++i)
            st.z_grad.col(s * d + i) = s1c * st.a_grad.col(s * d + i).array();
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                const int c = s * d * d + i * d + j;
                st.z_hess.col(c) = s1c * st.a_hess.col(c).array() +
                                   s2c * st.a_grad.col(s * d + i).array() *
                                       st.a_grad.col(s * d + j).array();
            }
    }
}

}  // namespace

ForwardCache forward_cache(const MlpSpec& spec, const Eigen::VectorXd& params,
                           const Eigen::MatrixXd& points) {
    validate(spec);
    check_points(spec, points);
    if (params.size() != param_count(spec))
        throw std::invalid_argument("forward: parameter vector has wrong length");

    const auto sizes = layer_sizes(spec);
    const auto offsets = layer_offsets(sizes);
    const int d = spec.input_dim;
    const int npts = static_cast<int>(points.rows());
    const int n_layers = static_cast<int>(sizes.size()) - 1;

    ForwardCache cache;
    cache.dim = d;
    cache.npts = npts;
    cache.x_val = points.transpose();
    cache.x_grad = Eigen::MatrixXd::Zero(d, npts * d);
    cache.x_hess = Eigen::MatrixXd::Zero(d, npts * d * d);
    for (int s = 0; s < npts; ++s)
        for (int i = 0; i < d; ++i) cache.x_grad(i, s * d + i) = 1.0;

    cache.layers.resize(n_layers);
    const Eigen::MatrixXd* zv = &cache.x_val;
    const Eigen::MatrixXd* zg = &cache.x_grad;
    const Eigen::MatrixXd* zh = &cache.x_hess;
    for (int l = 0; l < n_layers; ++l) {
        LayerState& st = cache.layers[l];
        auto wv = weights(params, sizes, l, offsets);
        st.a_val = (wv.w * (*zv)).colwise() + wv.b;
        st.a_grad = wv.w * (*zg);
        st.a_hess = wv.w * (*zh);
        if (l + 1 < n_layers) {
            apply_activation(spec.activation, st, npts, d);
        } else {
            st.z_val = st.a_val;
            st.z_grad = st.a_grad;
            st.z_hess = st.a_hess;
        }
        zv = &st.z_val;
        zg = &st.z_grad;
        zh = &st.z_hess;
    }
    return cache;
}

JetBatch output_jets(const ForwardCache& cache) {
    const LayerState& out = cache.layers.back();
    JetBatch batch;
    batch.dim = cache.dim;
    batch.value = out.z_val.row(0).transpose();
    const int d = cache.dim;
    batch.grad.resize(cache.npts, d);
    batch.hess.resize(cache.npts, d * d);
    for (int s = 0; s < cache.npts; ++s) {
        batch.grad.row(s) = out.z_grad.row(0).segment(s * d, d);
        batch.hess.row(s) = out.z_hess.row(0).segment(s * d * d, d * d);
    }
    return batch;
}

namespace {

// Jet product t_z = d1_jet ⊛ t_a for a single neuron row, where d1_jet is the
// jet of act' composed with the pre-activation jet of that neuron.
TangentRow activation_tangent(const LayerState& st, int row, const TangentRow& ta,
                              int npts, int d) {
    TangentRow tz;
    tz.v.resize(npts);
    tz.g.resize(npts * d);
    tz.h.resize(npts * d * d);
    for (int s = 0; s < npts; ++s) {
        const double uv = st.s1(row, s);
        const double s2 = st.s2(row, s);
        const double s3 = st.s3(row, s);
        const double tav = ta.v(s);
        tz.v(s) = uv * tav;
        // grad of act'(a): s2 * a_grad
        for (int i = 0; i < d; ++i) {
            const double ug = s2 * st.a_grad(row, s * d + i);
            tz.g(s * d + i) = uv * ta.g(s * d + i) + tav * ug;
        }
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                const int c = s * d * d + i * d + j;
                const double agi = st.a_grad(row, s * d + i);
                const double agj = st.a_grad(row, s * d + j);
                const double uh = s2 * st.a_hess(row, c) + s3 * agi * agj;
                const double ugi = s2 * agi;
                const double ugj = s2 * agj;
                tz.h(c) = uv * ta.h(c) + tav * uh + ugi * ta.g(s * d + j) +
                          ta.g(s * d + i) * ugj;
            }
    }
    return tz;
}

// Dense multi-row tangent state for layers past the seed layer.
struct DenseTangent {
    Eigen::MatrixXd v, g, h;
};

DenseTangent dense_activation_tangent(const LayerState& st, const DenseTangent& ta,
                                      int npts, int d) {
    const int n = static_cast<int>(ta.v.rows());
    DenseTangent tz{Eigen::MatrixXd(n, npts), Eigen::MatrixXd(n, npts * d),
                    Eigen::MatrixXd(n, npts * d * d)};
    for (int s = 0; s < npts; ++s) {
        tz.v.col(s) = st.s1.col(s).cwiseProduct(ta.v.col(s));
        for (int i = 0; i < d; ++i) {
            const int c = s * d + i;
            tz.g.col(c) = st.s1.col(s).cwiseProduct(ta.g.col(c)) +
                          ta.v.col(s).cwiseProduct(st.s2.col(s).cwiseProduct(st.a_grad.col(c)));
        }
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                const int c = s * d * d + i * d + j;
                const auto agi = st.a_grad.col(s * d + i).array();
                const auto agj = st.a_grad.col(s * d + j).array();
                const auto uh = st.s2.col(s).array() * st.a_hess.col(c).array() +
                                st.s3.col(s).array() * agi * agj;
                tz.h.col(c) = (st.s1.col(s).array() * ta.h.col(c).array() +
                               ta.v.col(s).array() * uh +
                               st.s2.col(s).array() * agi * ta.g.col(s * d + j).array() +
                               st.s2.col(s).array() * agj * ta.g.col(s * d + i).array())
                                  .matrix();
            }
    }
    return tz;
}

}  // namespace

TangentRow output_tangent(const MlpSpec& spec, const Eigen::VectorXd& params,
                          const ForwardCache& cache, int p) {
    const auto sizes = layer_sizes(spec);
    const auto offsets = layer_offsets(sizes);
    const int d = cache.dim;
    const int npts = cache.npts;
    const int n_layers = static_cast<int>(sizes.size()) - 1;
    const ParamRef ref = param_ref(spec, p);

    // Tangent of the seed layer's pre-activation at neuron ref.row: the
    // incoming jet for a weight, the unit jet for a bias.
    TangentRow ta;
    if (ref.is_bias) {
        ta.setZero(npts, d);
        ta.v.setOnes();
    } else if (ref.layer == 0) {
        ta.v = cache.x_val.row(ref.col);
        ta.g = cache.x_grad.row(ref.col);
        ta.h = cache.x_hess.row(ref.col);
    } else {
        const LayerState& prev = cache.layers[ref.layer - 1];
        ta.v = prev.z_val.row(ref.col);
        ta.g = prev.z_grad.row(ref.col);
        ta.h = prev.z_hess.row(ref.col);
    }

    if (ref.layer == n_layers - 1) return ta;  // output layer is affine

    TangentRow tz = activation_tangent(cache.layers[ref.layer], ref.row, ta, npts, d);

    // First mix: single active row fans out through the next weight column.
    int l = ref.layer + 1;
    auto wv = weights(params, sizes, l, offsets);
    if (l == n_layers - 1) {
        const double w = wv.w(0, ref.row);
        tz.v *= w;
        tz.g *= w;
        tz.h *= w;
        return tz;
    }
    DenseTangent dense{wv.w.col(ref.row) * tz.v, wv.w.col(ref.row) * tz.g,
                       wv.w.col(ref.row) * tz.h};
    for (;;) {
        dense = dense_activation_tangent(cache.layers[l], dense, npts, d);
        ++l;
        auto wl = weights(params, sizes, l, offsets);
        dense = DenseTangent{wl.w * dense.v, wl.w * dense.g, wl.w * dense.h};
        if (l == n_layers - 1) {
            TangentRow out;
            out.v = dense.v.row(0);
            out.g = dense.g.row(0);
            out.h = dense.h.row(0);
            return out;
        }
    }
}

JetDual dual_jet(const JetBatch& primal, const TangentRow& tangent, int s) {
    JetDual j;
    j.dim = primal.dim;
    const int d = primal.dim;
    j.value = Dual(primal.value(s), tangent.v(s));
    for (int i = 0; i < d; ++i)
        j.grad[static_cast<std::size_t>(i)] = Dual(primal.grad(s, i), tangent.g(s * d + i));
    for (int c = 0; c < d * d; ++c)
        j.hess[static_cast<std::size_t>(c)] = Dual(primal.hess(s, c), tangent.h(s * d * d + c));
    return j;
}

}  // namespace detail

Jet2 JetBatch::jet(int s) const {
    Jet2 j;
    j.dim = dim;
    j.value = value(s);
    for (int i = 0; i < dim; ++i) j.grad[static_cast<std::size_t>(i)] = grad(s, i);
    for (int c = 0; c < dim * dim; ++c) j.hess[static_cast<std::size_t>(c)] = hess(s, c);
    return j;
}

Eigen::VectorXd forward_values(const MlpSpec& spec, const Eigen::VectorXd& params,
                               const Eigen::MatrixXd& points) {
    validate(spec);
    detail::check_points(spec, points);
    if (params.size() != param_count(spec))
        throw std::invalid_argument("forward: parameter vector has wrong length");
    const auto sizes = layer_sizes(spec);
    const auto offsets = detail::layer_offsets(sizes);
    const int n_layers = static_cast<int>(sizes.size()) - 1;
    Eigen::MatrixXd z = points.transpose();
    for (int l = 0; l < n_layers; ++l) {
        auto wv = detail::weights(params, sizes, l, offsets);
        Eigen::MatrixXd a = (wv.w * z).colwise() + wv.b;
        if (l + 1 < n_layers) {
            if (spec.activation == Activation::Tanh)
                z = a.array().tanh().matrix();
            else
                z = a.array().sin().matrix();
        } else {
            z = a;
        }
    }
    return z.row(0).transpose();
}

JetBatch forward_jet_batch(const MlpSpec& spec, const Eigen::VectorXd& params,
                           const Eigen::MatrixXd& points) {
    return detail::output_jets(detail::forward_cache(spec, params, points));
}

Jet2 forward_jet(const MlpSpec& spec, const Eigen::VectorXd& params,
                 const Eigen::VectorXd& x) {
    Eigen::MatrixXd pt = x.transpose();
    return forward_jet_batch(spec, params, pt).jet(0);
}

}  // namespace anagram
