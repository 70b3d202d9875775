#include "anagram/optimizer.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace anagram {

// ---------------------------------------------------------------------------
// Residual systems
// ---------------------------------------------------------------------------

PdeResidualSystem::PdeResidualSystem(PdeProblem problem, MlpSpec spec)
    : problem_(std::move(problem)), spec_(std::move(spec)) {
    if (spec_.input_dim != problem_.input_dim)
        throw std::invalid_argument("PdeResidualSystem: model/problem dimension mismatch");
}

ResidualBundle PdeResidualSystem::bundle(const Eigen::VectorXd& params) const {
    return residual_bundle(problem_, spec_, params);
}

double PdeResidualSystem::loss(const Eigen::VectorXd& params) const {
    return residual_loss(problem_, spec_, params);
}

int PdeResidualSystem::sample_count() const { return problem_.sample_count(); }

std::optional<double> PdeResidualSystem::relative_l2(const Eigen::VectorXd& params) const {
    if (!problem_.has_reference()) return std::nullopt;
    return relative_l2_error(problem_, spec_, params);
}

LinearResidualSystem::LinearResidualSystem(Eigen::MatrixXd a, Eigen::VectorXd y)
    : a_(std::move(a)), y_(std::move(y)) {
    if (a_.rows() != y_.size())
        throw std::invalid_argument("LinearResidualSystem: dimension mismatch");
}

ResidualBundle LinearResidualSystem::bundle(const Eigen::VectorXd& params) const {
    ResidualBundle b;
    b.residual = a_ * params - y_;
    b.feature = a_;
    b.interior_count = static_cast<int>(a_.rows());
    b.boundary_count = 0;
    return b;
}

double LinearResidualSystem::loss(const Eigen::VectorXd& params) const {
    return 0.5 * (a_ * params - y_).squaredNorm();
}

int LinearResidualSystem::sample_count() const { return static_cast<int>(a_.rows()); }

// ---------------------------------------------------------------------------
// Line search
// ---------------------------------------------------------------------------

namespace {

double finite_or_inf(double v) {
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
}

}  // namespace

LineSearchResult line_search(const std::function<double(double)>& loss_fn,
                             const LineSearchConfig& config) {
    const double loss0 = loss_fn(0.0);
    if (!std::isfinite(loss0))
        throw std::invalid_argument("line_search: loss at eta = 0 is not finite");

    // Coarse geometric probes, ascending.
    const int k = config.grid_depth;
    std::vector<double> etas(k + 1), losses(k + 1);
    bool any_finite = false;
    for (int i = 0; i <= k; ++i) {
        etas[i] = config.eta_max * std::ldexp(1.0, i - k);
        losses[i] = finite_or_inf(loss_fn(etas[i]));
        any_finite = any_finite || std::isfinite(losses[i]);
    }
    if (!any_finite) return {0.0, loss0, true};

    int best = 0;
    for (int i = 1; i <= k; ++i)
        if (losses[i] < losses[best]) best = i;
    double best_eta = etas[best];
    double best_loss = losses[best];

    double lo = best == 0 ? 0.0 : etas[best - 1];
    double hi = best == k ? etas[k] : etas[best + 1];

    constexpr double kGolden = 0.6180339887498949;
    double x1 = hi - kGolden * (hi - lo);
    double x2 = lo + kGolden * (hi - lo);
    double f1 = finite_or_inf(loss_fn(x1));
    double f2 = finite_or_inf(loss_fn(x2));
    for (int it = 0; it < config.golden_iters; ++it) {
        if (f1 < best_loss) { best_loss = f1; best_eta = x1; }
        if (f2 < best_loss) { best_loss = f2; best_eta = x2; }
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - kGolden * (hi - lo);
            f1 = finite_or_inf(loss_fn(x1));
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + kGolden * (hi - lo);
            f2 = finite_or_inf(loss_fn(x2));
        }
    }
    if (f1 < best_loss) { best_loss = f1; best_eta = x1; }
    if (f2 < best_loss) { best_loss = f2; best_eta = x2; }

    if (best_loss <= loss0) return {best_eta, best_loss, false};
    return {0.0, loss0, false};
}

// ---------------------------------------------------------------------------
// One step
// ---------------------------------------------------------------------------

StepOutcome anagram_step(const ResidualBundle& bundle, const SvdFactors& factors, int r_cutoff,
                         const Eigen::VectorXd& params,
                         const std::function<double(const Eigen::VectorXd&)>& loss_at,
                         const LineSearchConfig& config) {
    StepOutcome out;
    out.loss_before = bundle.loss();
    const Eigen::VectorXd direction =
        apply_pseudoinverse(factors, HardCutoffByRank{r_cutoff}, bundle.residual);
    if (direction.norm() == 0.0) {
        out.params = params;
        out.loss_after = out.loss_before;
        out.marker = StepMarker::ZeroDirection;
        return out;
    }
    const auto result = line_search(
        [&](double eta) { return loss_at(params - eta * direction); }, config);
    out.eta = result.eta;
    out.params = result.eta == 0.0 ? params : Eigen::VectorXd(params - result.eta * direction);
    out.loss_after = result.loss;
    out.marker = result.stalled ? StepMarker::Stall : StepMarker::Ok;
    return out;
}

// ---------------------------------------------------------------------------
// Cutoff policy
// ---------------------------------------------------------------------------

const char* to_string(Phase phase) {
    switch (phase) {
        case Phase::Ignition: return "ignition";
        case Phase::Ascent: return "ascent";
        case Phase::StageSeparation: return "stage-separation";
    }
    return "?";
}

const char* to_string(Termination t) {
    switch (t) {
        case Termination::MaxIterations: return "max-iterations";
        case Termination::BoosterReturn: return "booster-return";
        case Termination::LossThreshold: return "loss-threshold";
        case Termination::PrecisionRankZero: return "precision-rank-zero";
    }
    return "?";
}

CutoffState cutoff_policy_update(const CutoffState& state, int r1, int r2, int prev_r_min) {
    CutoffState next = state;
    next.r_min = std::min(r1, r2);
    next.r_max = std::max(r1, state.r_max);
    if (!next.liftoff) {
        if (next.r_min >= next.r_max)
            next.liftoff = true;
        else if (prev_r_min >= 0 && next.r_min == prev_r_min)
            next.r_max += 1;
    }
    next.phase = !next.liftoff ? Phase::Ignition
                               : (r2 > r1 ? Phase::Ascent : Phase::StageSeparation);
    return next;
}

// ---------------------------------------------------------------------------
// Training loops
// ---------------------------------------------------------------------------

namespace {

struct EvalState {
    ResidualBundle bundle;
    SvdFactors factors;
    RceCurve curve;
};

EvalState evaluate(const ResidualSystem& system, const Eigen::VectorXd& params) {
    EvalState st;
    st.bundle = system.bundle(params);
    st.factors = thin_svd(st.bundle.feature);
    const double root_s = std::sqrt(static_cast<double>(st.bundle.sample_count()));
    st.curve = reconstruction_errors(st.factors, root_s * st.bundle.residual);
    // The curve is sample-normalized (the 1/sqrt(S) in its definition), so the
    // spectrum it is compared against must stay unnormalized: undo the
    // 1/sqrt(S_block) row scaling of the feature matrix. Without this the
    // intersection rank is ~sqrt(S) too stringent and the cutoffs stall.
    st.curve.singular_values *= root_s;
    return st;
}

IterationRecord start_record(int t, const ResidualSystem& system, const TrainConfig& config,
                             const EvalState& st, const Eigen::VectorXd& params, int r1, int r2,
                             int flatten_cutoff) {
    IterationRecord rec;
    rec.t = t;
    rec.train_loss = st.curve.values[0] * st.curve.values[0];
    rec.rel_l2 = system.relative_l2(params);
    rec.r_int = r1;
    rec.r_eps = r2;
    rec.elbow = spectrum_elbow(st.curve.singular_values, config.elbow_log_scale);
    rec.n_flat = flattening_span(st.curve, std::min(flatten_cutoff, st.curve.rank()),
                                 config.flatten_tol);
    if (config.record_curves) {
        rec.rce = st.curve.values;
        rec.singular_values = st.curve.singular_values;
    }
    return rec;
}

void finalize(RunResult& result, const ResidualSystem& system, const EvalState& st,
              const Eigen::VectorXd& params) {
    result.final_params = params;
    result.final_train_loss = st.curve.values[0] * st.curve.values[0];
    result.final_rel_l2 = system.relative_l2(params);
    result.iterations = static_cast<int>(result.records.size());
}

}  // namespace

RunResult fixed_cutoff_run(const ResidualSystem& system, const TrainConfig& config,
                           const Eigen::VectorXd& initial) {
    if (config.t_max < 0) throw std::invalid_argument("fixed_cutoff_run: t_max must be >= 0");
    RunResult result;
    Eigen::VectorXd params = initial;
    const auto loss_at = [&](const Eigen::VectorXd& q) { return system.loss(q); };
    EvalState st = evaluate(system, params);

    for (int t = 1; t <= config.t_max; ++t) {
        // Threshold against the same unnormalized spectrum the curve carries.
        const int r_cutoff =
            rank_from_threshold(st.curve.singular_values, config.fixed_cutoff_alpha);
        const int r1 = intersection_rank(st.curve);
        const int r2 = precision_rank(st.curve, config.epsilon);
        IterationRecord rec = start_record(t, system, config, st, params, r1, r2, r_cutoff);
        rec.r_min = r_cutoff;
        rec.r_max = r_cutoff;
        rec.phase = "fixed";
        if (rec.train_loss <= config.epsilon * config.epsilon) {
            result.records.push_back(std::move(rec));
            result.termination = Termination::LossThreshold;
            break;
        }
        const StepOutcome out =
            anagram_step(st.bundle, st.factors, r_cutoff, params, loss_at, config.line_search);
        params = out.params;
        st = evaluate(system, params);
        rec.eta = out.eta;
        rec.markers = {out.marker};
        result.records.push_back(std::move(rec));
    }
    finalize(result, system, st, params);
    return result;
}

RunResult amstramgram_run(const ResidualSystem& system, const TrainConfig& config,
                          const Eigen::VectorXd& initial) {
    if (config.t_max < 0) throw std::invalid_argument("amstramgram_run: t_max must be >= 0");
    if (config.epsilon <= 0.0)
        throw std::invalid_argument("amstramgram_run: epsilon must be > 0");
    RunResult result;
    Eigen::VectorXd params = initial;
    const auto loss_at = [&](const Eigen::VectorXd& q) { return system.loss(q); };
    EvalState st = evaluate(system, params);

    CutoffState state;
    state.epsilon = config.epsilon;
    state.r_max = spectrum_elbow(st.curve.singular_values, config.elbow_log_scale);
    int prev_r_min = -1;

    for (int t = 1; t <= config.t_max; ++t) {
        const int r1 = intersection_rank(st.curve);
        const int r2 = precision_rank(st.curve, config.epsilon);
        state = cutoff_policy_update(state, r1, r2, prev_r_min);
        if (state.r_max > st.factors.r) state.r_max = st.factors.r;
        prev_r_min = state.r_min;

        IterationRecord rec = start_record(t, system, config, st, params, r1, r2, state.r_max);
        rec.r_min = state.r_min;
        rec.r_max = state.r_max;
        rec.phase = to_string(state.phase);
        rec.liftoff = state.liftoff;

        if (state.r_min == 0) {
            result.records.push_back(std::move(rec));
            result.termination = Termination::BoosterReturn;
            break;
        }

        // Exploration step with the maximum cutoff, then the precision step
        // with the minimum cutoff on a fresh factorization.
        const StepOutcome wide =
            anagram_step(st.bundle, st.factors, state.r_max, params, loss_at, config.line_search);
        params = wide.params;
        st = evaluate(system, params);
        const StepOutcome tight =
            anagram_step(st.bundle, st.factors, state.r_min, params, loss_at, config.line_search);
        params = tight.params;
        st = evaluate(system, params);

        rec.eta_first = wide.eta;
        rec.eta = tight.eta;
        rec.markers = {wide.marker, tight.marker};
        result.records.push_back(std::move(rec));
    }
    finalize(result, system, st, params);
    return result;
}

RunResult principled_adaptive_run(const ResidualSystem& system, const TrainConfig& config,
                                  const Eigen::VectorXd& initial) {
    if (config.epsilon <= 0.0)
        throw std::invalid_argument("principled_adaptive_run: epsilon must be > 0");
    RunResult result;
    Eigen::VectorXd params = initial;
    const auto loss_at = [&](const Eigen::VectorXd& q) { return system.loss(q); };
    EvalState st = evaluate(system, params);

    for (int t = 1; t <= config.t_max; ++t) {
        const int r1 = intersection_rank(st.curve);
        const int r2 = precision_rank(st.curve, config.epsilon);
        const bool tracking = st.curve.values[r1] > config.epsilon;
        const int r_cutoff = tracking ? r1 : r2;
        IterationRecord rec = start_record(t, system, config, st, params, r1, r2, r_cutoff);
        rec.r_min = r_cutoff;
        rec.r_max = r_cutoff;
        rec.phase = tracking ? "intersection" : "precision";
        if (r2 == 0) {
            result.records.push_back(std::move(rec));
            result.termination = Termination::PrecisionRankZero;
            break;
        }
        const StepOutcome out =
            anagram_step(st.bundle, st.factors, r_cutoff, params, loss_at, config.line_search);
        params = out.params;
        st = evaluate(system, params);
        rec.eta = out.eta;
        rec.markers = {out.marker};
        result.records.push_back(std::move(rec));
    }
    finalize(result, system, st, params);
    return result;
}

RunResult train(const ResidualSystem& system, const TrainConfig& config,
                const Eigen::VectorXd& initial) {
    switch (config.strategy) {
        case Strategy::FixedCutoff: return fixed_cutoff_run(system, config, initial);
        case Strategy::Adaptive: return amstramgram_run(system, config, initial);
        case Strategy::PrincipledAdaptive: return principled_adaptive_run(system, config, initial);
    }
    throw std::logic_error("train: unknown strategy");
}

}  // namespace anagram
