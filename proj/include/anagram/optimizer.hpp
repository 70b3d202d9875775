#pragma once

// The natural-gradient step with line search, the fixed-cutoff baseline loop,
// and the adaptive dual-cutoff loop with its ignition / ascent /
// stage-separation phases.

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "anagram/diagnostics.hpp"
#include "anagram/linalg.hpp"
#include "anagram/problems.hpp"
#include "anagram/residual.hpp"

namespace anagram {

// ---------------------------------------------------------------------------
// Residual systems: anything that exposes a stacked residual + Jacobian.
// ---------------------------------------------------------------------------

class ResidualSystem {
  public:
    virtual ~ResidualSystem() = default;
    virtual ResidualBundle bundle(const Eigen::VectorXd& params) const = 0;
    virtual double loss(const Eigen::VectorXd& params) const = 0;
    virtual int sample_count() const = 0;
    virtual std::optional<double> relative_l2(const Eigen::VectorXd&) const {
        return std::nullopt;
    }
};

/// PDE collocation system for one (problem, model) pair.
class PdeResidualSystem : public ResidualSystem {
  public:
    PdeResidualSystem(PdeProblem problem, MlpSpec spec);
    ResidualBundle bundle(const Eigen::VectorXd& params) const override;
    double loss(const Eigen::VectorXd& params) const override;
    int sample_count() const override;
    std::optional<double> relative_l2(const Eigen::VectorXd& params) const override;
    const PdeProblem& problem() const { return problem_; }
    const MlpSpec& spec() const { return spec_; }

  private:
    PdeProblem problem_;
    MlpSpec spec_;
};

/// residual(θ) = Aθ − y. Linear-in-parameters model used by self-tests and
/// synthetic convergence checks.
class LinearResidualSystem : public ResidualSystem {
  public:
    LinearResidualSystem(Eigen::MatrixXd a, Eigen::VectorXd y);
    ResidualBundle bundle(const Eigen::VectorXd& params) const override;
    double loss(const Eigen::VectorXd& params) const override;
    int sample_count() const override;

  private:
    Eigen::MatrixXd a_;
    Eigen::VectorXd y_;
};

// ---------------------------------------------------------------------------
// Line search
// ---------------------------------------------------------------------------

struct LineSearchConfig {
    double eta_max = 2.0;
    int grid_depth = 20;     ///< coarse probes eta_max·2^{-k}, k = 0…grid_depth
    int golden_iters = 40;   ///< golden-section refinement steps
};

struct LineSearchResult {
    double eta = 0.0;
    double loss = 0.0;  ///< loss at eta
    bool stalled = false;  ///< every probe was non-finite
};

/// Minimizes loss_fn over [0, eta_max]: coarse geometric grid, then
/// golden-section refinement around the best bracket. Never returns a step
/// that increases the loss; eta = 0 is the fallback.
LineSearchResult line_search(const std::function<double(double)>& loss_fn,
                             const LineSearchConfig& config);

// ---------------------------------------------------------------------------
// One update step
// ---------------------------------------------------------------------------

enum class StepMarker { Ok, ZeroDirection, Stall };

struct StepOutcome {
    Eigen::VectorXd params;
    double eta = 0.0;
    double loss_before = 0.0;
    double loss_after = 0.0;
    StepMarker marker = StepMarker::Ok;
};

/// d = pseudo-inverse(feature, rank cutoff) · residual; params' = params − η·d
/// with η from line search over loss_at. Zero direction leaves the parameters
/// untouched.
StepOutcome anagram_step(const ResidualBundle& bundle, const SvdFactors& factors, int r_cutoff,
                         const Eigen::VectorXd& params,
                         const std::function<double(const Eigen::VectorXd&)>& loss_at,
                         const LineSearchConfig& config);

// ---------------------------------------------------------------------------
// Adaptive cutoff bookkeeping
// ---------------------------------------------------------------------------

enum class Phase { Ignition, Ascent, StageSeparation };
const char* to_string(Phase phase);

struct CutoffState {
    int r_min = 0;
    int r_max = 0;
    bool liftoff = false;
    double epsilon = 0.0;
    Phase phase = Phase::Ignition;
};

/// One policy update from the freshly computed intersection rank r1 and
/// precision rank r2. prev_r_min is the previous iteration's r_min (or -1 on
/// the first iteration); a stagnant r_min before liftoff bumps r_max by one.
/// The liftoff flag latches; r_max never decreases after it.
CutoffState cutoff_policy_update(const CutoffState& state, int r1, int r2, int prev_r_min);

// ---------------------------------------------------------------------------
// Training loops
// ---------------------------------------------------------------------------

enum class Strategy { FixedCutoff, Adaptive, PrincipledAdaptive };

struct TrainConfig {
    Strategy strategy = Strategy::Adaptive;
    double epsilon = 1e-10;       ///< target precision
    int t_max = 500;
    double fixed_cutoff_alpha = 1e-3;  ///< FixedCutoff threshold on the spectrum
    LineSearchConfig line_search;
    bool elbow_log_scale = true;  ///< elbow of log-spectrum (raw = literal mode)
    double flatten_tol = 0.01;    ///< relative tolerance defining N_flat
    bool record_curves = true;
};

struct IterationRecord {
    int t = 0;
    double train_loss = 0.0;  ///< squared residual norm = RCE_0² at iteration start
    std::optional<double> rel_l2;
    int r_min = 0;
    int r_max = 0;
    int r_int = 0;
    int r_eps = 0;
    int elbow = 0;
    int n_flat = 0;
    double eta = 0.0;        ///< step size of the last step this iteration
    double eta_first = 0.0;  ///< r_max step size (adaptive strategy only)
    std::string phase;
    bool liftoff = false;
    std::vector<StepMarker> markers;
    Eigen::VectorXd rce;              ///< RCE curve at iteration start
    Eigen::VectorXd singular_values;  ///< spectrum at iteration start
};

enum class Termination { MaxIterations, BoosterReturn, LossThreshold, PrecisionRankZero };
const char* to_string(Termination t);

struct RunResult {
    std::vector<IterationRecord> records;
    Eigen::VectorXd final_params;
    Termination termination = Termination::MaxIterations;
    double final_train_loss = 0.0;  ///< RCE_0² at the final parameters
    std::optional<double> final_rel_l2;
    int iterations = 0;
};

/// Baseline: every iteration retains the components above a fixed threshold.
/// Stops early once train_loss <= epsilon².
RunResult fixed_cutoff_run(const ResidualSystem& system, const TrainConfig& config,
                           const Eigen::VectorXd& initial);

/// Adaptive dual-cutoff strategy: two steps per iteration (r_max then r_min,
/// recomputing the factorization in between), terminating on booster return
/// (r_min = 0) or the iteration cap.
RunResult amstramgram_run(const ResidualSystem& system, const TrainConfig& config,
                          const Eigen::VectorXd& initial);

/// Single-cutoff adaptive rule: track the intersection rank until its RCE
/// falls below epsilon, then the precision rank; stop when the precision rank
/// hits zero.
RunResult principled_adaptive_run(const ResidualSystem& system, const TrainConfig& config,
                                  const Eigen::VectorXd& initial);

/// Dispatch on config.strategy.
RunResult train(const ResidualSystem& system, const TrainConfig& config,
                const Eigen::VectorXd& initial);

}  // namespace anagram
