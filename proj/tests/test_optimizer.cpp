#include <doctest.h>

#include <cmath>
#include <random>

#include "anagram/optimizer.hpp"
#include "oracles.hpp"

using namespace anagram;

TEST_CASE("line_search: exact quadratic step") {
    const auto res = line_search([](double e) { return (1.0 - e) * (1.0 - e); },
                                 LineSearchConfig{});
    CHECK(std::abs(res.eta - 1.0) <= 1e-6);
    CHECK(res.loss <= 1e-12);
    CHECK_FALSE(res.stalled);
}

TEST_CASE("line_search: monotone increasing loss never moves") {
    const auto res = line_search([](double e) { return 1.0 + e; }, LineSearchConfig{});
    CHECK(res.eta == 0.0);
    CHECK(res.loss == doctest::Approx(1.0));
}

TEST_CASE("line_search: interior minimum against a dense-grid oracle") {
    const auto fn = [](double e) { return (e - 0.3) * (e - 0.3) + 1.0; };
    const auto res = line_search(fn, LineSearchConfig{});
    const double oracle = oracles::grid_minimize(fn, 0.0, 2.0, 2'000'000);
    CHECK(std::abs(res.eta - oracle) <= 1e-4);
    CHECK(std::abs(res.eta - 0.3) <= 1e-4);
}

TEST_CASE("line_search: all probes non-finite stalls at zero") {
    const auto res = line_search(
        [](double e) { return e == 0.0 ? 1.0 : std::nan(""); }, LineSearchConfig{});
    CHECK(res.eta == 0.0);
    CHECK(res.stalled);
}

TEST_CASE("anagram_step: full-rank linear system reaches the least-squares optimum") {
    std::mt19937_64 eng(44);
    const Eigen::MatrixXd a = oracles::random_matrix(eng, 8, 5);
    const Eigen::VectorXd y = oracles::random_vector(eng, 8);
    LinearResidualSystem system(a, y);
    const Eigen::VectorXd theta0 = oracles::random_vector(eng, 5);

    const ResidualBundle bundle = system.bundle(theta0);
    const SvdFactors factors = thin_svd(bundle.feature);
    const StepOutcome out = anagram_step(
        bundle, factors, factors.r, theta0,
        [&](const Eigen::VectorXd& q) { return system.loss(q); }, LineSearchConfig{});

    CHECK(std::abs(out.eta - 1.0) <= 1e-4);
    CHECK(out.loss_after <= out.loss_before);
    const Eigen::VectorXd best = oracles::normal_equations(a, y);
    const Eigen::VectorXd expected_residual = a * best - y;
    CHECK((a * out.params - y - expected_residual).norm() <= 1e-8 * (1.0 + y.norm()));
}

TEST_CASE("anagram_step: zero cutoff leaves the parameters unchanged") {
    std::mt19937_64 eng(45);
    const Eigen::MatrixXd a = oracles::random_matrix(eng, 4, 3);
    const Eigen::VectorXd y = oracles::random_vector(eng, 4);
    LinearResidualSystem system(a, y);
    const Eigen::VectorXd theta0 = oracles::random_vector(eng, 3);
    const ResidualBundle bundle = system.bundle(theta0);
    const StepOutcome out = anagram_step(
        bundle, thin_svd(bundle.feature), 0, theta0,
        [&](const Eigen::VectorXd& q) { return system.loss(q); }, LineSearchConfig{});
    CHECK(out.marker == StepMarker::ZeroDirection);
    CHECK((out.params - theta0).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("anagram_step: a single retained component moves one spectral direction") {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2, 2);
    a(0, 0) = 2.0;
    a(1, 1) = 1.0;
    const Eigen::VectorXd y = -Eigen::Vector2d(2.0, 2.0);  // residual at 0 is (2,2)
    LinearResidualSystem system(a, y);
    const Eigen::VectorXd theta0 = Eigen::VectorXd::Zero(2);
    const ResidualBundle bundle = system.bundle(theta0);
    const StepOutcome out = anagram_step(
        bundle, thin_svd(bundle.feature), 1, theta0,
        [&](const Eigen::VectorXd& q) { return system.loss(q); }, LineSearchConfig{});
    // direction (1, 0): only the leading parameter-side vector is retained
    CHECK(out.params[1] == 0.0);
    CHECK(out.params[0] == doctest::Approx(-out.eta).epsilon(1e-12));
}

TEST_CASE("cutoff_policy_update: exhaustive latch, monotonicity, stagnation") {
    for (int r1 = 0; r1 <= 4; ++r1)
        for (int r2 = 0; r2 <= 4; ++r2)
            for (int rmax = 0; rmax <= 4; ++rmax)
                for (int prev = -1; prev <= 4; ++prev)
                    for (int lifted = 0; lifted <= 1; ++lifted) {
                        CutoffState st;
                        st.r_max = rmax;
                        st.liftoff = lifted != 0;
                        st.epsilon = 1e-8;
                        const CutoffState next = cutoff_policy_update(st, r1, r2, prev);

                        CHECK(next.r_min == std::min(r1, r2));
                        if (st.liftoff) {
                            CHECK(next.liftoff);  // latch
                            CHECK(next.r_max == std::max(r1, rmax));  // monotone, no bump
                            CHECK(next.r_max >= st.r_max);
                            CHECK(next.phase != Phase::Ignition);
                        } else if (std::min(r1, r2) >= std::max(r1, rmax)) {
                            CHECK(next.liftoff);
                            CHECK(next.r_max == std::max(r1, rmax));
                        } else if (prev >= 0 && std::min(r1, r2) == prev) {
                            CHECK_FALSE(next.liftoff);
                            CHECK(next.r_max == std::max(r1, rmax) + 1);  // stagnation bump
                        } else {
                            CHECK_FALSE(next.liftoff);
                            CHECK(next.r_max == std::max(r1, rmax));
                        }
                        if (next.liftoff)
                            CHECK(next.phase ==
                                  (r2 > r1 ? Phase::Ascent : Phase::StageSeparation));
                        else
                            CHECK(next.phase == Phase::Ignition);
                    }
}

TEST_CASE("cutoff_policy_update: quoted transition examples") {
    CutoffState st;
    st.r_max = 5;
    st.liftoff = false;
    // stagnant r_min bumps r_max
    CutoffState bumped = cutoff_policy_update(st, 3, 4, 3);
    CHECK(bumped.r_max == 6);
    CHECK_FALSE(bumped.liftoff);
    // r_min reaching r_max triggers liftoff
    CutoffState lift = cutoff_policy_update(st, 5, 7, 3);
    CHECK(lift.liftoff);
    // after liftoff a collapsing intersection rank cannot drag r_max down
    CutoffState post;
    post.r_max = 9;
    post.liftoff = true;
    CutoffState kept = cutoff_policy_update(post, 2, 11, 2);
    CHECK(kept.r_max == 9);
    CHECK(kept.liftoff);
}

TEST_CASE("fixed_cutoff_run: degenerate caps and one-step convergence") {
    std::mt19937_64 eng(46);
    const Eigen::MatrixXd a = oracles::random_matrix(eng, 6, 4);
    const Eigen::VectorXd y = oracles::random_vector(eng, 6);
    LinearResidualSystem system(a, y);
    const Eigen::VectorXd theta0 = oracles::random_vector(eng, 4);

    TrainConfig cfg;
    cfg.strategy = Strategy::FixedCutoff;
    cfg.t_max = 0;
    const RunResult empty = fixed_cutoff_run(system, cfg, theta0);
    CHECK(empty.records.empty());
    CHECK((empty.final_params - theta0).cwiseAbs().maxCoeff() == 0.0);

    // threshold below the smallest singular value: full-rank step, immediate exit
    cfg.t_max = 5;
    cfg.fixed_cutoff_alpha = 1e-14;
    cfg.epsilon = 1e-6;
    // consistent target: make y reachable so the loss drops to ~0
    const Eigen::VectorXd reachable = a * oracles::random_vector(eng, 4);
    LinearResidualSystem solvable(a, reachable);
    const RunResult run = fixed_cutoff_run(solvable, cfg, theta0);
    CHECK(run.termination == Termination::LossThreshold);
    CHECK(run.records.size() == 2);  // one stepping record + the terminal record
    CHECK(run.final_train_loss <= cfg.epsilon * cfg.epsilon);
    for (std::size_t i = 1; i < run.records.size(); ++i)
        CHECK(run.records[i].train_loss <= run.records[i - 1].train_loss + 1e-15);
}

TEST_CASE("amstramgram_run: pre-converged system returns the booster at t = 1") {
    std::mt19937_64 eng(47);
    const Eigen::MatrixXd a = oracles::random_matrix(eng, 6, 4);
    LinearResidualSystem system(a, Eigen::VectorXd::Zero(6));
    TrainConfig cfg;
    cfg.epsilon = 1e-10;
    cfg.t_max = 50;
    const RunResult run = amstramgram_run(system, cfg, Eigen::VectorXd::Zero(4));
    CHECK(run.termination == Termination::BoosterReturn);
    CHECK(run.records.size() == 1);
    CHECK(run.records[0].r_min == 0);
}

TEST_CASE("amstramgram_run: iteration cap yields exactly t_max records") {
    std::mt19937_64 eng(48);
    const Eigen::MatrixXd a = oracles::random_matrix(eng, 7, 4);
    const Eigen::VectorXd y = oracles::random_vector(eng, 7);
    LinearResidualSystem system(a, y);
    TrainConfig cfg;
    cfg.epsilon = 1e-300;  // unreachable precision: nothing can terminate early
    cfg.t_max = 3;
    const RunResult run = amstramgram_run(system, cfg, oracles::random_vector(eng, 4));
    CHECK(run.termination == Termination::MaxIterations);
    CHECK(run.records.size() == 3);
}

TEST_CASE("amstramgram_run: descent, liftoff latch and monotone r_max on a PDE") {
    const PdeProblem problem = build_problem("heat", {{8}, 8});
    const MlpSpec spec{2, {8}, Activation::Tanh, 0};
    PdeResidualSystem system(problem, spec);
    TrainConfig cfg;
    cfg.epsilon = 1e-6;
    cfg.t_max = 25;
    const RunResult run = amstramgram_run(system, cfg, init_params(spec));
    REQUIRE(run.records.size() >= 2);
    bool lifted = false;
    int prev_rmax = 0;
    for (std::size_t i = 0; i < run.records.size(); ++i) {
        const auto& rec = run.records[i];
        if (i > 0) CHECK(rec.train_loss <= run.records[i - 1].train_loss * (1.0 + 1e-12));
        if (lifted) {
            CHECK(rec.liftoff);  // latch
            CHECK(rec.r_max >= prev_rmax);
        }
        lifted = lifted || rec.liftoff;
        prev_rmax = rec.r_max;
        // every recorded curve is non-increasing
        for (int n = 1; n < rec.rce.size(); ++n)
            CHECK(rec.rce[n] <= rec.rce[n - 1] + 1e-12);
    }
}

TEST_CASE("amstramgram_run: booster return implies the precision target") {
    const PdeProblem problem = build_problem("heat", {{10}, 10});
    const MlpSpec spec{2, {12}, Activation::Tanh, 1};
    PdeResidualSystem system(problem, spec);
    TrainConfig cfg;
    cfg.epsilon = 1e-7;
    cfg.t_max = 400;
    const RunResult run = amstramgram_run(system, cfg, init_params(spec));
    REQUIRE(run.termination == Termination::BoosterReturn);
    const auto& last = run.records.back();
    CHECK(last.r_min == 0);
    CHECK(last.r_eps == 0);  // booster-return soundness: precision rank hit zero
    CHECK(last.train_loss <= cfg.epsilon * cfg.epsilon);
    CHECK(run.final_train_loss <= cfg.epsilon * cfg.epsilon);
}

TEST_CASE("principled_adaptive_run: terminates when the precision rank drains") {
    std::mt19937_64 eng(49);
    const Eigen::MatrixXd a = oracles::random_matrix(eng, 6, 4);
    const Eigen::VectorXd y = a * oracles::random_vector(eng, 4);
    LinearResidualSystem system(a, y);
    TrainConfig cfg;
    cfg.strategy = Strategy::PrincipledAdaptive;
    cfg.epsilon = 1e-9;
    cfg.t_max = 30;
    const RunResult run = principled_adaptive_run(system, cfg, oracles::random_vector(eng, 4));
    CHECK(run.termination == Termination::PrecisionRankZero);
    CHECK(run.records.back().r_eps == 0);
}

TEST_CASE("flattening span certifies negligible prefix energy") {
    std::mt19937_64 eng(50);
    for (int trial = 0; trial < 15; ++trial) {
        const int s = 4 + static_cast<int>(eng() % 8);
        const int p = 3 + static_cast<int>(eng() % 8);
        const SvdFactors f = thin_svd(oracles::random_matrix(eng, s, p));
        const Eigen::VectorXd g = oracles::random_vector(eng, s);
        const RceCurve curve = reconstruction_errors(f, g);
        const double tol = 0.05;
        const int r_cutoff = curve.rank();
        const int n_flat = flattening_span(curve, r_cutoff, tol);
        const Eigen::VectorXd coeffs = f.sample_side.transpose() * g;
        double block = 0.0;
        for (int q = n_flat; q < r_cutoff; ++q) block += coeffs[q] * coeffs[q];
        CHECK(block / s <= (curve.values[n_flat] + curve.values[r_cutoff]) * tol *
                                   curve.values[0] +
                               1e-12);
    }
}
