#include <doctest.h>

#include <random>

#include "anagram/cole_hopf.hpp"
#include "anagram/problems.hpp"
#include "anagram/residual.hpp"
#include "oracles.hpp"

#ifdef ANAGRAM_HAVE_ETDRK4
#include "etdrk4.hpp"
#endif

using namespace anagram;

namespace {

GridSpec small_grid(const std::string& name) {
    if (name == "laplace5d") return {{2}, 2};
    return {{5}, 5};
}

PdeProblem build_with_data(const std::string& name, const GridSpec& grid) {
    return build_problem(name, grid, ANAGRAM_SOURCE_DATA_DIR);
}

}  // namespace

TEST_CASE("heat grid shape: interior count and boundary coverage") {
    const PdeProblem p = build_problem("heat", {{16}, 16});
    CHECK(p.interior_count() == 256);
    // interior strictly inside the box
    CHECK(p.interior_points.minCoeff() > 0.0);
    CHECK(p.interior_points.maxCoeff() < 1.0);
    // boundary rows live on x in {0,1} or t = 0; no terminal-time rows
    bool has_x0 = false, has_x1 = false, has_t0 = false;
    for (int r = 0; r < p.boundary_points.rows(); ++r) {
        const double x = p.boundary_points(r, 0), t = p.boundary_points(r, 1);
        const bool on_face = x == 0.0 || x == 1.0 || t == 0.0;
        CHECK(on_face);
        const bool terminal_rows_only_on_x_faces = t < 1.0 - 1e-12 || x == 0.0 || x == 1.0;
        CHECK(terminal_rows_only_on_x_faces);
        has_x0 = has_x0 || x == 0.0;
        has_x1 = has_x1 || x == 1.0;
        has_t0 = has_t0 || t == 0.0;
    }
    CHECK(has_x0);
    CHECK(has_x1);
    CHECK(has_t0);
}

TEST_CASE("grid determinism: identical specs give bit-identical points") {
    const PdeProblem a = build_problem("laplace2d", {{9}, 7});
    const PdeProblem b = build_problem("laplace2d", {{9}, 7});
    CHECK((a.interior_points - b.interior_points).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.boundary_points - b.boundary_points).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("unknown problem names are rejected listing the valid set") {
    CHECK_THROWS_WITH_AS(build_problem("wave", {{4}, 4}), doctest::Contains("laplace2d"),
                         std::invalid_argument);
}

TEST_CASE("exact solutions satisfy their own operators on all collocation points") {
    // finite-difference jets of the closed form, pushed through the operators
    for (const std::string name : {"heat", "laplace2d", "laplace5d", "nonlinear-poisson-k1"}) {
        const PdeProblem p = build_problem(name, small_grid(name));
        REQUIRE(p.exact.has_value());
        const auto u = *p.exact;
        double max_resid = 0.0;
        for (int r = 0; r < p.interior_points.rows(); ++r) {
            const Eigen::VectorXd x = p.interior_points.row(r).transpose();
            const Jet2 jet = oracles::fd_jet(u, x);
            max_resid = std::max(max_resid, std::abs(p.interior_op.real(jet) - p.source(x)));
        }
        for (int r = 0; r < p.boundary_points.rows(); ++r) {
            const Eigen::VectorXd x = p.boundary_points.row(r).transpose();
            const Jet2 jet = oracles::fd_jet(u, x);
            max_resid =
                std::max(max_resid, std::abs(p.boundary_op.real(jet) - p.boundary_data(x)));
        }
        INFO(name);
        CHECK(max_resid <= 1e-8);
    }
}

TEST_CASE("laplace2d boundary data equals the exact solution on the boundary") {
    const PdeProblem p = build_problem("laplace2d", {{6}, 6});
    for (int r = 0; r < p.boundary_points.rows(); ++r) {
        const Eigen::VectorXd x = p.boundary_points.row(r).transpose();
        CHECK(p.boundary_data(x) == doctest::Approx((*p.exact)(x)).epsilon(1e-14));
    }
}

TEST_CASE("burgers reference matches an adaptive-quadrature Cole-Hopf oracle") {
    const double nu = 0.01 / 3.14159265358979323846;
    const PdeProblem p = build_problem("burgers1d", {{4}, 4});
    (void)p;
    for (double x : {-0.5, 0.0, 0.5}) {
        const double mine = burgers_reference(x, 0.5, nu);
        const double oracle = oracles::burgers_simpson(x, 0.5, nu);
        CHECK(std::abs(mine - oracle) <= 1e-6);
    }
    CHECK(burgers_reference(0.25, 0.0, nu) ==
          doctest::Approx(-std::sin(3.14159265358979323846 * 0.25)).epsilon(1e-14));
}

TEST_CASE("relative_l2_error: stub equality, constant offset, zero predictor") {
    const MlpSpec spec{2, {6}, Activation::Tanh, 3};
    const Eigen::VectorXd params = init_params(spec);
    PdeProblem p = build_problem("heat", {{6}, 6});

    // u_theta identical to the reference: error 0
    PdeProblem same = p;
    same.reference_values = forward_values(spec, params, same.reference_points);
    CHECK(relative_l2_error(same, spec, params) == 0.0);

    // constant offset against a normalized reference: direct-summation oracle
    const double c = 0.3;
    PdeProblem offset = p;
    const Eigen::VectorXd u = forward_values(spec, params, offset.reference_points);
    offset.reference_values = u.array() - c;
    double num = 0.0, den = 0.0;
    for (int i = 0; i < u.size(); ++i) {
        num += c * c;
        den += offset.reference_values[i] * offset.reference_values[i];
    }
    CHECK(relative_l2_error(offset, spec, params) ==
          doctest::Approx(std::sqrt(num / den)).epsilon(1e-12));

    // zero network against the heat exact solution: error exactly 1
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(param_count(spec));
    CHECK(relative_l2_error(p, spec, zero) == doctest::Approx(1.0).epsilon(1e-12));

    // missing reference is rejected
    PdeProblem no_ref = build_problem("allen-cahn", {{5}, 5}, "/nonexistent");
    CHECK_FALSE(no_ref.has_reference());
    CHECK_THROWS_AS(relative_l2_error(no_ref, spec, params), std::invalid_argument);
}

TEST_CASE("residual scaling reproduces the per-block averaged loss") {
    const MlpSpec spec{2, {5}, Activation::Tanh, 8};
    const Eigen::VectorXd params = init_params(spec);
    for (const std::string name : {"heat", "burgers1d"}) {
        const PdeProblem p = build_problem(name, {{4}, 4});
        const ResidualBundle bundle = residual_bundle(p, spec, params);
        REQUIRE(bundle.sample_count() == p.sample_count());

        // independent term-by-term sum of the two block averages
        double interior = 0.0;
        for (int r = 0; r < p.interior_points.rows(); ++r) {
            const Eigen::VectorXd x = p.interior_points.row(r).transpose();
            const double res = p.interior_op.real(forward_jet(spec, params, x)) - p.source(x);
            interior += res * res;
        }
        double boundary = 0.0;
        for (int r = 0; r < p.boundary_points.rows(); ++r) {
            const Eigen::VectorXd x = p.boundary_points.row(r).transpose();
            const double res = p.boundary_op.real(forward_jet(spec, params, x)) -
                               p.boundary_data(x);
            boundary += res * res;
        }
        const double expected = interior / (2.0 * p.interior_count()) +
                                boundary / (2.0 * p.boundary_count());
        INFO(name);
        CHECK(bundle.loss() == doctest::Approx(expected).epsilon(1e-12));
        CHECK(residual_loss(p, spec, params) == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("feature matrix columns match central finite differences over parameters") {
    std::mt19937_64 eng(2024);
    for (const auto& name : problem_names()) {
        const PdeProblem p = build_with_data(name, small_grid(name));
        MlpSpec spec{p.input_dim, {6}, Activation::Tanh, 77};
        if (name == "burgers1d") spec.hidden_widths = {5, 4};  // exercise the deep tangent path
        Eigen::VectorXd params = init_params(spec);
        params += 0.1 * oracles::random_vector(eng, params.size());

        const ResidualBundle bundle = residual_bundle(p, spec, params);
        const int pcount = static_cast<int>(params.size());
        double worst = 0.0;
        for (int pick = 0; pick < 10; ++pick) {
            const int col = static_cast<int>(eng() % pcount);
            const double h = 1e-5 * std::max(1.0, std::abs(params[col]));
            Eigen::VectorXd lo = params, hi = params;
            hi[col] += h;
            lo[col] -= h;
            const Eigen::VectorXd fd =
                (residual_vector(p, spec, hi) - residual_vector(p, spec, lo)) / (2.0 * h);
            const double err = (bundle.feature.col(col) - fd).norm() / (1.0 + fd.norm());
            worst = std::max(worst, err);
        }
        INFO(name);
        CHECK(worst <= 1e-5);
    }
}

TEST_CASE("allen-cahn: periodic pairing appears in the residual blocks") {
    const PdeProblem p = build_with_data("allen-cahn", {{6}, 6});
    CHECK(p.pairs.size() == 12);  // value + derivative pairs at 6 time samples
    CHECK(p.boundary_count() == 6 + 12);

    const MlpSpec spec{2, {5}, Activation::Tanh, 4};
    const Eigen::VectorXd params = init_params(spec);
    const Eigen::VectorXd res = residual_vector(p, spec, params);
    // pair rows are the trailing block; recompute the first one by hand
    const double wb = 1.0 / std::sqrt(static_cast<double>(p.boundary_count()));
    const Jet2 ja = forward_jet(spec, params, p.pairs[0].point_a);
    const Jet2 jb = forward_jet(spec, params, p.pairs[0].point_b);
    const int row = p.interior_count() + static_cast<int>(p.boundary_points.rows());
    CHECK(res[row] == doctest::Approx((ja.value - jb.value) * wb).epsilon(1e-12));
}

TEST_CASE("allen-cahn reference table matches the stored fixture") {
    const PdeProblem p = build_with_data("allen-cahn", {{5}, 5});
    REQUIRE(p.has_reference());
    CHECK(p.reference_points.rows() == 128 * 21);
    // solution stays within the double-well range
    CHECK(p.reference_values.minCoeff() >= -1.01);
    CHECK(p.reference_values.maxCoeff() <= 1.01);

#ifdef ANAGRAM_HAVE_ETDRK4
    // regenerate at a different resolution; agreement validates the fixture
    std::vector<double> times = {0.5, 1.0};
    const auto sol = anagram::oracle::solve_allen_cahn(256, 5e-4, times);
    double worst = 0.0;
    for (int r = 0; r < p.reference_points.rows(); ++r) {
        const double x = p.reference_points(r, 0), t = p.reference_points(r, 1);
        for (std::size_t ti = 0; ti < times.size(); ++ti) {
            if (t != times[ti]) continue;
            for (int j = 0; j < sol.x.size(); ++j)
                if (sol.x[j] == x)
                    worst = std::max(
                        worst, std::abs(sol.u(static_cast<int>(ti), j) - p.reference_values[r]));
        }
    }
    CHECK(worst <= 1e-5);
#endif
}
