#include <doctest.h>

#include <random>

#include "anagram/mlp.hpp"
#include "oracles.hpp"

using namespace anagram;

TEST_CASE("param_count: layer-major weight+bias layout") {
    CHECK(param_count({2, {8}, Activation::Tanh, 0}) == 33);
    CHECK(param_count({1, {4, 4}, Activation::Tanh, 0}) == 33);
    CHECK_THROWS_AS(param_count({2, {}, Activation::Tanh, 0}), std::invalid_argument);
    CHECK_THROWS_AS(param_count({2, {0}, Activation::Tanh, 0}), std::invalid_argument);
}

TEST_CASE("init_params: deterministic, bounded, zero biases") {
    const MlpSpec spec{2, {8}, Activation::Tanh, 1234};
    const Eigen::VectorXd p1 = init_params(spec);
    const Eigen::VectorXd p2 = init_params(spec);
    CHECK((p1 - p2).cwiseAbs().maxCoeff() == 0.0);

    MlpSpec other = spec;
    other.seed = 1235;
    CHECK((init_params(other) - p1).cwiseAbs().maxCoeff() > 0.0);

    // layout: W1 (16), b1 (8), W2 (8), b2 (1)
    for (int i = 16; i < 24; ++i) CHECK(p1[i] == 0.0);
    CHECK(p1[32] == 0.0);
    const double bound1 = std::sqrt(6.0 / (2 + 8));
    for (int i = 0; i < 16; ++i) CHECK(std::abs(p1[i]) <= bound1);
}

TEST_CASE("forward_jet: all-zero weights give the constant zero function") {
    const MlpSpec spec{2, {5}, Activation::Tanh, 0};
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(param_count(spec));
    const Jet2 jet = forward_jet(spec, zero, Eigen::Vector2d(0.3, -0.7));
    CHECK(jet.value == 0.0);
    for (int i = 0; i < 2; ++i) CHECK(jet.d(i) == 0.0);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) CHECK(jet.d2(i, j) == 0.0);
}

TEST_CASE("forward_jet: single sine neuron has the closed-form jet") {
    // u(x) = sin(w x + b) via widths {1}, output weight 1, output bias 0
    const MlpSpec spec{1, {1}, Activation::Sine, 0};
    REQUIRE(param_count(spec) == 4);
    const double w = 1.3, b = 0.4;
    Eigen::VectorXd params(4);
    params << w, b, 1.0, 0.0;
    for (double x : {-0.8, 0.0, 0.6}) {
        const Jet2 jet = forward_jet(spec, params, Eigen::VectorXd::Constant(1, x));
        const double a = w * x + b;
        CHECK(jet.value == doctest::Approx(std::sin(a)).epsilon(1e-14));
        CHECK(jet.d(0) == doctest::Approx(w * std::cos(a)).epsilon(1e-14));
        CHECK(jet.d2(0, 0) == doctest::Approx(-w * w * std::sin(a)).epsilon(1e-13));
    }
}

TEST_CASE("forward_jet: matches central finite differences at random points") {
    std::mt19937_64 eng(99);
    for (const auto& spec : {MlpSpec{2, {7}, Activation::Tanh, 5},
                             MlpSpec{3, {6, 5}, Activation::Sine, 6},
                             MlpSpec{1, {4, 4, 3}, Activation::Tanh, 7}}) {
        const Eigen::VectorXd params = init_params(spec);
        const auto field = [&](const Eigen::VectorXd& x) {
            return forward_values(spec, params, x.transpose())[0];
        };
        for (int trial = 0; trial < 10; ++trial) {
            const Eigen::VectorXd x = oracles::random_vector(eng, spec.input_dim);
            const Jet2 jet = forward_jet(spec, params, x);
            const Jet2 fd = oracles::fd_jet(field, x, 1e-4);
            CHECK(std::abs(jet.value - fd.value) <= 1e-10);
            for (int i = 0; i < spec.input_dim; ++i)
                CHECK(std::abs(jet.d(i) - fd.d(i)) <= 1e-5 * (1.0 + std::abs(fd.d(i))));
            for (int i = 0; i < spec.input_dim; ++i)
                for (int j = 0; j < spec.input_dim; ++j)
                    CHECK(std::abs(jet.d2(i, j) - fd.d2(i, j)) <=
                          1e-4 * (1.0 + std::abs(fd.d2(i, j))));
        }
    }
}

TEST_CASE("jet Hessian is symmetric") {
    std::mt19937_64 eng(123);
    const MlpSpec spec{4, {9}, Activation::Tanh, 11};
    const Eigen::VectorXd params = init_params(spec);
    for (int trial = 0; trial < 10; ++trial) {
        const Eigen::VectorXd x = oracles::random_vector(eng, 4);
        const Jet2 jet = forward_jet(spec, params, x);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                CHECK(std::abs(jet.d2(i, j) - jet.d2(j, i)) <= 1e-12);
    }
}

TEST_CASE("forward_values agrees with the jet pass") {
    std::mt19937_64 eng(321);
    const MlpSpec spec{2, {8, 6}, Activation::Tanh, 2};
    const Eigen::VectorXd params = init_params(spec);
    const Eigen::MatrixXd pts = oracles::random_matrix(eng, 17, 2);
    const Eigen::VectorXd fast = forward_values(spec, params, pts);
    const JetBatch jets = forward_jet_batch(spec, params, pts);
    CHECK((fast - jets.value).cwiseAbs().maxCoeff() <= 1e-13);
}

TEST_CASE("jet accessors reject out-of-range axes") {
    const MlpSpec spec{2, {3}, Activation::Tanh, 0};
    const Jet2 jet = forward_jet(spec, init_params(spec), Eigen::Vector2d(0.1, 0.2));
    CHECK_THROWS_AS(jet.d(2), std::out_of_range);
    CHECK_THROWS_AS(jet.d2(0, 5), std::out_of_range);
}
