#include "anagram/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <random>
#include <thread>

#include "anagram/svg.hpp"
#include "anagram/threading.hpp"

namespace anagram {

namespace fs = std::filesystem;

namespace {

std::string resolve_output_dir(const ExperimentConfig& config) {
    if (const char* env = std::getenv("ANAGRAM_OUTPUT_DIR"); env && *env) return env;
    return config.output_dir;
}

const char* strategy_name(Strategy s) {
    switch (s) {
        case Strategy::FixedCutoff: return "fixed";
        case Strategy::Adaptive: return "adaptive";
        case Strategy::PrincipledAdaptive: return "principled";
    }
    return "?";
}

}  // namespace

std::vector<JobResult> run_experiment(const ExperimentConfig& config) {
    const PdeProblem problem = build_problem(config.problem, config.grid, config.data_dir);
    MlpSpec model = config.model;
    model.input_dim = problem.input_dim;

    const std::string out_root = resolve_output_dir(config);
    const int n_jobs = static_cast<int>(config.seeds.size());
    std::vector<JobResult> results(n_jobs);
    std::mutex log_mutex;

    parallel_for(0, n_jobs, [&](int j) {
        JobResult& res = results[j];
        res.seed = config.seeds[j];
        const fs::path run_dir =
            fs::path(out_root) / config.problem / ("seed" + std::to_string(res.seed));
        res.run_dir = run_dir.string();
        try {
            fs::create_directories(run_dir);
            MlpSpec spec = model;
            spec.seed = res.seed;
            PdeResidualSystem system(problem, spec);
            const Eigen::VectorXd initial = init_params(spec);
            const RunResult run = train(system, config.train, initial);

            write_records_csv((run_dir / "records.csv").string(), run.records);
            if (config.train.record_curves)
                write_rce_curves_csv((run_dir / "rce_curves.csv").string(), run.records);

            res.summary.problem = config.problem;
            res.summary.seed = res.seed;
            res.summary.strategy = strategy_name(config.train.strategy);
            res.summary.final_mse = run.final_train_loss;
            res.summary.final_rel_l2 = run.final_rel_l2;
            res.summary.iterations = run.iterations;
            res.summary.termination = to_string(run.termination);
            write_summary_json((run_dir / "summary.json").string(), res.summary);

            if (config.plots) {
                const int last = run.records.empty() ? 1 : run.records.back().t;
                plot_run((run_dir / "records.csv").string(), last, config.train.epsilon,
                         (run_dir / "plots").string());
            }
            res.ok = true;
            if (config.verbosity > 0) {
                std::lock_guard<std::mutex> lock(log_mutex);
                std::printf("[%s seed %llu] %s after %d iterations, mse %.3e%s\n",
                            config.problem.c_str(), static_cast<unsigned long long>(res.seed),
                            res.summary.termination.c_str(), res.summary.iterations,
                            res.summary.final_mse,
                            res.summary.final_rel_l2
                                ? (", l2 " + std::to_string(*res.summary.final_rel_l2)).c_str()
                                : "");
            }
        } catch (const std::exception& e) {
            res.ok = false;
            res.error = e.what();
            std::ofstream err(run_dir / "error.txt");
            err << e.what() << "\n";
            std::lock_guard<std::mutex> lock(log_mutex);
            std::fprintf(stderr, "[%s seed %llu] failed: %s\n", config.problem.c_str(),
                         static_cast<unsigned long long>(res.seed), e.what());
        }
    });
    return results;
}

std::vector<RunSummary> collect_summaries(const std::vector<std::string>& dirs,
                                          std::vector<std::string>* missing) {
    std::vector<RunSummary> out;
    for (const auto& dir : dirs) {
        bool found = false;
        if (fs::exists(dir)) {
            for (const auto& entry : fs::recursive_directory_iterator(dir)) {
                if (entry.is_regular_file() && entry.path().filename() == "summary.json") {
                    out.push_back(read_summary_json(entry.path().string()));
                    found = true;
                }
            }
        }
        if (!found && missing) missing->push_back(dir);
    }
    std::sort(out.begin(), out.end(), [](const RunSummary& a, const RunSummary& b) {
        return std::tie(a.problem, a.seed) < std::tie(b.problem, b.seed);
    });
    return out;
}

std::vector<std::string> plot_run(const std::string& records_csv, int iteration, double epsilon,
                                  const std::string& out_dir) {
    const LoadedRecords loaded = read_records_csv(records_csv);
    if (loaded.records.empty()) throw std::runtime_error("plot: no records in " + records_csv);
    fs::create_directories(out_dir);
    std::vector<std::string> written;

    PlotSeries loss{"train loss", {}, {}, "#1f77b4"};
    PlotSeries l2{"rel. L2", {}, {}, "#d62728"};
    for (const auto& r : loaded.records) {
        loss.x.push_back(r.t);
        loss.y.push_back(r.train_loss);
        if (r.rel_l2) {
            l2.x.push_back(r.t);
            l2.y.push_back(*r.rel_l2);
        }
    }
    std::vector<PlotSeries> series{loss};
    if (!l2.x.empty()) series.push_back(l2);
    {
        const std::string path = (fs::path(out_dir) / "loss_l2.svg").string();
        std::ofstream out(path);
        out << line_chart_svg("training history", "iteration", "value", series, true);
        written.push_back(path);
    }

    // Snapshot of the RCE curve at the requested iteration (nearest match).
    const IterationRecord* pick = &loaded.records.front();
    for (const auto& r : loaded.records)
        if (std::abs(r.t - iteration) < std::abs(pick->t - iteration)) pick = &r;
    if (pick->t != iteration)
        std::fprintf(stderr, "plot: iteration %d not recorded, using nearest %d\n", iteration,
                     pick->t);
    if (pick->rce.size() > 0) {
        PlotSeries rce{"RCE", {}, {}, "#2ca02c"};
        for (int n = 0; n < pick->rce.size(); ++n) {
            rce.x.push_back(n);
            rce.y.push_back(pick->rce[n]);
        }
        PlotSeries sigma{"singular values", {}, {}, "#9467bd"};
        for (int n = 0; n < pick->singular_values.size(); ++n) {
            sigma.x.push_back(n + 1);
            sigma.y.push_back(pick->singular_values[n]);
        }
        const std::string path =
            (fs::path(out_dir) / ("rce_iter" + std::to_string(pick->t) + ".svg")).string();
        std::ofstream out(path);
        out << line_chart_svg("reconstruction error, iteration " + std::to_string(pick->t),
                              "components N", "magnitude", {rce, sigma}, true, epsilon,
                              "target precision");
        written.push_back(path);
    }
    return written;
}

// ---------------------------------------------------------------------------
// Self-test
// ---------------------------------------------------------------------------

namespace {

struct Check {
    const char* name;
    bool ok;
};

Eigen::MatrixXd random_matrix(std::mt19937_64& eng, int rows, int cols) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Eigen::MatrixXd m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = dist(eng);
    return m;
}

bool svd_invariants() {
    std::mt19937_64 eng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const int s = 2 + static_cast<int>(eng() % 9);
        const int p = 2 + static_cast<int>(eng() % 9);
        const Eigen::MatrixXd a = random_matrix(eng, s, p);
        const SvdFactors f = thin_svd(a);
        const int r = f.r;
        if ((f.sample_side.transpose() * f.sample_side - Eigen::MatrixXd::Identity(r, r))
                .cwiseAbs()
                .maxCoeff() > 1e-10)
            return false;
        if ((f.parameter_side.transpose() * f.parameter_side - Eigen::MatrixXd::Identity(r, r))
                .cwiseAbs()
                .maxCoeff() > 1e-10)
            return false;
        const Eigen::MatrixXd rec =
            f.sample_side * f.singular_values.asDiagonal() * f.parameter_side.transpose();
        if ((rec - a).norm() > 1e-10 * a.norm()) return false;
        for (int i = 1; i < r; ++i)
            if (f.singular_values[i] > f.singular_values[i - 1]) return false;
    }
    return true;
}

bool rce_invariants() {
    std::mt19937_64 eng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const int s = 3 + static_cast<int>(eng() % 8);
        const int p = 2 + static_cast<int>(eng() % 8);
        const Eigen::MatrixXd a = random_matrix(eng, s, p);
        const Eigen::VectorXd g = random_matrix(eng, s, 1);
        const SvdFactors f = thin_svd(a);
        const RceCurve curve = reconstruction_errors(f, g);
        if (std::abs(curve.values[0] * curve.values[0] - g.squaredNorm() / s) >
            1e-12 * g.squaredNorm())
            return false;
        for (int n = 1; n <= curve.rank(); ++n)
            if (curve.values[n] > curve.values[n - 1] + 1e-12) return false;
        for (int m = 0; m <= curve.rank(); ++m)
            for (int n = m; n <= curve.rank(); ++n) {
                const Eigen::VectorXd coeffs = f.sample_side.transpose() * g;
                double block = 0.0;
                for (int q = m; q < n; ++q) block += coeffs[q] * coeffs[q];
                const double lhs = curve.values[m] * curve.values[m] -
                                   curve.values[n] * curve.values[n];
                if (std::abs(lhs - block / s) > 1e-10) return false;
            }
    }
    return true;
}

bool policy_invariants() {
    for (int r1 = 0; r1 <= 3; ++r1)
        for (int r2 = 0; r2 <= 3; ++r2)
            for (int rmax = 0; rmax <= 3; ++rmax)
                for (int prev = -1; prev <= 3; ++prev)
                    for (int lifted = 0; lifted <= 1; ++lifted) {
                        CutoffState st;
                        st.r_max = rmax;
                        st.liftoff = lifted != 0;
                        const CutoffState next = cutoff_policy_update(st, r1, r2, prev);
                        if (st.liftoff && !next.liftoff) return false;
                        if (st.liftoff && next.r_max < st.r_max) return false;
                        if (next.r_min != std::min(r1, r2)) return false;
                    }
    return true;
}

bool linear_one_step() {
    std::mt19937_64 eng(13);
    const Eigen::MatrixXd a = random_matrix(eng, 8, 5);
    const Eigen::VectorXd y = random_matrix(eng, 8, 1);
    LinearResidualSystem system(a, y);
    const Eigen::VectorXd theta0 = random_matrix(eng, 5, 1);
    const ResidualBundle bundle = system.bundle(theta0);
    const SvdFactors factors = thin_svd(bundle.feature);
    const StepOutcome out = anagram_step(
        bundle, factors, factors.r, theta0,
        [&](const Eigen::VectorXd& q) { return system.loss(q); }, LineSearchConfig{});
    if (std::abs(out.eta - 1.0) > 1e-4) return false;
    const Eigen::VectorXd lsq = a.completeOrthogonalDecomposition().solve(y);
    return (a * out.params - y - (a * lsq - y)).norm() <= 1e-8 * (1.0 + y.norm());
}

bool line_search_quadratic() {
    const auto res =
        line_search([](double eta) { return (1.0 - eta) * (1.0 - eta); }, LineSearchConfig{});
    return std::abs(res.eta - 1.0) <= 1e-6;
}

}  // namespace

int selftest(bool verbose) {
    const Check checks[] = {
        {"svd factor invariants", svd_invariants()},
        {"rce identities", rce_invariants()},
        {"cutoff policy latch/monotonicity", policy_invariants()},
        {"linear one-step optimality", linear_one_step()},
        {"line search on quadratic", line_search_quadratic()},
    };
    int failures = 0;
    for (const auto& c : checks) {
        if (!c.ok) ++failures;
        if (verbose) std::printf("[%s] %s\n", c.ok ? "ok" : "FAIL", c.name);
    }
    return failures;
}

}  // namespace anagram
