#include "anagram/problems.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "anagram/cole_hopf.hpp"

namespace anagram {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kBurgersNu = 0.01 / std::numbers::pi;

std::vector<int> broadcast_counts(const GridSpec& grid, int dim) {
    if (grid.interior_counts.empty())
        throw std::invalid_argument("GridSpec: interior_counts must not be empty");
    std::vector<int> counts = grid.interior_counts;
    if (static_cast<int>(counts.size()) == 1) counts.assign(dim, counts[0]);
    if (static_cast<int>(counts.size()) != dim)
        throw std::invalid_argument("GridSpec: expected 1 or " + std::to_string(dim) +
                                    " interior counts");
    for (int c : counts)
        if (c < 2) throw std::invalid_argument("GridSpec: counts must be >= 2 per axis");
    return counts;
}

Eigen::VectorXd linspace(double lo, double hi, int n) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * i / (n - 1);
    return v;
}

// Tensor grid over the face {axis = side} of the box, with `count` points
// (endpoints included) along every other axis.
Eigen::MatrixXd face_grid(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi, int axis,
                          double side, int count) {
    const int d = static_cast<int>(lo.size());
    int rows = 1;
    for (int a = 0; a < d; ++a)
        if (a != axis) rows *= count;
    Eigen::MatrixXd pts(rows, d);
    for (int r = 0; r < rows; ++r) {
        int rem = r;
        for (int a = 0; a < d; ++a) {
            if (a == axis) {
                pts(r, a) = side;
                continue;
            }
            const int idx = rem % count;
            rem /= count;
            pts(r, a) = lo[a] + (hi[a] - lo[a]) * idx / (count - 1);
        }
    }
    return pts;
}

Eigen::MatrixXd vstack(const std::vector<Eigen::MatrixXd>& blocks) {
    int rows = 0;
    for (const auto& b : blocks) rows += static_cast<int>(b.rows());
    if (blocks.empty()) return {};
    Eigen::MatrixXd out(rows, blocks.front().cols());
    int at = 0;
    for (const auto& b : blocks) {
        out.middleRows(at, b.rows()) = b;
        at += static_cast<int>(b.rows());
    }
    return out;
}

std::string resolve_data_dir(const std::string& data_dir) {
    if (!data_dir.empty()) return data_dir;
    if (const char* env = std::getenv("ANAGRAM_DATA_DIR"); env && *env) return env;
#ifdef ANAGRAM_DEFAULT_DATA_DIR
    return ANAGRAM_DEFAULT_DATA_DIR;
#else
    return "data";
#endif
}

// Reference table: header row, then one row per point (coordinates…, value).
bool load_reference_table(const std::string& path, int dim, Eigen::MatrixXd& points,
                          Eigen::VectorXd& values) {
    std::ifstream in(path);
    if (!in) return false;
    std::string line;
    std::getline(in, line);  // header
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) row.push_back(std::stod(field));
        if (static_cast<int>(row.size()) != dim + 1)
            throw std::runtime_error("reference table " + path + ": expected " +
                                     std::to_string(dim + 1) + " columns");
        rows.push_back(std::move(row));
    }
    points.resize(static_cast<int>(rows.size()), dim);
    values.resize(static_cast<int>(rows.size()));
    for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
        for (int c = 0; c < dim; ++c) points(r, c) = rows[r][c];
        values[r] = rows[r][dim];
    }
    return true;
}

void fill_reference_from_exact(PdeProblem& p, const std::vector<int>& counts) {
    p.reference_points = cell_centered_grid(p.box_lo, p.box_hi, counts);
    p.reference_values.resize(p.reference_points.rows());
    for (int r = 0; r < p.reference_points.rows(); ++r)
        p.reference_values[r] = (*p.exact)(p.reference_points.row(r).transpose());
}

int default_boundary_count(const std::string& name, const std::vector<int>& interior) {
    if (name == "laplace5d") return 3;
    int max_count = 2;
    for (int c : interior) max_count = std::max(max_count, c);
    return max_count;
}

PdeProblem build_heat(const GridSpec& grid) {
    PdeProblem p;
    p.name = "heat";
    p.input_dim = 2;  // (x, t)
    p.box_lo = Eigen::Vector2d(0.0, 0.0);
    p.box_hi = Eigen::Vector2d(1.0, 1.0);
    const auto counts = broadcast_counts(grid, 2);
    const int nb = grid.boundary_count > 0 ? grid.boundary_count
                                           : default_boundary_count(p.name, counts);
    p.interior_points = cell_centered_grid(p.box_lo, p.box_hi, counts);
    p.boundary_points = vstack({face_grid(p.box_lo, p.box_hi, 0, 0.0, nb),
                                face_grid(p.box_lo, p.box_hi, 0, 1.0, nb),
                                face_grid(p.box_lo, p.box_hi, 1, 0.0, nb)});
    p.interior_op = make_jet_operator(
        [](const auto& j) { return j.d(1) - 0.25 * j.d2(0, 0); }, "u_t - u_xx/4");
    p.boundary_op = make_jet_operator([](const auto& j) { return j.value; }, "u");
    p.source = [](const Eigen::VectorXd&) { return 0.0; };
    p.exact = [](const Eigen::VectorXd& x) {
        return std::sin(kPi * x[0]) * std::exp(-kPi * kPi * x[1] / 4.0);
    };
    p.boundary_data = [exact = *p.exact](const Eigen::VectorXd& x) { return exact(x); };
    fill_reference_from_exact(p, {100, 100});
    return p;
}

PdeProblem build_laplace2d(const GridSpec& grid) {
    PdeProblem p;
    p.name = "laplace2d";
    p.input_dim = 2;
    p.box_lo = Eigen::Vector2d(0.0, 0.0);
    p.box_hi = Eigen::Vector2d(1.0, 1.0);
    const auto counts = broadcast_counts(grid, 2);
    const int nb = grid.boundary_count > 0 ? grid.boundary_count
                                           : default_boundary_count(p.name, counts);
    p.interior_points = cell_centered_grid(p.box_lo, p.box_hi, counts);
    p.boundary_points = vstack({face_grid(p.box_lo, p.box_hi, 0, 0.0, nb),
                                face_grid(p.box_lo, p.box_hi, 0, 1.0, nb),
                                face_grid(p.box_lo, p.box_hi, 1, 0.0, nb),
                                face_grid(p.box_lo, p.box_hi, 1, 1.0, nb)});
    p.interior_op = make_jet_operator(
        [](const auto& j) { return j.d2(0, 0) + j.d2(1, 1); }, "laplacian");
    p.boundary_op = make_jet_operator([](const auto& j) { return j.value; }, "u");
    p.source = [](const Eigen::VectorXd&) { return 0.0; };
    p.exact = [](const Eigen::VectorXd& x) {
        return std::sin(kPi * x[0]) * std::sinh(kPi * x[1]) / std::sinh(kPi);
    };
    p.boundary_data = [exact = *p.exact](const Eigen::VectorXd& x) { return exact(x); };
    fill_reference_from_exact(p, {100, 100});
    return p;
}

PdeProblem build_laplace5d(const GridSpec& grid) {
    PdeProblem p;
    p.name = "laplace5d";
    p.input_dim = 5;
    p.box_lo = Eigen::VectorXd::Zero(5);
    p.box_hi = Eigen::VectorXd::Ones(5);
    const auto counts = broadcast_counts(grid, 5);
    const int nb = grid.boundary_count > 0 ? grid.boundary_count
                                           : default_boundary_count(p.name, counts);
    p.interior_points = cell_centered_grid(p.box_lo, p.box_hi, counts);
    std::vector<Eigen::MatrixXd> faces;
    for (int axis = 0; axis < 5; ++axis) {
        faces.push_back(face_grid(p.box_lo, p.box_hi, axis, 0.0, nb));
        faces.push_back(face_grid(p.box_lo, p.box_hi, axis, 1.0, nb));
    }
    p.boundary_points = vstack(faces);
    p.interior_op = make_jet_operator(
        [](const auto& j) {
            auto acc = j.d2(0, 0);
            for (int i = 1; i < 5; ++i) acc = acc + j.d2(i, i);
            return acc;
        },
        "laplacian");
    p.boundary_op = make_jet_operator([](const auto& j) { return j.value; }, "u");
    p.source = [](const Eigen::VectorXd&) { return 0.0; };
    p.exact = [](const Eigen::VectorXd& x) {
        double acc = 0.0;
        for (int i = 0; i < 5; ++i)
            for (int k = i + 1; k < 5; ++k) acc += x[i] * x[k];
        return acc;
    };
    p.boundary_data = [exact = *p.exact](const Eigen::VectorXd& x) { return exact(x); };
    fill_reference_from_exact(p, {6, 6, 6, 6, 6});
    return p;
}

PdeProblem build_nonlinear_poisson(const GridSpec& grid) {
    PdeProblem p;
    p.name = "nonlinear-poisson-k1";
    p.input_dim = 2;
    p.box_lo = Eigen::Vector2d(0.0, 0.0);
    p.box_hi = Eigen::Vector2d(1.0, 1.0);
    const auto counts = broadcast_counts(grid, 2);
    const int nb = grid.boundary_count > 0 ? grid.boundary_count
                                           : default_boundary_count(p.name, counts);
    p.interior_points = cell_centered_grid(p.box_lo, p.box_hi, counts);
    p.boundary_points = vstack({face_grid(p.box_lo, p.box_hi, 0, 0.0, nb),
                                face_grid(p.box_lo, p.box_hi, 0, 1.0, nb),
                                face_grid(p.box_lo, p.box_hi, 1, 0.0, nb),
                                face_grid(p.box_lo, p.box_hi, 1, 1.0, nb)});
    p.interior_op = make_jet_operator(
        [](const auto& j) {
            return -(j.d2(0, 0) + j.d2(1, 1)) + j.value * j.value * j.value;
        },
        "-laplacian + u^3");
    p.boundary_op = make_jet_operator([](const auto& j) { return j.value; }, "u");
    p.exact = [](const Eigen::VectorXd& x) {
        return std::sin(kPi * x[0]) * std::sin(kPi * x[1]);
    };
    p.source = [exact = *p.exact](const Eigen::VectorXd& x) {
        const double u = exact(x);
        return 2.0 * kPi * kPi * u + u * u * u;
    };
    p.boundary_data = [exact = *p.exact](const Eigen::VectorXd& x) { return exact(x); };
    fill_reference_from_exact(p, {100, 100});
    return p;
}

PdeProblem build_burgers1d(const GridSpec& grid) {
    PdeProblem p;
    p.name = "burgers1d";
    p.input_dim = 2;  // (x, t)
    p.box_lo = Eigen::Vector2d(-1.0, 0.0);
    p.box_hi = Eigen::Vector2d(1.0, 1.0);
    const auto counts = broadcast_counts(grid, 2);
    const int nb = grid.boundary_count > 0 ? grid.boundary_count
                                           : default_boundary_count(p.name, counts);
    p.interior_points = cell_centered_grid(p.box_lo, p.box_hi, counts);
    p.boundary_points = vstack({face_grid(p.box_lo, p.box_hi, 0, -1.0, nb),
                                face_grid(p.box_lo, p.box_hi, 0, 1.0, nb),
                                face_grid(p.box_lo, p.box_hi, 1, 0.0, nb)});
    p.interior_op = make_jet_operator(
        [](const auto& j) {
            return j.d(1) + j.value * j.d(0) - kBurgersNu * j.d2(0, 0);
        },
        "u_t + u u_x - nu u_xx");
    p.boundary_op = make_jet_operator([](const auto& j) { return j.value; }, "u");
    p.source = [](const Eigen::VectorXd&) { return 0.0; };
    p.boundary_data = [](const Eigen::VectorXd& x) {
        return x[1] == 0.0 ? -std::sin(kPi * x[0]) : 0.0;
    };
    p.reference_points = cell_centered_grid(p.box_lo, p.box_hi, {128, 16});
    p.reference_values.resize(p.reference_points.rows());
    for (int r = 0; r < p.reference_points.rows(); ++r)
        p.reference_values[r] =
            burgers_reference(p.reference_points(r, 0), p.reference_points(r, 1), kBurgersNu);
    return p;
}

PdeProblem build_allen_cahn(const GridSpec& grid, const std::string& data_dir) {
    PdeProblem p;
    p.name = "allen-cahn";
    p.input_dim = 2;  // (x, t)
    p.box_lo = Eigen::Vector2d(-1.0, 0.0);
    p.box_hi = Eigen::Vector2d(1.0, 1.0);
    const auto counts = broadcast_counts(grid, 2);
    const int nb = grid.boundary_count > 0 ? grid.boundary_count
                                           : default_boundary_count(p.name, counts);
    p.interior_points = cell_centered_grid(p.box_lo, p.box_hi, counts);
    p.boundary_points = face_grid(p.box_lo, p.box_hi, 1, 0.0, nb);  // initial slice
    // Periodic boundary: pair value and x-derivative at x = ±1.
    const Eigen::VectorXd ts = linspace(0.0, 1.0, nb);
    for (int i = 0; i < nb; ++i) {
        PairConstraint value_pair{Eigen::Vector2d(-1.0, ts[i]), Eigen::Vector2d(1.0, ts[i]), -1};
        PairConstraint deriv_pair{Eigen::Vector2d(-1.0, ts[i]), Eigen::Vector2d(1.0, ts[i]), 0};
        p.pairs.push_back(value_pair);
        p.pairs.push_back(deriv_pair);
    }
    p.interior_op = make_jet_operator(
        [](const auto& j) {
            const auto u = j.value;
            return j.d(1) - 0.0001 * j.d2(0, 0) + 5.0 * (u * u * u) - 5.0 * u;
        },
        "u_t - 1e-4 u_xx + 5u^3 - 5u");
    p.boundary_op = make_jet_operator([](const auto& j) { return j.value; }, "u");
    p.source = [](const Eigen::VectorXd&) { return 0.0; };
    p.boundary_data = [](const Eigen::VectorXd& x) {
        return x[0] * x[0] * std::cos(kPi * x[0]);
    };
    const std::string table = resolve_data_dir(data_dir) + "/allen_cahn_ref.csv";
    load_reference_table(table, 2, p.reference_points, p.reference_values);
    return p;
}

}  // namespace

Eigen::MatrixXd cell_centered_grid(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi,
                                   const std::vector<int>& counts) {
    const int d = static_cast<int>(lo.size());
    if (static_cast<int>(counts.size()) != d)
        throw std::invalid_argument("cell_centered_grid: counts/box dimension mismatch");
    int rows = 1;
    for (int c : counts) rows *= c;
    Eigen::MatrixXd pts(rows, d);
    for (int r = 0; r < rows; ++r) {
        int rem = r;
        for (int a = 0; a < d; ++a) {
            const int idx = rem % counts[a];
            rem /= counts[a];
            pts(r, a) = lo[a] + (hi[a] - lo[a]) * (idx + 0.5) / counts[a];
        }
    }
    return pts;
}

const std::vector<std::string>& problem_names() {
    static const std::vector<std::string> names = {
        "heat", "laplace2d", "laplace5d", "burgers1d", "nonlinear-poisson-k1", "allen-cahn"};
    return names;
}

PdeProblem build_problem(const std::string& name, const GridSpec& grid,
                         const std::string& data_dir) {
    if (name == "heat") return build_heat(grid);
    if (name == "laplace2d") return build_laplace2d(grid);
    if (name == "laplace5d") return build_laplace5d(grid);
    if (name == "burgers1d") return build_burgers1d(grid);
    if (name == "nonlinear-poisson-k1") return build_nonlinear_poisson(grid);
    if (name == "allen-cahn") return build_allen_cahn(grid, data_dir);
    std::string valid;
    for (const auto& n : problem_names()) valid += (valid.empty() ? "" : ", ") + n;
    throw std::invalid_argument("unknown problem '" + name + "' (valid: " + valid + ")");
}

double relative_l2_error(const PdeProblem& problem, const MlpSpec& spec,
                         const Eigen::VectorXd& params) {
    if (!problem.has_reference())
        throw std::invalid_argument("relative_l2_error: problem '" + problem.name +
                                    "' has no reference solution");
    const Eigen::VectorXd u = forward_values(spec, params, problem.reference_points);
    const double ref_norm = problem.reference_values.norm();
    if (ref_norm == 0.0)
        throw std::invalid_argument("relative_l2_error: reference norm is zero");
    return (u - problem.reference_values).norm() / ref_norm;
}

}  // namespace anagram
