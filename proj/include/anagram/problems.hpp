#pragma once

// Registry of benchmark PDE problems: interior/boundary operators assembled
// from order-2 jets, source and boundary data, exact or tabulated reference
// solutions, and deterministic collocation grids.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "anagram/jet.hpp"
#include "anagram/mlp.hpp"

namespace anagram {

/// Differential operator on jets, carried in both scalar instantiations so
/// one definition serves evaluation and parameter-tangent propagation.
struct JetOperator {
    std::function<double(const Jet2&)> real;
    std::function<Dual(const JetDual&)> dual;
    std::string name;
};

template <class F>
JetOperator make_jet_operator(F f, std::string name) {
    return {[f](const Jet2& j) { return f(j); }, [f](const JetDual& j) { return f(j); },
            std::move(name)};
}

/// Paired-point equality constraint u-component(a) − u-component(b) = 0,
/// used for periodic boundaries.
struct PairConstraint {
    Eigen::VectorXd point_a;
    Eigen::VectorXd point_b;
    int deriv_axis = -1;  ///< -1 pairs values, >= 0 pairs that first derivative
};

/// Collocation grid shape. Interior points are cell centers of a uniform
/// tensor grid; boundary faces carry their own per-axis count.
struct GridSpec {
    std::vector<int> interior_counts;  ///< one entry, broadcast, or one per axis
    int boundary_count = 0;            ///< 0 = problem default
};

using ScalarField = std::function<double(const Eigen::VectorXd&)>;

struct PdeProblem {
    std::string name;
    int input_dim = 0;
    Eigen::VectorXd box_lo, box_hi;

    Eigen::MatrixXd interior_points;  ///< S_D × d
    Eigen::MatrixXd boundary_points;  ///< rows on faces (incl. initial slices)
    std::vector<PairConstraint> pairs;

    JetOperator interior_op;
    JetOperator boundary_op;  ///< applied at each boundary row
    ScalarField source;          ///< f on the interior
    ScalarField boundary_data;   ///< g on the boundary rows

    std::optional<ScalarField> exact;
    Eigen::MatrixXd reference_points;
    Eigen::VectorXd reference_values;

    int interior_count() const { return static_cast<int>(interior_points.rows()); }
    int boundary_count() const {
        return static_cast<int>(boundary_points.rows()) + static_cast<int>(pairs.size());
    }
    int sample_count() const { return interior_count() + boundary_count(); }
    bool has_reference() const { return reference_points.rows() > 0; }
};

const std::vector<std::string>& problem_names();

/// Build a benchmark by name. Unknown names are rejected listing the valid
/// set. data_dir locates stored reference tables (empty = compiled default,
/// overridable with ANAGRAM_DATA_DIR).
PdeProblem build_problem(const std::string& name, const GridSpec& grid,
                         const std::string& data_dir = "");

/// ‖u_params − u*‖ / ‖u*‖ over the problem's reference grid, uniform weights.
double relative_l2_error(const PdeProblem& problem, const MlpSpec& spec,
                         const Eigen::VectorXd& params);

/// Uniform cell-centered tensor grid inside [lo, hi], row per point.
Eigen::MatrixXd cell_centered_grid(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi,
                                   const std::vector<int>& counts);

}  // namespace anagram
