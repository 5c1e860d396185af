#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace mfglp {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using SparseMatrix = Eigen::SparseMatrix<double>;
using SparseMatrixRM = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using Triplet = Eigen::Triplet<double>;

/// Base class for all errors raised by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ModelError : Error {
    using Error::Error;
};
struct DiscretizationError : Error {
    using Error::Error;
};
struct StabilityError : Error {
    using Error::Error;
};
struct SolverError : Error {
    using Error::Error;
};
struct InconsistentMeasureError : Error {
    using Error::Error;
};
struct ConfigError : Error {
    using Error::Error;
};

/// Time/state/action discretization. States live on a uniform grid over a
/// box, actions are an explicit finite list. The only supported boundary
/// treatment is reflecting, which conserves total mass in the chain.
struct GridSpec {
    double horizon = 1.0;
    int n_time = 1;
    int state_dim = 1;
    std::array<std::array<double, 2>, 2> state_box{{{0.0, 1.0}, {0.0, 1.0}}};
    std::array<int, 2> n_state{2, 1};
    std::vector<Vector> actions;

    double dt() const { return horizon / n_time; }

    double spacing(int dim) const {
        return (state_box[dim][1] - state_box[dim][0]) / (n_state[dim] - 1);
    }

    /// Common mesh width. In 2-D both axes must share it (validated).
    double h() const { return spacing(0); }

    int num_states() const {
        int n = n_state[0];
        if (state_dim == 2) n *= n_state[1];
        return n;
    }

    int num_actions() const { return static_cast<int>(actions.size()); }

    int flat_index(int i0, int i1 = 0) const { return i0 + n_state[0] * i1; }

    std::array<int, 2> multi_index(int flat) const {
        return {flat % n_state[0], flat / n_state[0]};
    }

    Vector state_coord(int flat) const {
        Vector x(state_dim);
        auto mi = multi_index(flat);
        for (int d = 0; d < state_dim; ++d)
            x[d] = state_box[d][0] + mi[d] * spacing(d);
        return x;
    }

    /// Flat index of the grid node closest to x.
    int nearest_node(const Vector& x) const {
        std::array<int, 2> mi{0, 0};
        for (int d = 0; d < state_dim; ++d) {
            double rel = (x[d] - state_box[d][0]) / spacing(d);
            int i = static_cast<int>(rel + 0.5);
            if (i < 0) i = 0;
            if (i >= n_state[d]) i = n_state[d] - 1;
            mi[d] = i;
        }
        return flat_index(mi[0], mi[1]);
    }

    void validate() const;
};

/// Probability vector over the state grid per time node (the flow mu).
/// Row k is the population distribution at time node t_k = k*dt.
struct MeanFieldFlow {
    Matrix m;  // (n_time+1) x num_states

    int num_nodes() const { return static_cast<int>(m.rows()); }

    void validate(double tol = 1e-12) const;
};

/// Uniform distribution over all grid nodes at every time node.
MeanFieldFlow uniform_flow(const GridSpec& grid);

/// Flow that repeats the given distribution at every time node.
MeanFieldFlow constant_flow(const GridSpec& grid, const Vector& dist);

}  // namespace mfglp
