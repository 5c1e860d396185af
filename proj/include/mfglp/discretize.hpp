#pragma once

#include "mfglp/model.hpp"
#include "mfglp/types.hpp"

namespace mfglp {

/// Markov-chain approximation of the controlled generator on the grid.
/// rates[k][j] is the rate matrix Q for time slab k and action index j:
/// off-diagonal entries nonnegative, every row sums to zero. Rows of
/// boundary nodes reflect (outward rates are folded back), so the chain
/// conserves mass.
struct DiscreteGenerator {
    std::vector<std::vector<SparseMatrixRM>> rates;  // [n_time][n_actions], each SxS
    double dt = 0.0;

    int num_slabs() const { return static_cast<int>(rates.size()); }
};

/// One-step kernels P = I + dt*Q, row-stochastic by the stability bound.
struct TransitionKernels {
    std::vector<std::vector<SparseMatrixRM>> P;  // [n_time][n_actions], each SxS
    double dt = 0.0;
};

/// Running/terminal costs tabulated on the grid for a given flow:
/// f[k](x, a) = running cost on slab k, g(x) = terminal cost.
struct CostTable {
    std::vector<Matrix> f;  // [n_time], each S x n_actions
    Vector g;               // S
};

/// Upwind (positive-coefficient) discretization of the generator for the
/// given flow. Interior node, dimension i, action a:
///   rate(x -> x + h e_i) = Sigma_ii/(2h^2) + max(b_i, 0)/h
///   rate(x -> x - h e_i) = Sigma_ii/(2h^2) + max(-b_i, 0)/h
/// In 2-D the cross term uses the 7-point stencil and requires
/// |Sigma_01| <= min(Sigma_00, Sigma_11); otherwise a DiscretizationError is
/// thrown. Throws StabilityError (reporting the largest admissible dt) when
/// dt * max|Q_xx| > 1.
DiscreteGenerator build_generator(const MFGModel& model, const GridSpec& grid,
                                  const MeanFieldFlow& flow);

/// P = I + dt*Q for every (slab, action). Throws StabilityError if any entry
/// would be negative.
TransitionKernels transition_kernel(const DiscreteGenerator& gen);

/// Tabulates f and g for the given flow (f on slab k uses t_k and flow row k,
/// g uses the terminal flow row).
CostTable tabulate_costs(const MFGModel& model, const GridSpec& grid,
                         const MeanFieldFlow& flow);

}  // namespace mfglp
