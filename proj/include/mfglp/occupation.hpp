#pragma once

#include "mfglp/discretize.hpp"
#include "mfglp/lp_core.hpp"
#include "mfglp/model.hpp"
#include "mfglp/types.hpp"

namespace mfglp {

/// Time-integrated state-action mass per slab plus the terminal measure nu.
/// Each slab of xi carries total mass dt; nu is a probability vector.
struct OccupationMeasure {
    std::vector<Matrix> xi;  // [n_time], each S x n_actions, entries >= 0
    Vector nu;               // S

    double slab_mass(int k) const { return xi[k].sum(); }
    void validate(const GridSpec& grid, double tol = 1e-10) const;
};

/// Disintegration kernel of xi: each (slab, state) row is a probability
/// vector over actions. Rows at states carrying no occupation mass are
/// filled uniformly and flagged unconstrained.
struct Policy {
    std::vector<Matrix> kernel;  // [n_time], each S x n_actions
    std::vector<std::vector<std::uint8_t>> unconstrained;  // [n_time][S]

    static Policy uniform(const GridSpec& grid);
    /// Deterministic policy from per-(slab, state) action indices.
    static Policy deterministic(const GridSpec& grid,
                                const std::vector<std::vector<int>>& action_index);
};

/// Column/row layout of the occupation LP. xi columns come first, ordered by
/// (slab, state, action) with action fastest; nu columns follow. Constraint
/// rows are ordered by (time node, state). build_dual mirrors this layout
/// transposed, so these maps double as the permutation record.
struct OccupationLayout {
    int n_time, n_states, n_actions;

    explicit OccupationLayout(const GridSpec& grid)
        : n_time(grid.n_time), n_states(grid.num_states()), n_actions(grid.num_actions()) {}

    int xi_col(int k, int x, int a) const { return (k * n_states + x) * n_actions + a; }
    int nu_col(int x) const { return n_time * n_states * n_actions + x; }
    int node_row(int j, int x) const { return j * n_states + x; }
    int num_cols() const { return n_time * n_states * n_actions + n_states; }
    int num_rows() const { return (n_time + 1) * n_states; }
};

/// The discrete occupation-measure LP for the given flow:
///   minimize  sum f*xi + sum g*nu
///   subject to, with P = I + dt*Q and rows in probability units,
///     node 0:    sum_a xi[0,y,a]/dt                                  = rho(y)
///     node j:    sum_a xi[j,y,a]/dt - sum_{x,a} P_{j-1,a}[x,y]*xi[j-1,x,a]/dt = 0
///     node K:    nu(y)             - sum_{x,a} P_{K-1,a}[x,y]*xi[K-1,x,a]/dt = 0
/// All variables >= 0. The dual multiplier of row (j, y) is the certificate
/// value psi[j, y].
LinearProgram build_primal(const MFGModel& model, const GridSpec& grid,
                           const MeanFieldFlow& flow);

/// Same, reusing prebuilt kernels and costs.
LinearProgram build_primal(const GridSpec& grid, const TransitionKernels& kernels,
                           const CostTable& costs, const Vector& rho);

/// Node marginals of an occupation measure: row k (k < n_time) is the
/// slab-averaged state marginal sum_a xi[k,.,a]/dt, row n_time is nu.
/// Throws InconsistentMeasureError when a slab mass deviates from dt.
MeanFieldFlow marginals(const OccupationMeasure& occ, const GridSpec& grid);

/// xi[k,x,a] / sum_a xi[k,x,.], with zero-mass rows uniform + flagged.
Policy disintegrate(const OccupationMeasure& occ, const GridSpec& grid,
                    double mass_floor = 1e-14);

/// Forward propagation of a policy through the kernels from rho:
/// m_{k+1} = P_{k,policy}' m_k, xi[k,x,a] = dt * m_k(x) * kernel[k](x,a),
/// nu = m_{n_time}. The result is feasible for build_primal by construction.
struct Propagation {
    OccupationMeasure occupation;
    MeanFieldFlow flow;
};

Propagation propagate_policy(const Policy& policy, const TransitionKernels& kernels,
                             const Vector& rho, const GridSpec& grid);

/// Reads (xi, nu) out of an LP solution vector in the layout above.
OccupationMeasure occupation_from_lp(const Vector& primal, const GridSpec& grid);

/// Primal objective value of an occupation measure under the given costs.
double occupation_cost(const OccupationMeasure& occ, const CostTable& costs);

}  // namespace mfglp
