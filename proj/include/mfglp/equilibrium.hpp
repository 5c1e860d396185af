#pragma once

#include "mfglp/certify.hpp"
#include "mfglp/dual.hpp"
#include "mfglp/occupation.hpp"

namespace mfglp {

struct EquilibriumCandidate {
    MeanFieldFlow flow;
    OccupationMeasure occupation;
    DualCertificate certificate;
    double primal_value = 0.0;
    double dual_value = 0.0;
    int iterations = 0;
    bool converged = false;
    ResidualReport residuals;  // certification of the candidate, when run
    int restart_index = 0;
};

struct BestResponse {
    OccupationMeasure occupation;
    DualCertificate certificate;
    double primal_value = 0.0;
    double dual_value = 0.0;
    std::vector<int> basis;  // optimal basis, reusable as warm start
};

enum class BestResponsePath { PrimalLP, DualLP };

/// Solves the representative player's problem at a frozen flow. The default
/// path solves build_primal and reads the certificate off the LP dual
/// multipliers; the DualLP path solves build_dual and recovers the occupation
/// from its multipliers. Both yield matching values (finite LP duality).
/// warm_basis, when given, is one xi/nu column index per constraint row.
BestResponse best_response(const MFGModel& model, const GridSpec& grid,
                           const MeanFieldFlow& flow,
                           BestResponsePath path = BestResponsePath::PrimalLP,
                           const std::vector<int>* warm_basis = nullptr);

struct IterationOptions {
    double damping = 0.5;  // in (0, 1]
    int max_iter = 200;
    double tol = 1e-9;  // sup-norm flow change
};

/// Damped Picard iteration on the flow:
///   flow_{n+1} = (1 - damping)*flow_n + damping*marginals(best response).
/// Stops when the iterate change drops below tol (the returned candidate
/// pairs the last flow with its own best response, so its consistency gap is
/// at most tol/damping) or at max_iter with converged = false. The optional
/// initial policy seeds the first LP basis; restarts use it to steer the
/// solver's selection among tied optima.
EquilibriumCandidate fixed_point_iterate(const MFGModel& model, const GridSpec& grid,
                                         const MeanFieldFlow& flow0,
                                         const IterationOptions& options = {},
                                         const Policy* initial_policy = nullptr);

struct SearchOptions {
    int n_restarts = 1;
    std::uint64_t seed = 0;
    double dedupe_eps = 1e-3;
    double certify_tol = 1e-6;
    IterationOptions iteration;
};

/// Start of restart r: a random deterministic stationary policy and its
/// propagated flow. Exposed so single restarts are reproducible in isolation.
std::pair<Policy, MeanFieldFlow> restart_start(const GridSpec& grid,
                                               const TransitionKernels& kernels,
                                               const Vector& rho, std::uint64_t seed,
                                               int restart);

/// Multi-start equilibrium search: runs fixed_point_iterate from seeded
/// random starting policies, keeps converged candidates whose verify_ne
/// verdict is true, orders by (primal value, restart index) and drops
/// candidates within dedupe_eps (max-node W1) of an earlier kept one.
/// May return an empty list.
std::vector<EquilibriumCandidate> find_equilibria(const MFGModel& model,
                                                  const GridSpec& grid,
                                                  const SearchOptions& options);

}  // namespace mfglp
