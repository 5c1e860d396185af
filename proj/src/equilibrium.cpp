#include "mfglp/equilibrium.hpp"

#include <algorithm>
#include <cmath>

#include "mfglp/rng.hpp"

namespace mfglp {

namespace {

// Basis of the occupation LP induced by a deterministic policy: one xi column
// per (slab, state) plus every nu column. Always nonsingular, and its basic
// solution is the policy's propagated occupation, hence always feasible.
std::vector<int> policy_crash_basis(const GridSpec& grid, const Policy& policy) {
    const OccupationLayout layout(grid);
    std::vector<int> basis(layout.num_rows(), -1);
    for (int k = 0; k < layout.n_time; ++k)
        for (int x = 0; x < layout.n_states; ++x) {
            int a = 0;
            policy.kernel[k].row(x).maxCoeff(&a);
            basis[layout.node_row(k, x)] = layout.xi_col(k, x, a);
        }
    for (int x = 0; x < layout.n_states; ++x)
        basis[layout.node_row(layout.n_time, x)] = layout.nu_col(x);
    return basis;
}

std::vector<int> lowest_action_basis(const GridSpec& grid) {
    return policy_crash_basis(grid, Policy::deterministic(
                                        grid, std::vector<std::vector<int>>(
                                                  grid.n_time,
                                                  std::vector<int>(grid.num_states(), 0))));
}

}  // namespace

BestResponse best_response(const MFGModel& model, const GridSpec& grid,
                           const MeanFieldFlow& flow, BestResponsePath path,
                           const std::vector<int>* warm_basis) {
    TransitionKernels kernels = transition_kernel(build_generator(model, grid, flow));
    CostTable costs = tabulate_costs(model, grid, flow);
    const Vector& rho = model.initial_distribution;

    BestResponse br;
    if (path == BestResponsePath::PrimalLP) {
        LinearProgram lp = build_primal(grid, kernels, costs, rho);
        SimplexOptions options;
        options.warm_basis = warm_basis ? *warm_basis : lowest_action_basis(grid);
        SolveDetail detail = solve_lp_detailed(lp, options);
        if (detail.solution.status != LPStatus::Optimal)
            throw SolverError("best_response: occupation LP not optimal (status " +
                              std::to_string(static_cast<int>(detail.solution.status)) +
                              "); this cannot happen for a valid flow");
        br.occupation = occupation_from_lp(detail.solution.primal, grid);
        br.certificate = certificate_from_lp(detail.solution.dual, grid);
        br.primal_value = detail.solution.objective;
        br.dual_value = certificate_value(br.certificate, rho);
        br.basis = std::move(detail.basis);
    } else {
        LinearProgram lp = build_dual(grid, kernels, costs, rho);
        LPSolution sol = solve_lp(lp);
        if (sol.status != LPStatus::Optimal)
            throw SolverError("best_response: dual LP not optimal for a valid flow");
        br.certificate = certificate_from_lp(sol.primal, grid);
        // The multipliers of the dual LP are the occupation, up to the sign
        // convention for maximization problems.
        br.occupation = occupation_from_lp(Vector(-sol.dual), grid);
        br.dual_value = sol.objective;
        br.primal_value = occupation_cost(br.occupation, costs);
    }
    return br;
}

EquilibriumCandidate fixed_point_iterate(const MFGModel& model, const GridSpec& grid,
                                         const MeanFieldFlow& flow0,
                                         const IterationOptions& options,
                                         const Policy* initial_policy) {
    if (!(options.damping > 0.0 && options.damping <= 1.0))
        throw ConfigError("fixed_point_iterate: damping must lie in (0, 1]");

    EquilibriumCandidate cand;
    cand.flow = flow0;

    std::vector<int> basis;
    if (initial_policy) basis = policy_crash_basis(grid, *initial_policy);

    MeanFieldFlow flow = flow0;
    for (int it = 1; it <= options.max_iter; ++it) {
        BestResponse br = best_response(model, grid, flow, BestResponsePath::PrimalLP,
                                        basis.empty() ? nullptr : &basis);
        MeanFieldFlow response = marginals(br.occupation, grid);
        double change =
            options.damping * (response.m - flow.m).cwiseAbs().maxCoeff();

        cand.flow = flow;  // the flow this best response answers
        cand.occupation = std::move(br.occupation);
        cand.certificate = std::move(br.certificate);
        cand.primal_value = br.primal_value;
        cand.dual_value = br.dual_value;
        cand.iterations = it;

        if (change <= options.tol) {
            cand.converged = true;
            break;
        }
        flow.m = (1.0 - options.damping) * flow.m + options.damping * response.m;

        bool basis_ok = !br.basis.empty() &&
                        std::all_of(br.basis.begin(), br.basis.end(),
                                    [](int j) { return j >= 0; });
        basis = basis_ok ? std::move(br.basis) : std::vector<int>();
    }
    return cand;
}

std::pair<Policy, MeanFieldFlow> restart_start(const GridSpec& grid,
                                               const TransitionKernels& kernels,
                                               const Vector& rho, std::uint64_t seed,
                                               int restart) {
    Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(restart));
    const int S = grid.num_states();
    const int A = grid.num_actions();

    std::vector<int> stationary(S);
    for (int x = 0; x < S; ++x) stationary[x] = rng.uniform_int(A);
    std::vector<std::vector<int>> per_slab(grid.n_time, stationary);
    Policy policy = Policy::deterministic(grid, per_slab);
    MeanFieldFlow flow = propagate_policy(policy, kernels, rho, grid).flow;
    return {std::move(policy), std::move(flow)};
}

std::vector<EquilibriumCandidate> find_equilibria(const MFGModel& model, const GridSpec& grid,
                                                  const SearchOptions& options) {
    if (options.n_restarts < 1) throw ConfigError("find_equilibria: n_restarts must be >= 1");

    // Starting flows are generated by propagating through the uniform-flow
    // chain; the mean-field dependence re-enters through the iteration.
    TransitionKernels start_kernels =
        transition_kernel(build_generator(model, grid, uniform_flow(grid)));

    std::vector<EquilibriumCandidate> kept;
    for (int r = 0; r < options.n_restarts; ++r) {
        auto [policy, flow0] = restart_start(grid, start_kernels, model.initial_distribution,
                                             options.seed, r);
        EquilibriumCandidate cand =
            fixed_point_iterate(model, grid, flow0, options.iteration, &policy);
        cand.restart_index = r;
        if (!cand.converged) continue;
        cand.residuals = verify_ne(model, grid, cand.flow, cand.occupation, cand.certificate,
                                   options.certify_tol);
        if (!cand.residuals.verdict) continue;
        kept.push_back(std::move(cand));
    }

    std::sort(kept.begin(), kept.end(),
              [](const EquilibriumCandidate& a, const EquilibriumCandidate& b) {
                  if (a.primal_value != b.primal_value) return a.primal_value < b.primal_value;
                  return a.restart_index < b.restart_index;
              });

    std::vector<EquilibriumCandidate> unique;
    for (auto& cand : kept) {
        bool duplicate = false;
        for (const auto& u : unique)
            if (flow_distance(grid, cand.flow, u.flow) <= options.dedupe_eps) {
                duplicate = true;
                break;
            }
        if (!duplicate) unique.push_back(std::move(cand));
    }
    return unique;
}

}  // namespace mfglp
