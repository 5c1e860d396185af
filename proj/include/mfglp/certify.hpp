#pragma once

#include "mfglp/dual.hpp"
#include "mfglp/occupation.hpp"
#include "mfglp/wasserstein.hpp"

namespace mfglp {

/// Residuals of the primal-dual equilibrium system for a candidate triple
/// (flow, occupation, certificate), all evaluated with the same discrete
/// kernels and cost tables the builders use:
///   r_value          |sum g*nu + sum f*xi - sum rho*psi[0]|
///   r_flow           max flow-balance row violation of (nu, xi), probability units
///   r_terminal_feas  max_x (psi[K,x] - g(x))_+
///   r_bellman_feas   max_{k,x,a} (-(forward difference + Q psi[k+1] + f))_+
///   r_consistency    max over nodes of max_x |marginal - flow| (nu at node K)
///   r_comp_terminal  |sum_x (g - psi[K]) nu|
///   r_comp_running   |sum (forward difference + Q psi[k+1] + f) xi|
/// The signed complementarity sums are kept alongside: whenever r_flow = 0,
/// r_value = |comp_terminal_signed + comp_running_signed| holds exactly.
struct ResidualReport {
    double r_value = 0.0;
    double r_flow = 0.0;
    double r_terminal_feas = 0.0;
    double r_bellman_feas = 0.0;
    double r_consistency = 0.0;
    double r_comp_terminal = 0.0;
    double r_comp_running = 0.0;
    double comp_terminal_signed = 0.0;
    double comp_running_signed = 0.0;
    bool verdict = false;
    double tolerance = 0.0;

    double max_residual() const;
};

ResidualReport verify_ne(const MFGModel& model, const GridSpec& grid,
                         const MeanFieldFlow& flow, const OccupationMeasure& occ,
                         const DualCertificate& psi, double tol);

/// Same, reusing prebuilt kernels/costs (they must match flow).
ResidualReport verify_ne(const GridSpec& grid, const TransitionKernels& kernels,
                         const CostTable& costs, const Vector& rho,
                         const MeanFieldFlow& flow, const OccupationMeasure& occ,
                         const DualCertificate& psi, double tol);

/// The two complementary-slackness sums (terminal, running), signed.
/// Both are nonnegative whenever the certificate is feasible.
std::pair<double, double> complementarity(const MFGModel& model, const GridSpec& grid,
                                          const MeanFieldFlow& flow,
                                          const OccupationMeasure& occ,
                                          const DualCertificate& psi);

struct SimulationResult {
    MeanFieldFlow empirical;
    double max_w1 = 0.0;  // max over nodes, empirical vs reference flow
};

/// Samples n_paths chains from rho under the kernels (coefficients frozen at
/// the given flow) and the policy; returns per-node empirical marginals and
/// their max-node W1 distance to the flow. Per-path RNG streams are derived
/// from the seed, so the result is reproducible and order-independent.
SimulationResult simulate_consistency(const MFGModel& model, const GridSpec& grid,
                                      const Policy& policy, const MeanFieldFlow& flow,
                                      long n_paths, std::uint64_t seed);

}  // namespace mfglp
