#pragma once

#include "mfglp/certify.hpp"
#include "mfglp/occupation.hpp"

namespace mfglp {

/// Backward dynamic-programming value on the chain, with the argmin feedback
/// and per-(slab, state) uniqueness flags. V[n_time, x] = g(x, mu_T) exactly.
struct ValueFunction {
    Matrix V;                                        // (n_time+1) x S
    std::vector<std::vector<int>> feedback;          // [n_time][S] action index
    std::vector<std::vector<std::uint8_t>> minimizer_unique;  // [n_time][S]

    int num_ties() const;
};

/// V[k,x] = min_a ( f(k,x,a)*dt + (P_{k,a} V[k+1])(x) ), argmin with
/// lowest-index tie-breaking, ties flagged at 1e-12 on the value comparison.
ValueFunction solve_hjb(const MFGModel& model, const GridSpec& grid,
                        const MeanFieldFlow& flow);

ValueFunction solve_hjb(const GridSpec& grid, const TransitionKernels& kernels,
                        const CostTable& costs);

/// Forward transport under a total feedback map: m[0] = rho,
/// m[k+1] = P_{k,feedback}' m[k]. Kernels are built from flow_for_coefficients.
MeanFieldFlow solve_fp(const MFGModel& model, const GridSpec& grid,
                       const std::vector<std::vector<int>>& feedback,
                       const MeanFieldFlow& flow_for_coefficients);

struct HjbFpResult {
    MeanFieldFlow flow;
    ValueFunction value;
    bool converged = false;
    int iterations = 0;
    int ties_seen = 0;  // total non-unique argmin flags across iterations
};

/// Damped alternation of solve_hjb and solve_fp starting from the uniform
/// policy's propagated flow. Non-convergence is reported, not thrown. When
/// the argmin is ambiguous the selection is the lowest index, and ties_seen
/// records how often that selection was exercised.
HjbFpResult hjbfp_fixed_point(const MFGModel& model, const GridSpec& grid,
                              double damping, int max_iter, double tol);

struct CompareReport {
    std::vector<double> node_w1;  // per time node
    double max_w1 = 0.0;
    double value_gap = 0.0;
};

/// Distance report between an equilibrium candidate's flow/value and an
/// HJB-FP reference (report only, no verdict).
CompareReport compare_flows(const GridSpec& grid, const MeanFieldFlow& candidate_flow,
                            double candidate_value, const MeanFieldFlow& reference_flow,
                            double reference_value);

}  // namespace mfglp
