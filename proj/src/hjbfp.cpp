#include "mfglp/hjbfp.hpp"

#include <cmath>

namespace mfglp {

namespace {
constexpr double kTieTol = 1e-12;
}

int ValueFunction::num_ties() const {
    int ties = 0;
    for (const auto& row : minimizer_unique)
        for (auto flag : row)
            if (!flag) ++ties;
    return ties;
}

ValueFunction solve_hjb(const GridSpec& grid, const TransitionKernels& kernels,
                        const CostTable& costs) {
    const int S = grid.num_states();
    const int K = grid.n_time;
    const int A = grid.num_actions();
    const double dt = grid.dt();

    ValueFunction vf;
    vf.V.resize(K + 1, S);
    vf.V.row(K) = costs.g.transpose();
    vf.feedback.assign(K, std::vector<int>(S, 0));
    vf.minimizer_unique.assign(K, std::vector<std::uint8_t>(S, 1));

    for (int k = K - 1; k >= 0; --k) {
        for (int x = 0; x < S; ++x) {
            double best = std::numeric_limits<double>::infinity();
            int best_a = 0;
            bool unique = true;
            for (int a = 0; a < A; ++a) {
                double q = costs.f[k](x, a) * dt;
                for (SparseMatrixRM::InnerIterator it(kernels.P[k][a], x); it; ++it)
                    q += it.value() * vf.V(k + 1, it.col());
                if (q < best - kTieTol) {
                    best = q;
                    best_a = a;
                    unique = true;
                } else if (std::abs(q - best) <= kTieTol) {
                    unique = false;
                    if (q < best) best = q;
                }
            }
            vf.V(k, x) = best;
            vf.feedback[k][x] = best_a;
            vf.minimizer_unique[k][x] = unique ? 1 : 0;
        }
    }
    return vf;
}

ValueFunction solve_hjb(const MFGModel& model, const GridSpec& grid,
                        const MeanFieldFlow& flow) {
    TransitionKernels kernels = transition_kernel(build_generator(model, grid, flow));
    CostTable costs = tabulate_costs(model, grid, flow);
    return solve_hjb(grid, kernels, costs);
}

MeanFieldFlow solve_fp(const MFGModel& model, const GridSpec& grid,
                       const std::vector<std::vector<int>>& feedback,
                       const MeanFieldFlow& flow_for_coefficients) {
    TransitionKernels kernels =
        transition_kernel(build_generator(model, grid, flow_for_coefficients));
    Policy policy = Policy::deterministic(grid, feedback);
    return propagate_policy(policy, kernels, model.initial_distribution, grid).flow;
}

HjbFpResult hjbfp_fixed_point(const MFGModel& model, const GridSpec& grid,
                              double damping, int max_iter, double tol) {
    if (!(damping > 0.0 && damping <= 1.0))
        throw ConfigError("hjbfp_fixed_point: damping must lie in (0, 1]");

    HjbFpResult result;
    {
        TransitionKernels kernels =
            transition_kernel(build_generator(model, grid, uniform_flow(grid)));
        result.flow =
            propagate_policy(Policy::uniform(grid), kernels, model.initial_distribution, grid)
                .flow;
    }

    for (int it = 1; it <= max_iter; ++it) {
        result.iterations = it;
        TransitionKernels kernels =
            transition_kernel(build_generator(model, grid, result.flow));
        CostTable costs = tabulate_costs(model, grid, result.flow);
        result.value = solve_hjb(grid, kernels, costs);
        result.ties_seen += result.value.num_ties();

        Policy policy = Policy::deterministic(grid, result.value.feedback);
        MeanFieldFlow response =
            propagate_policy(policy, kernels, model.initial_distribution, grid).flow;

        double change = (response.m - result.flow.m).cwiseAbs().maxCoeff() * damping;
        result.flow.m = (1.0 - damping) * result.flow.m + damping * response.m;
        if (change <= tol) {
            result.converged = true;
            break;
        }
    }
    return result;
}

CompareReport compare_flows(const GridSpec& grid, const MeanFieldFlow& candidate_flow,
                            double candidate_value, const MeanFieldFlow& reference_flow,
                            double reference_value) {
    CompareReport report;
    report.node_w1.reserve(candidate_flow.m.rows());
    for (Eigen::Index k = 0; k < candidate_flow.m.rows(); ++k) {
        double d = w1_distance(grid, candidate_flow.m.row(k).transpose(),
                               reference_flow.m.row(k).transpose());
        report.node_w1.push_back(d);
        report.max_w1 = std::max(report.max_w1, d);
    }
    report.value_gap = std::abs(candidate_value - reference_value);
    return report;
}

}  // namespace mfglp
