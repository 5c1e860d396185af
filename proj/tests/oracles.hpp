#pragma once

// Test-only oracles, independent of the LP solve path they cross-check.

#include <functional>
#include <vector>

#include "mfglp/discretize.hpp"
#include "mfglp/types.hpp"

namespace mfglp::testing {

// Expected cost of a deterministic Markov policy by dense forward
// propagation of the chain: sum_k dt * <m_k, f(., policy_k)> + <m_K, g>.
inline double chain_policy_cost(const GridSpec& grid, const TransitionKernels& kernels,
                                const CostTable& costs, const Vector& rho,
                                const std::vector<std::vector<int>>& policy) {
    const int S = grid.num_states();
    const double dt = grid.dt();
    Vector m = rho;
    double total = 0.0;
    for (int k = 0; k < grid.n_time; ++k) {
        Vector next = Vector::Zero(S);
        for (int x = 0; x < S; ++x) {
            if (m[x] == 0.0) continue;
            const int a = policy[k][x];
            total += dt * m[x] * costs.f[k](x, a);
            for (SparseMatrixRM::InnerIterator it(kernels.P[k][a], x); it; ++it)
                next[it.col()] += m[x] * it.value();
        }
        m = next;
    }
    return total + costs.g.dot(m);
}

// Minimum expected cost over every deterministic Markov policy, by
// exhaustive enumeration (A^(K*S) policies; keep instances tiny).
inline double enumerate_policies_min_cost(const GridSpec& grid, const TransitionKernels& kernels,
                                          const CostTable& costs, const Vector& rho) {
    const int S = grid.num_states();
    const int K = grid.n_time;
    const int A = grid.num_actions();
    const long cells = static_cast<long>(K) * S;

    long total_policies = 1;
    for (long i = 0; i < cells; ++i) total_policies *= A;

    double best = std::numeric_limits<double>::infinity();
    std::vector<std::vector<int>> policy(K, std::vector<int>(S, 0));
    for (long code = 0; code < total_policies; ++code) {
        long rest = code;
        for (int k = 0; k < K; ++k)
            for (int x = 0; x < S; ++x) {
                policy[k][x] = static_cast<int>(rest % A);
                rest /= A;
            }
        best = std::min(best, chain_policy_cost(grid, kernels, costs, rho, policy));
    }
    return best;
}

}  // namespace mfglp::testing
