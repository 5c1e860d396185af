#include "mfglp/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mfglp/rng.hpp"

namespace mfglp {

double ResidualReport::max_residual() const {
    return std::max({r_value, r_flow, r_terminal_feas, r_bellman_feas, r_consistency,
                     r_comp_terminal, r_comp_running});
}

ResidualReport verify_ne(const GridSpec& grid, const TransitionKernels& kernels,
                         const CostTable& costs, const Vector& rho,
                         const MeanFieldFlow& flow, const OccupationMeasure& occ,
                         const DualCertificate& psi, double tol) {
    const int S = grid.num_states();
    const int K = grid.n_time;
    const int A = grid.num_actions();
    const double inv_dt = 1.0 / grid.dt();

    if (static_cast<int>(occ.xi.size()) != K || occ.nu.size() != S ||
        flow.m.rows() != K + 1 || flow.m.cols() != S || psi.psi.rows() != K + 1 ||
        psi.psi.cols() != S)
        throw InconsistentMeasureError("verify_ne: shape mismatch");

    ResidualReport rep;
    rep.tolerance = tol;

    // (13a): value match between the occupation cost and the dual value.
    double primal_cost = occupation_cost(occ, costs);
    double dual_value = psi.psi.row(0).dot(rho);
    rep.r_value = std::abs(primal_cost - dual_value);

    // (13b): flow-balance rows of the occupation LP, probability units.
    {
        Matrix in_mass(K + 1, S);  // transported slab mass arriving at each node
        in_mass.row(0) = rho.transpose();
        for (int k = 0; k < K; ++k) {
            Vector next = Vector::Zero(S);
            for (int x = 0; x < S; ++x)
                for (int a = 0; a < A; ++a) {
                    const double w = occ.xi[k](x, a) * inv_dt;
                    if (w == 0.0) continue;
                    for (SparseMatrixRM::InnerIterator it(kernels.P[k][a], x); it; ++it)
                        next[it.col()] += w * it.value();
                }
            in_mass.row(k + 1) = next.transpose();
        }
        double r = 0.0;
        for (int j = 0; j <= K; ++j)
            for (int y = 0; y < S; ++y) {
                double outgoing = j < K ? occ.xi[j].row(y).sum() * inv_dt : occ.nu[y];
                r = std::max(r, std::abs(outgoing - in_mass(j, y)));
            }
        rep.r_flow = r;
    }

    // (13c)/(13d): certificate feasibility, and the signed slack sums of (14)
    // accumulated with the same Bellman expressions.
    {

        double terminal_viol = 0.0;
        double comp_terminal = 0.0;
        for (int x = 0; x < S; ++x) {
            double slack = costs.g[x] - psi.psi(K, x);
            terminal_viol = std::max(terminal_viol, -slack);
            comp_terminal += slack * occ.nu[x];
        }
        rep.r_terminal_feas = std::max(0.0, terminal_viol);
        rep.comp_terminal_signed = comp_terminal;

        double bellman_viol = 0.0;
        double comp_running = 0.0;
        for (int k = 0; k < K; ++k) {
            for (int x = 0; x < S; ++x) {
                for (int a = 0; a < A; ++a) {
                    double pv = 0.0;
                    for (SparseMatrixRM::InnerIterator it(kernels.P[k][a], x); it; ++it)
                        pv += it.value() * psi.psi(k + 1, it.col());
                    double slack = (pv - psi.psi(k, x)) * inv_dt + costs.f[k](x, a);
                    bellman_viol = std::max(bellman_viol, -slack);
                    comp_running += slack * occ.xi[k](x, a);
                }
            }
        }
        rep.r_bellman_feas = std::max(0.0, bellman_viol);
        rep.comp_running_signed = comp_running;
        rep.r_comp_terminal = std::abs(comp_terminal);
        rep.r_comp_running = std::abs(comp_running);
    }

    // (13e): node marginals of xi against the flow, nu at the last node.
    {
        double r = 0.0;
        for (int k = 0; k < K; ++k) {
            Vector marg = occ.xi[k].rowwise().sum() * inv_dt;
            r = std::max(r, (marg - flow.m.row(k).transpose()).lpNorm<Eigen::Infinity>());
        }
        r = std::max(r, (occ.nu - flow.m.row(K).transpose()).lpNorm<Eigen::Infinity>());
        rep.r_consistency = r;
    }

    rep.verdict = rep.max_residual() <= tol;
    return rep;
}

ResidualReport verify_ne(const MFGModel& model, const GridSpec& grid,
                         const MeanFieldFlow& flow, const OccupationMeasure& occ,
                         const DualCertificate& psi, double tol) {
    TransitionKernels kernels = transition_kernel(build_generator(model, grid, flow));
    CostTable costs = tabulate_costs(model, grid, flow);
    return verify_ne(grid, kernels, costs, model.initial_distribution, flow, occ, psi, tol);
}

std::pair<double, double> complementarity(const MFGModel& model, const GridSpec& grid,
                                          const MeanFieldFlow& flow,
                                          const OccupationMeasure& occ,
                                          const DualCertificate& psi) {
    ResidualReport rep = verify_ne(model, grid, flow, occ, psi, std::numeric_limits<double>::infinity());
    return {rep.comp_terminal_signed, rep.comp_running_signed};
}

SimulationResult simulate_consistency(const MFGModel& model, const GridSpec& grid,
                                      const Policy& policy, const MeanFieldFlow& flow,
                                      long n_paths, std::uint64_t seed) {
    TransitionKernels kernels = transition_kernel(build_generator(model, grid, flow));
    const int S = grid.num_states();
    const int K = grid.n_time;
    const Vector& rho = model.initial_distribution;

    Matrix counts = Matrix::Zero(K + 1, S);
    for (long p = 0; p < n_paths; ++p) {
        Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(p));
        int x = rng.categorical(rho);
        counts(0, x) += 1.0;
        for (int k = 0; k < K; ++k) {
            int a = rng.categorical(policy.kernel[k].row(x).transpose());
            // walk the sparse kernel row (skipping stored zeros)
            double u = rng.uniform();
            double acc = 0.0;
            int next = x;
            for (SparseMatrixRM::InnerIterator it(kernels.P[k][a], x); it; ++it) {
                if (it.value() <= 0.0) continue;
                acc += it.value();
                next = static_cast<int>(it.col());
                if (u < acc) break;
            }
            x = next;
            counts(k + 1, x) += 1.0;
        }
    }

    SimulationResult result;
    result.empirical.m = counts / static_cast<double>(n_paths);
    result.max_w1 = flow_distance(grid, result.empirical, flow);
    return result;
}

}  // namespace mfglp
