#include "mfglp/dual.hpp"

#include <cmath>

namespace mfglp {

DualCertificate DualCertificate::zero(const GridSpec& grid) {
    DualCertificate psi;
    psi.psi = Matrix::Zero(grid.n_time + 1, grid.num_states());
    return psi;
}

LinearProgram build_dual(const GridSpec& grid, const TransitionKernels& kernels,
                         const CostTable& costs, const Vector& rho) {
    const OccupationLayout layout(grid);
    const int S = layout.n_states;
    const int K = layout.n_time;
    const int A = layout.n_actions;
    const double inv_dt = 1.0 / grid.dt();

    // Variables psi(j, x) indexed exactly like the primal's constraint rows;
    // one >= row per primal column, matrix = -(primal matrix)', rhs = -cost.
    LinearProgram lp;
    lp.sense = ObjectiveSense::Maximize;
    lp.c = Vector::Zero(layout.num_rows());
    for (int x = 0; x < S; ++x) lp.c[layout.node_row(0, x)] = rho[x];
    lp.b.resize(layout.num_cols());
    lp.row_sense.assign(layout.num_cols(), RowSense::GreaterEqual);
    lp.var_bound.assign(layout.num_rows(), VarBound::Free);

    std::vector<Triplet> trip;
    trip.reserve(static_cast<std::size_t>(K) * S * A * 5 + S);
    for (int k = 0; k < K; ++k) {
        for (int x = 0; x < S; ++x) {
            for (int a = 0; a < A; ++a) {
                const int row = layout.xi_col(k, x, a);
                lp.b[row] = -costs.f[k](x, a);
                trip.emplace_back(row, layout.node_row(k, x), -inv_dt);
                for (SparseMatrixRM::InnerIterator it(kernels.P[k][a], x); it; ++it)
                    trip.emplace_back(row, layout.node_row(k + 1, static_cast<int>(it.col())),
                                      it.value() * inv_dt);
            }
        }
    }
    for (int x = 0; x < S; ++x) {
        const int row = layout.nu_col(x);
        lp.b[row] = -costs.g[x];
        trip.emplace_back(row, layout.node_row(K, x), -1.0);
    }
    lp.A.resize(layout.num_cols(), layout.num_rows());
    lp.A.setFromTriplets(trip.begin(), trip.end());
    return lp;
}

LinearProgram build_dual(const MFGModel& model, const GridSpec& grid,
                         const MeanFieldFlow& flow) {
    TransitionKernels kernels = transition_kernel(build_generator(model, grid, flow));
    CostTable costs = tabulate_costs(model, grid, flow);
    return build_dual(grid, kernels, costs, model.initial_distribution);
}

double check_dual_feasible(const DualCertificate& psi, const GridSpec& grid,
                           const TransitionKernels& kernels, const CostTable& costs) {
    const int S = grid.num_states();
    const int K = grid.n_time;
    const int A = grid.num_actions();
    const double inv_dt = 1.0 / grid.dt();

    double violation = 0.0;
    for (int x = 0; x < S; ++x)
        violation = std::max(violation, psi.psi(K, x) - costs.g[x]);
    for (int k = 0; k < K; ++k) {
        for (int x = 0; x < S; ++x) {
            for (int a = 0; a < A; ++a) {
                // (P psi[k+1] - psi[k])/dt + f  ==  d_t psi + Q psi[k+1] + f
                double pv = 0.0;
                for (SparseMatrixRM::InnerIterator it(kernels.P[k][a], x); it; ++it)
                    pv += it.value() * psi.psi(k + 1, it.col());
                double slack = (pv - psi.psi(k, x)) * inv_dt + costs.f[k](x, a);
                violation = std::max(violation, -slack);
            }
        }
    }
    return std::max(0.0, violation);
}

double check_dual_feasible(const DualCertificate& psi, const MFGModel& model,
                           const GridSpec& grid, const MeanFieldFlow& flow) {
    TransitionKernels kernels = transition_kernel(build_generator(model, grid, flow));
    CostTable costs = tabulate_costs(model, grid, flow);
    return check_dual_feasible(psi, grid, kernels, costs);
}

DualCertificate certificate_from_lp(const Vector& primal, const GridSpec& grid) {
    const int S = grid.num_states();
    if (primal.size() != (grid.n_time + 1) * S)
        throw InconsistentMeasureError("certificate_from_lp: size mismatch");
    DualCertificate out;
    out.psi.resize(grid.n_time + 1, S);
    for (int j = 0; j <= grid.n_time; ++j)
        for (int x = 0; x < S; ++x) out.psi(j, x) = primal[j * S + x];
    return out;
}

double certificate_value(const DualCertificate& psi, const Vector& rho) {
    return psi.psi.row(0).dot(rho);
}

}  // namespace mfglp
