#include "mfglp/occupation.hpp"

#include <cmath>
#include <sstream>

namespace mfglp {

void OccupationMeasure::validate(const GridSpec& grid, double tol) const {
    const double dt = grid.dt();
    if (static_cast<int>(xi.size()) != grid.n_time)
        throw InconsistentMeasureError("OccupationMeasure: wrong number of slabs");
    for (int k = 0; k < grid.n_time; ++k) {
        if (xi[k].minCoeff() < -tol)
            throw InconsistentMeasureError("OccupationMeasure: negative mass on slab " +
                                           std::to_string(k));
        if (std::abs(xi[k].sum() - dt) > tol)
            throw InconsistentMeasureError("OccupationMeasure: slab " + std::to_string(k) +
                                           " mass " + std::to_string(xi[k].sum()) +
                                           " differs from dt");
    }
    if (nu.minCoeff() < -tol || std::abs(nu.sum() - 1.0) > tol)
        throw InconsistentMeasureError("OccupationMeasure: nu is not a probability vector");
}

Policy Policy::uniform(const GridSpec& grid) {
    Policy p;
    const int S = grid.num_states();
    const int A = grid.num_actions();
    p.kernel.assign(grid.n_time, Matrix::Constant(S, A, 1.0 / A));
    p.unconstrained.assign(grid.n_time, std::vector<std::uint8_t>(S, 0));
    return p;
}

Policy Policy::deterministic(const GridSpec& grid,
                             const std::vector<std::vector<int>>& action_index) {
    Policy p;
    const int S = grid.num_states();
    const int A = grid.num_actions();
    p.kernel.assign(grid.n_time, Matrix::Zero(S, A));
    p.unconstrained.assign(grid.n_time, std::vector<std::uint8_t>(S, 0));
    for (int k = 0; k < grid.n_time; ++k)
        for (int x = 0; x < S; ++x) p.kernel[k](x, action_index[k][x]) = 1.0;
    return p;
}

LinearProgram build_primal(const GridSpec& grid, const TransitionKernels& kernels,
                           const CostTable& costs, const Vector& rho) {
    const OccupationLayout layout(grid);
    const int S = layout.n_states;
    const int K = layout.n_time;
    const int A = layout.n_actions;
    const double inv_dt = 1.0 / grid.dt();

    LinearProgram lp;
    lp.sense = ObjectiveSense::Minimize;
    lp.c.resize(layout.num_cols());
    lp.b = Vector::Zero(layout.num_rows());
    lp.row_sense.assign(layout.num_rows(), RowSense::Equal);
    lp.var_bound.assign(layout.num_cols(), VarBound::NonNegative);

    std::vector<Triplet> trip;
    trip.reserve(static_cast<std::size_t>(K) * S * A * 5 + S);
    for (int k = 0; k < K; ++k) {
        for (int x = 0; x < S; ++x) {
            for (int a = 0; a < A; ++a) {
                const int col = layout.xi_col(k, x, a);
                lp.c[col] = costs.f[k](x, a);
                trip.emplace_back(layout.node_row(k, x), col, inv_dt);
                for (SparseMatrixRM::InnerIterator it(kernels.P[k][a], x); it; ++it)
                    trip.emplace_back(layout.node_row(k + 1, static_cast<int>(it.col())), col,
                                      -it.value() * inv_dt);
            }
        }
    }
    for (int x = 0; x < S; ++x) {
        const int col = layout.nu_col(x);
        lp.c[col] = costs.g[x];
        trip.emplace_back(layout.node_row(K, x), col, 1.0);
        lp.b[layout.node_row(0, x)] = rho[x];
    }
    lp.A.resize(layout.num_rows(), layout.num_cols());
    lp.A.setFromTriplets(trip.begin(), trip.end());
    return lp;
}

LinearProgram build_primal(const MFGModel& model, const GridSpec& grid,
                           const MeanFieldFlow& flow) {
    TransitionKernels kernels = transition_kernel(build_generator(model, grid, flow));
    CostTable costs = tabulate_costs(model, grid, flow);
    return build_primal(grid, kernels, costs, model.initial_distribution);
}

MeanFieldFlow marginals(const OccupationMeasure& occ, const GridSpec& grid) {
    occ.validate(grid);
    const int S = grid.num_states();
    MeanFieldFlow flow;
    flow.m.resize(grid.n_time + 1, S);
    const double inv_dt = 1.0 / grid.dt();
    for (int k = 0; k < grid.n_time; ++k)
        flow.m.row(k) = inv_dt * occ.xi[k].rowwise().sum().transpose();
    flow.m.row(grid.n_time) = occ.nu.transpose();
    return flow;
}

Policy disintegrate(const OccupationMeasure& occ, const GridSpec& grid, double mass_floor) {
    const int S = grid.num_states();
    const int A = grid.num_actions();
    Policy policy;
    policy.kernel.assign(grid.n_time, Matrix::Zero(S, A));
    policy.unconstrained.assign(grid.n_time, std::vector<std::uint8_t>(S, 0));
    for (int k = 0; k < grid.n_time; ++k) {
        for (int x = 0; x < S; ++x) {
            double mass = occ.xi[k].row(x).sum();
            if (mass > mass_floor) {
                policy.kernel[k].row(x) = occ.xi[k].row(x) / mass;
            } else {
                policy.kernel[k].row(x).setConstant(1.0 / A);
                policy.unconstrained[k][x] = 1;
            }
        }
    }
    return policy;
}

Propagation propagate_policy(const Policy& policy, const TransitionKernels& kernels,
                             const Vector& rho, const GridSpec& grid) {
    const int S = grid.num_states();
    const int A = grid.num_actions();
    const int K = grid.n_time;
    const double dt = grid.dt();

    Propagation out;
    out.flow.m.resize(K + 1, S);
    out.flow.m.row(0) = rho.transpose();
    out.occupation.xi.assign(K, Matrix::Zero(S, A));

    for (int k = 0; k < K; ++k) {
        Vector next = Vector::Zero(S);
        for (int x = 0; x < S; ++x) {
            const double mx = out.flow.m(k, x);
            if (mx == 0.0) continue;
            for (int a = 0; a < A; ++a) {
                const double w = mx * policy.kernel[k](x, a);
                if (w == 0.0) continue;
                out.occupation.xi[k](x, a) = dt * w;
                for (SparseMatrixRM::InnerIterator it(kernels.P[k][a], x); it; ++it)
                    next[it.col()] += w * it.value();
            }
        }
        out.flow.m.row(k + 1) = next.transpose();
    }
    out.occupation.nu = out.flow.m.row(K).transpose();
    return out;
}

OccupationMeasure occupation_from_lp(const Vector& primal, const GridSpec& grid) {
    const OccupationLayout layout(grid);
    if (primal.size() != layout.num_cols())
        throw InconsistentMeasureError("occupation_from_lp: size mismatch");
    OccupationMeasure occ;
    occ.xi.assign(layout.n_time, Matrix::Zero(layout.n_states, layout.n_actions));
    for (int k = 0; k < layout.n_time; ++k)
        for (int x = 0; x < layout.n_states; ++x)
            for (int a = 0; a < layout.n_actions; ++a) {
                double v = primal[layout.xi_col(k, x, a)];
                occ.xi[k](x, a) = v < 0.0 ? 0.0 : v;  // solver noise only
            }
    occ.nu.resize(layout.n_states);
    for (int x = 0; x < layout.n_states; ++x)
        occ.nu[x] = std::max(0.0, primal[layout.nu_col(x)]);
    return occ;
}

double occupation_cost(const OccupationMeasure& occ, const CostTable& costs) {
    double acc = 0.0;
    for (std::size_t k = 0; k < occ.xi.size(); ++k)
        acc += (occ.xi[k].array() * costs.f[k].array()).sum();
    return acc + costs.g.dot(occ.nu);
}

}  // namespace mfglp
