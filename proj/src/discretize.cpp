#include "mfglp/discretize.hpp"

#include <cmath>
#include <sstream>

namespace mfglp {

namespace {

void check_covariance(const GridSpec& grid, const Matrix& cov, double t, int x, int action) {
    if (grid.state_dim == 1) {
        if (cov(0, 0) < -1e-12) {
            std::ostringstream msg;
            msg << "negative diffusion at t=" << t << ", state " << x << ", action " << action;
            throw DiscretizationError(msg.str());
        }
        return;
    }
    const double cross = cov(0, 1);
    if (cov(0, 0) < -1e-12 || cov(1, 1) < -1e-12 ||
        cov(0, 0) * cov(1, 1) - cross * cross < -1e-10) {
        std::ostringstream msg;
        msg << "covariance not PSD at t=" << t << ", state " << x << ", action " << action;
        throw DiscretizationError(msg.str());
    }
    if (std::abs(cross) > std::min(cov(0, 0), cov(1, 1)) + 1e-12) {
        std::ostringstream msg;
        msg << "cross-diffusion |Sigma01|=" << std::abs(cross)
            << " exceeds min(Sigma00, Sigma11)=" << std::min(cov(0, 0), cov(1, 1)) << " at t=" << t
            << ", state " << x << ", action " << action << "; stencil not positive";
        throw DiscretizationError(msg.str());
    }
}

// One generator row of the upwind stencil. Rates pointing off the grid are
// dropped, which reflects the chain at the boundary and keeps the row
// conservative.
void emit_row(const GridSpec& grid, int x, const Vector& b, const Matrix& cov,
              std::vector<Triplet>& triplets) {
    const double h = grid.h();
    const double inv_h2 = 1.0 / (h * h);
    const auto mi = grid.multi_index(x);

    double diag = 0.0;
    auto add_rate = [&](int di0, int di1, double rate) {
        if (rate <= 0.0) return;
        int i0 = mi[0] + di0;
        int i1 = mi[1] + di1;
        if (i0 < 0 || i0 >= grid.n_state[0]) return;  // reflected
        if (grid.state_dim == 2 && (i1 < 0 || i1 >= grid.n_state[1])) return;
        triplets.emplace_back(x, grid.flat_index(i0, i1), rate);
        diag -= rate;
    };

    const double cross = grid.state_dim == 2 ? cov(0, 1) : 0.0;
    for (int d = 0; d < grid.state_dim; ++d) {
        double axial = 0.5 * (cov(d, d) - std::abs(cross)) * inv_h2;
        double up = axial + std::max(b[d], 0.0) / h;
        double down = axial + std::max(-b[d], 0.0) / h;
        if (d == 0) {
            add_rate(+1, 0, up);
            add_rate(-1, 0, down);
        } else {
            add_rate(0, +1, up);
            add_rate(0, -1, down);
        }
    }
    if (cross > 0.0) {
        double r = 0.5 * cross * inv_h2;
        add_rate(+1, +1, r);
        add_rate(-1, -1, r);
    } else if (cross < 0.0) {
        double r = -0.5 * cross * inv_h2;
        add_rate(+1, -1, r);
        add_rate(-1, +1, r);
    }
    if (diag != 0.0) triplets.emplace_back(x, x, diag);
}

}  // namespace

DiscreteGenerator build_generator(const MFGModel& model, const GridSpec& grid,
                                  const MeanFieldFlow& flow) {
    grid.validate();
    if (flow.m.rows() != grid.n_time + 1 || flow.m.cols() != grid.num_states())
        throw DiscretizationError("build_generator: flow shape mismatch");
    flow.validate(1e-9);

    const int S = grid.num_states();
    const int K = grid.n_time;
    const int A = grid.num_actions();
    const double dt = grid.dt();

    DiscreteGenerator gen;
    gen.dt = dt;
    gen.rates.resize(K);

    double max_outflow = 0.0;
    for (int k = 0; k < K; ++k) {
        const double t = k * dt;
        const Vector mu = flow.m.row(k).transpose();
        gen.rates[k].reserve(A);
        for (int a = 0; a < A; ++a) {
            std::vector<Triplet> triplets;
            triplets.reserve(static_cast<std::size_t>(S) * (2 * grid.state_dim + 3));
            for (int x = 0; x < S; ++x) {
                EvalResult e = evaluate(model, grid, t, grid.state_coord(x), grid.actions[a], mu);
                check_covariance(grid, e.covariance, t, x, a);
                emit_row(grid, x, e.drift, e.covariance, triplets);
            }
            SparseMatrixRM Q(S, S);
            Q.setFromTriplets(triplets.begin(), triplets.end());
            for (int x = 0; x < S; ++x)
                max_outflow = std::max(max_outflow, -Q.coeff(x, x));
            gen.rates[k].push_back(std::move(Q));
        }
    }

    if (dt * max_outflow > 1.0 + 1e-12) {
        std::ostringstream msg;
        msg << "explicit step unstable: dt=" << dt << " exceeds the admissible maximum "
            << 1.0 / max_outflow << " (largest total outflow rate " << max_outflow << ")";
        throw StabilityError(msg.str());
    }
    return gen;
}

TransitionKernels transition_kernel(const DiscreteGenerator& gen) {
    TransitionKernels kernels;
    kernels.dt = gen.dt;
    kernels.P.resize(gen.rates.size());
    for (std::size_t k = 0; k < gen.rates.size(); ++k) {
        kernels.P[k].reserve(gen.rates[k].size());
        for (const auto& Q : gen.rates[k]) {
            SparseMatrixRM P(Q.rows(), Q.cols());
            P.setIdentity();
            P += gen.dt * Q;
            for (int x = 0; x < P.outerSize(); ++x) {
                double row_sum = 0.0;
                for (SparseMatrixRM::InnerIterator it(P, x); it; ++it) {
                    if (it.value() < -1e-12) {
                        std::ostringstream msg;
                        msg << "transition kernel entry P(" << x << "," << it.col() << ")="
                            << it.value() << " negative; generator violates stability";
                        throw StabilityError(msg.str());
                    }
                    row_sum += it.value();
                }
                if (std::abs(row_sum - 1.0) > 1e-12) {
                    std::ostringstream msg;
                    msg << "transition kernel row " << x << " sums to " << row_sum;
                    throw StabilityError(msg.str());
                }
            }
            kernels.P[k].push_back(std::move(P));
        }
    }
    return kernels;
}

CostTable tabulate_costs(const MFGModel& model, const GridSpec& grid,
                         const MeanFieldFlow& flow) {
    const int S = grid.num_states();
    const int K = grid.n_time;
    const int A = grid.num_actions();
    const double dt = grid.dt();

    CostTable table;
    table.f.resize(K);
    for (int k = 0; k < K; ++k) {
        const double t = k * dt;
        const Vector mu = flow.m.row(k).transpose();
        table.f[k].resize(S, A);
        for (int x = 0; x < S; ++x) {
            Vector coord = grid.state_coord(x);
            for (int a = 0; a < A; ++a)
                table.f[k](x, a) = evaluate(model, grid, t, coord, grid.actions[a], mu).cost;
        }
    }
    table.g.resize(S);
    const Vector mu_T = flow.m.row(K).transpose();
    for (int x = 0; x < S; ++x) {
        double g = model.terminal_cost(grid.state_coord(x), mu_T);
        if (!std::isfinite(g))
            throw ModelError("model '" + model.name + "': non-finite terminal cost at state " +
                             std::to_string(x));
        table.g[x] = g;
    }
    return table;
}

}  // namespace mfglp
