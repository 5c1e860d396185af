#pragma once

#include <map>

#include "mfglp/model.hpp"
#include "mfglp/rng.hpp"
#include "mfglp/types.hpp"

namespace mfglp::testing {

inline Vector action1(double a) {
    Vector v(1);
    v[0] = a;
    return v;
}

inline GridSpec grid_1d(double lo, double hi, int n_state, double horizon, int n_time,
                        std::vector<double> actions) {
    GridSpec grid;
    grid.horizon = horizon;
    grid.n_time = n_time;
    grid.state_dim = 1;
    grid.state_box[0] = {lo, hi};
    grid.n_state = {n_state, 1};
    for (double a : actions) grid.actions.push_back(action1(a));
    grid.validate();
    return grid;
}

// The aligned example-2 grid: h = dt so that drift +-1 moves exactly one
// cell per slab.
inline GridSpec example2_grid(double x0 = 0.5, double horizon = 0.5, double h = 0.025) {
    int n_time = static_cast<int>(horizon / h + 0.5);
    int n_state = static_cast<int>((2.0 - (-1.0)) / h + 1.5);
    (void)x0;
    return grid_1d(-1.0, 2.0, n_state, horizon, n_time, {-1.0, 1.0});
}

// A bounded 1-D model with random finite-action drifts, uniformly elliptic
// diffusion and smooth random costs. The horizon is set from the stability
// bound of the resulting rates.
struct RandomModel {
    GridSpec grid;
    MFGModel model;
};

inline RandomModel random_model(std::uint64_t seed, int n_state = 41, int n_time = 20,
                                int n_actions = 2) {
    Rng rng(seed);
    std::vector<double> actions;
    for (int a = 0; a < n_actions; ++a) actions.push_back(rng.uniform(-1.0, 1.0));

    GridSpec grid = grid_1d(-1.0, 1.0, n_state, 1.0, n_time, actions);
    const double h = grid.h();

    const double sig2 = rng.uniform(0.5, 1.5);        // sigma*sigma' >= 0.5
    const double drift_scale = rng.uniform(0.5, 2.0);
    const double fa = rng.uniform(-1.0, 1.0);
    const double fx = rng.uniform(0.0, 3.0);
    const double ft = rng.uniform(-1.0, 1.0);
    const double gname = rng.uniform(-2.0, 2.0);
    const double gcurv = rng.uniform(0.0, 2.0);

    // Largest outflow rate: diffusion + worst drift; pick dt at 90% of the
    // stability bound.
    double max_rate = sig2 / (h * h) + drift_scale / h;
    grid.horizon = 0.9 * n_time / max_rate;

    MFGModel model;
    model.name = "random";
    model.coupling_kind = CouplingKind::none;
    model.drift = [drift_scale](double, const Vector& x, const Vector& a, const Vector&) {
        Vector b(1);
        b[0] = drift_scale * a[0] * std::cos(2.0 * x[0]);
        return b;
    };
    model.diffusion = [sig2](double, const Vector&, const Vector&, const Vector&) {
        Matrix s(1, 1);
        s(0, 0) = std::sqrt(sig2);
        return s;
    };
    model.running_cost = [fa, fx, ft](double t, const Vector& x, const Vector& a,
                                      const Vector&) {
        return fa * a[0] + fx * std::sin(1.7 * x[0]) * std::sin(1.7 * x[0]) + ft * t;
    };
    model.terminal_cost = [gname, gcurv](const Vector& x, const Vector&) {
        return gname * x[0] + gcurv * x[0] * x[0];
    };
    model.initial_distribution = gaussian_distribution(grid, Vector::Zero(1),
                                                       Vector::Constant(1, 0.4));
    return {grid, model};
}

}  // namespace mfglp::testing
