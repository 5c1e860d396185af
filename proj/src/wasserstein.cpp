#include "mfglp/wasserstein.hpp"

#include <cmath>

namespace mfglp {

namespace {

// W1 on a uniform 1-D grid: spacing times the L1 norm of the cdf difference.
double w1_line(const Vector& p, const Vector& q, double h) {
    double acc = 0.0;
    double cdf_gap = 0.0;
    for (int i = 0; i + 1 < p.size(); ++i) {
        cdf_gap += p[i] - q[i];
        acc += std::abs(cdf_gap);
    }
    return h * acc;
}

}  // namespace

double w1_distance(const GridSpec& grid, const Vector& p, const Vector& q) {
    if (grid.state_dim == 1) return w1_line(p, q, grid.spacing(0));

    // Sliced along the axes: mean of the axis-marginal distances.
    Vector p0 = Vector::Zero(grid.n_state[0]), q0 = Vector::Zero(grid.n_state[0]);
    Vector p1 = Vector::Zero(grid.n_state[1]), q1 = Vector::Zero(grid.n_state[1]);
    for (int x = 0; x < grid.num_states(); ++x) {
        auto mi = grid.multi_index(x);
        p0[mi[0]] += p[x];
        q0[mi[0]] += q[x];
        p1[mi[1]] += p[x];
        q1[mi[1]] += q[x];
    }
    return 0.5 * (w1_line(p0, q0, grid.spacing(0)) + w1_line(p1, q1, grid.spacing(1)));
}

double flow_distance(const GridSpec& grid, const MeanFieldFlow& a, const MeanFieldFlow& b) {
    double acc = 0.0;
    for (Eigen::Index k = 0; k < a.m.rows(); ++k)
        acc = std::max(acc, w1_distance(grid, a.m.row(k).transpose(), b.m.row(k).transpose()));
    return acc;
}

}  // namespace mfglp
