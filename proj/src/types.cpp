#include "mfglp/types.hpp"

#include <cmath>
#include <sstream>

namespace mfglp {

void GridSpec::validate() const {
    if (!(horizon > 0.0)) throw ConfigError("GridSpec: horizon must be > 0");
    if (n_time < 1) throw ConfigError("GridSpec: n_time must be >= 1");
    if (state_dim != 1 && state_dim != 2)
        throw ConfigError("GridSpec: state_dim must be 1 or 2");
    for (int d = 0; d < state_dim; ++d) {
        if (!(state_box[d][1] > state_box[d][0]))
            throw ConfigError("GridSpec: state_box must have lo < hi");
        if (n_state[d] < 2) throw ConfigError("GridSpec: n_state must be >= 2");
    }
    if (state_dim == 2 && std::abs(spacing(0) - spacing(1)) > 1e-12 * (1.0 + spacing(0)))
        throw ConfigError("GridSpec: 2-D grids require equal spacing on both axes");
    if (actions.empty()) throw ConfigError("GridSpec: actions must be nonempty");
    for (const auto& a : actions) {
        if (a.size() != state_dim)
            throw ConfigError("GridSpec: action dimension must match state_dim");
        if (!a.allFinite()) throw ConfigError("GridSpec: actions must be finite");
    }
    for (std::size_t i = 0; i < actions.size(); ++i)
        for (std::size_t j = i + 1; j < actions.size(); ++j)
            if ((actions[i] - actions[j]).lpNorm<Eigen::Infinity>() == 0.0) {
                std::ostringstream msg;
                msg << "GridSpec: duplicate actions at indices " << i << " and " << j;
                throw ConfigError(msg.str());
            }
}

void MeanFieldFlow::validate(double tol) const {
    for (Eigen::Index k = 0; k < m.rows(); ++k) {
        if (m.row(k).minCoeff() < -tol)
            throw InconsistentMeasureError("MeanFieldFlow: negative mass at node " +
                                           std::to_string(k));
        if (std::abs(m.row(k).sum() - 1.0) > tol)
            throw InconsistentMeasureError("MeanFieldFlow: row " + std::to_string(k) +
                                           " does not sum to 1");
    }
}

MeanFieldFlow uniform_flow(const GridSpec& grid) {
    const int S = grid.num_states();
    MeanFieldFlow flow;
    flow.m = Matrix::Constant(grid.n_time + 1, S, 1.0 / S);
    return flow;
}

MeanFieldFlow constant_flow(const GridSpec& grid, const Vector& dist) {
    MeanFieldFlow flow;
    flow.m.resize(grid.n_time + 1, grid.num_states());
    for (int k = 0; k <= grid.n_time; ++k) flow.m.row(k) = dist.transpose();
    return flow;
}

}  // namespace mfglp
