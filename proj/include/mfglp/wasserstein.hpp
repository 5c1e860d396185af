#pragma once

#include "mfglp/types.hpp"

namespace mfglp {

/// 1-Wasserstein distance between two probability vectors on the state grid.
/// Exact in 1-D via the cumulative-sum formula; in 2-D the sliced
/// approximation along the axes (mean of the two axis-marginal distances) is
/// used and is approximate.
double w1_distance(const GridSpec& grid, const Vector& p, const Vector& q);

/// Max over time nodes of w1_distance between flow rows.
double flow_distance(const GridSpec& grid, const MeanFieldFlow& a, const MeanFieldFlow& b);

}  // namespace mfglp
