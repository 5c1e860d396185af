#pragma once

#include "mfglp/occupation.hpp"

namespace mfglp {

/// Grid surrogate of a smooth subsolution: one value per (time node, state).
/// Feasibility (checked, never assumed) means
///   psi[n_time, x] <= g(x, mu_T)                                   and
///   (psi[k+1,x] - psi[k,x])/dt + (Q_{k,a} psi[k+1])(x) + f(k,x,a) >= -tol
/// for every (k, x, a).
struct DualCertificate {
    Matrix psi;  // (n_time+1) x S

    static DualCertificate zero(const GridSpec& grid);
};

/// The discrete dual problem for the given flow:
///   maximize sum_x rho(x) * psi[0, x]
/// over free variables psi subject to one Bellman-subsolution row per
/// (slab, state, action) and one terminal row per state. The constraint
/// matrix is exactly -(transpose of build_primal's matrix) with rhs equal to
/// -(primal costs), under the shared OccupationLayout ordering: dual row r
/// corresponds to primal column r, dual column (j*S + x) to primal row (j, x).
LinearProgram build_dual(const MFGModel& model, const GridSpec& grid,
                         const MeanFieldFlow& flow);

LinearProgram build_dual(const GridSpec& grid, const TransitionKernels& kernels,
                         const CostTable& costs, const Vector& rho);

/// Max positive violation over all terminal and Bellman constraints;
/// 0 means feasible.
double check_dual_feasible(const DualCertificate& psi, const MFGModel& model,
                           const GridSpec& grid, const MeanFieldFlow& flow);

double check_dual_feasible(const DualCertificate& psi, const GridSpec& grid,
                           const TransitionKernels& kernels, const CostTable& costs);

/// Reads psi out of an LP solution vector of build_dual (node-major layout).
DualCertificate certificate_from_lp(const Vector& primal, const GridSpec& grid);

/// Dual objective sum_x rho(x) psi[0, x].
double certificate_value(const DualCertificate& psi, const Vector& rho);

}  // namespace mfglp
