#pragma once

#include <optional>
#include <string>

#include "mfglp/types.hpp"

namespace mfglp {

enum class RowSense : std::uint8_t { Equal, GreaterEqual };
enum class VarBound : std::uint8_t { NonNegative, Free };
enum class ObjectiveSense : std::uint8_t { Minimize, Maximize };

/// Sparse linear program
///   min/max  c'x   s.t.  A x {=, >=} b,  x_j >= 0 or free.
struct LinearProgram {
    ObjectiveSense sense = ObjectiveSense::Minimize;
    Vector c;
    SparseMatrix A;  // column-major, rows() == b.size(), cols() == c.size()
    Vector b;
    std::vector<RowSense> row_sense;
    std::vector<VarBound> var_bound;

    int num_rows() const { return static_cast<int>(A.rows()); }
    int num_cols() const { return static_cast<int>(A.cols()); }
    void validate() const;

    /// Plain-text sparse triplet dump (row col value per line, header with
    /// dimensions, then objective and rhs) for external cross-checking.
    std::string dump_triplets() const;
};

enum class LPStatus { Optimal, Infeasible, Unbounded };

/// Primal/dual solution pair. Dual values are one multiplier per constraint
/// row, oriented so that complementary slackness reads c'x = b'y at an
/// optimum in the problem's own sense. For Minimize, rows with sense >= have
/// y >= 0 and weak duality reads b'y <= c'x; for Maximize the returned
/// multipliers are the negatives of those of the minimized form, so >= rows
/// carry y <= 0 and weak duality reads b'y >= c'x.
struct LPSolution {
    LPStatus status = LPStatus::Optimal;
    Vector primal;
    Vector dual;
    double objective = 0.0;
    long iterations = 0;
    std::string log;
};

struct SimplexOptions {
    long max_iterations = 0;     // 0: derived from problem size
    double feas_tol = 1e-9;      // scaled by (1 + ||b||_inf)
    double opt_tol = 1e-9;       // reduced-cost threshold
    int refactor_interval = 64;  // eta vectors between basis refactorizations
    long stall_limit = 1000;     // degenerate pivots before Bland's rule kicks in
    /// Starting basis given as one structural column index per row. Accepted
    /// only for LPs with all-equality rows and all-nonnegative variables, and
    /// only when it factorizes to a feasible basic point; otherwise the solver
    /// silently falls back to the usual two-phase start.
    std::optional<std::vector<int>> warm_basis;
};

/// Two-phase revised simplex with Dantzig pricing and a Bland's-rule
/// fallback on degenerate stalls; basis factorized sparsely and updated in
/// product form. Deterministic: ties break to the lowest index everywhere.
/// Infeasible/unbounded are reported through the status, never thrown;
/// numerical breakdown throws SolverError carrying the iteration log.
LPSolution solve_lp(const LinearProgram& lp, const SimplexOptions& options = {});

/// Basis of the returned solution, exposed for warm-starting a related LP:
/// entry per row; structural column index, or -1 where a non-structural
/// (slack/artificial) column is basic.
struct SolveDetail {
    LPSolution solution;
    std::vector<int> basis;
};

SolveDetail solve_lp_detailed(const LinearProgram& lp, const SimplexOptions& options = {});

}  // namespace mfglp
