#include "mfglp/lp_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/SparseLU>

namespace mfglp {

void LinearProgram::validate() const {
    const int m = num_rows();
    const int n = num_cols();
    if (c.size() != n) throw SolverError("LinearProgram: objective size mismatch");
    if (b.size() != m) throw SolverError("LinearProgram: rhs size mismatch");
    if (static_cast<int>(row_sense.size()) != m)
        throw SolverError("LinearProgram: row_sense size mismatch");
    if (static_cast<int>(var_bound.size()) != n)
        throw SolverError("LinearProgram: var_bound size mismatch");
    if (!c.allFinite() || !b.allFinite())
        throw SolverError("LinearProgram: non-finite objective or rhs");
    for (int j = 0; j < A.outerSize(); ++j)
        for (SparseMatrix::InnerIterator it(A, j); it; ++it)
            if (!std::isfinite(it.value()))
                throw SolverError("LinearProgram: non-finite matrix entry");
}

std::string LinearProgram::dump_triplets() const {
    std::ostringstream os;
    os.precision(17);
    os << "# rows cols nnz sense\n"
       << num_rows() << " " << num_cols() << " " << A.nonZeros() << " "
       << (sense == ObjectiveSense::Minimize ? "min" : "max") << "\n# row col value\n";
    for (int j = 0; j < A.outerSize(); ++j)
        for (SparseMatrix::InnerIterator it(A, j); it; ++it)
            os << it.row() << " " << j << " " << it.value() << "\n";
    os << "# objective\n";
    for (int j = 0; j < num_cols(); ++j) os << j << " " << c[j] << "\n";
    os << "# rhs (sense: 0 '=', 1 '>=')\n";
    for (int i = 0; i < num_rows(); ++i)
        os << i << " " << b[i] << " " << (row_sense[i] == RowSense::Equal ? 0 : 1) << "\n";
    return os.str();
}

namespace {

constexpr double kPivotTol = 1e-9;  // smallest acceptable pivot magnitude
constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Internal column-major matrix of the computational form
//   min cost'x  s.t.  N x = b', 0 <= x_j <= ub_j,
// holding structural columns (free variables split), surplus columns for >=
// rows and one artificial per row. Rows are sign-normalized so b' >= 0.
struct Tableau {
    int m = 0;            // rows
    int n_total = 0;      // all internal columns
    int first_surplus = 0;
    int first_artificial = 0;

    std::vector<int> col_ptr;
    std::vector<int> row_idx;
    std::vector<double> values;
    Vector cost;      // phase-2 costs (0 on surplus and artificials)
    Vector rhs;       // sign-normalized b
    std::vector<double> flip;  // +1/-1 applied per row
    // structural mapping: plus_col[j] always, minus_col[j] >= 0 for free vars
    std::vector<int> plus_col, minus_col;

    bool is_artificial(int col) const { return col >= first_artificial; }

    double col_dot(int col, const Vector& y) const {
        double acc = 0.0;
        for (int p = col_ptr[col]; p < col_ptr[col + 1]; ++p)
            acc += values[p] * y[row_idx[p]];
        return acc;
    }
};

Tableau build_tableau(const LinearProgram& lp) {
    const int m = lp.num_rows();
    const int n = lp.num_cols();
    Tableau t;
    t.m = m;
    t.flip.assign(m, 1.0);
    for (int i = 0; i < m; ++i)
        if (lp.b[i] < 0.0) t.flip[i] = -1.0;

    int n_ge = 0;
    for (auto s : lp.row_sense)
        if (s == RowSense::GreaterEqual) ++n_ge;
    int n_minus = 0;
    for (auto vb : lp.var_bound)
        if (vb == VarBound::Free) ++n_minus;

    const int n_structural = n + n_minus;
    t.first_surplus = n_structural;
    t.first_artificial = n_structural + n_ge;
    t.n_total = t.first_artificial + m;

    t.plus_col.resize(n);
    t.minus_col.assign(n, -1);
    t.cost = Vector::Zero(t.n_total);
    t.rhs.resize(m);
    for (int i = 0; i < m; ++i) t.rhs[i] = lp.b[i] * t.flip[i];

    const double obj_sign = lp.sense == ObjectiveSense::Minimize ? 1.0 : -1.0;

    t.col_ptr.reserve(t.n_total + 1);
    t.col_ptr.push_back(0);
    auto push_entry = [&](int row, double value) {
        if (value == 0.0) return;
        t.row_idx.push_back(row);
        t.values.push_back(value * t.flip[row]);
    };

    int next = 0;
    for (int j = 0; j < n; ++j) {
        t.plus_col[j] = next++;
        for (SparseMatrix::InnerIterator it(lp.A, j); it; ++it)
            push_entry(static_cast<int>(it.row()), it.value());
        t.col_ptr.push_back(static_cast<int>(t.row_idx.size()));
        t.cost[t.plus_col[j]] = obj_sign * lp.c[j];
    }
    for (int j = 0; j < n; ++j) {
        if (lp.var_bound[j] != VarBound::Free) continue;
        t.minus_col[j] = next++;
        for (SparseMatrix::InnerIterator it(lp.A, j); it; ++it)
            push_entry(static_cast<int>(it.row()), -it.value());
        t.col_ptr.push_back(static_cast<int>(t.row_idx.size()));
        t.cost[t.minus_col[j]] = -obj_sign * lp.c[j];
    }
    for (int i = 0; i < m; ++i) {
        if (lp.row_sense[i] != RowSense::GreaterEqual) continue;
        push_entry(i, -1.0);
        t.col_ptr.push_back(static_cast<int>(t.row_idx.size()));
        ++next;
    }
    for (int i = 0; i < m; ++i) {
        t.row_idx.push_back(i);
        t.values.push_back(1.0);
        t.col_ptr.push_back(static_cast<int>(t.row_idx.size()));
        ++next;
    }
    return t;
}

struct Eta {
    int pivot_row;
    std::vector<std::pair<int, double>> u;
};

// Basis handle: sparse LU of the basis matrix plus product-form updates.
class BasisInverse {
  public:
    BasisInverse(const Tableau& tab, int refactor_interval)
        : tab_(tab), refactor_interval_(refactor_interval) {}

    bool factorize(const std::vector<int>& basic_cols) {
        std::vector<Triplet> trip;
        trip.reserve(basic_cols.size() * 4);
        for (int r = 0; r < tab_.m; ++r) {
            int col = basic_cols[r];
            for (int p = tab_.col_ptr[col]; p < tab_.col_ptr[col + 1]; ++p)
                trip.emplace_back(tab_.row_idx[p], r, tab_.values[p]);
        }
        SparseMatrix B(tab_.m, tab_.m);
        B.setFromTriplets(trip.begin(), trip.end());
        lu_.compute(B);
        if (lu_.info() != Eigen::Success) return false;
        etas_.clear();
        ++refactor_count_;
        return true;
    }

    bool needs_refactor() const {
        return static_cast<int>(etas_.size()) >= refactor_interval_;
    }

    // x := B^{-1} v
    void ftran(Vector& v) const {
        v = lu_.solve(v);
        for (const auto& e : etas_) {
            double piv = v[e.pivot_row];
            if (piv != 0.0)
                for (const auto& [row, val] : e.u) v[row] += val * piv;
        }
    }

    // y := B^{-T} v
    void btran(Vector& v) const {
        for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
            double acc = 0.0;
            for (const auto& [row, val] : it->u) acc += val * v[row];
            v[it->pivot_row] += acc;
        }
        v = lu_.adjoint().solve(v);
    }

    // Record the pivot B e_r <- a_q given the spike w = B^{-1} a_q.
    void push_eta(int r, const Vector& w) {
        Eta e;
        e.pivot_row = r;
        const double wr = w[r];
        e.u.reserve(16);
        for (int i = 0; i < w.size(); ++i) {
            double ui = (i == r) ? (1.0 / wr - 1.0) : (-w[i] / wr);
            if (std::abs(ui) > 1e-14) e.u.emplace_back(i, ui);
        }
        etas_.push_back(std::move(e));
    }

    long refactor_count() const { return refactor_count_; }

  private:
    const Tableau& tab_;
    int refactor_interval_;
    mutable Eigen::SparseLU<SparseMatrix> lu_;  // adjoint() is non-const in Eigen
    std::vector<Eta> etas_;
    long refactor_count_ = 0;
};

struct SimplexState {
    std::vector<int> basic_cols;   // internal column per basis position
    std::vector<int> position_of;  // internal column -> basis position or -1
    Vector x_basic;
    bool phase_one = false;
    Vector ub;  // upper bounds (artificials drop to 0 in phase 2)
};

class Simplex {
  public:
    Simplex(const Tableau& tab, const SimplexOptions& opt) : tab_(tab), opt_(opt),
        basis_(tab, opt.refactor_interval) {}

    // Returns Optimal/Infeasible/Unbounded; throws SolverError on breakdown.
    LPStatus run(const std::optional<std::vector<int>>& warm_internal) {
        state_.position_of.assign(tab_.n_total, -1);
        state_.ub = Vector::Constant(tab_.n_total, kInfinity);

        bool warm_ok = false;
        if (warm_internal) warm_ok = try_warm_start(*warm_internal);
        if (!warm_ok) {
            state_.basic_cols.resize(tab_.m);
            std::fill(state_.position_of.begin(), state_.position_of.end(), -1);
            for (int i = 0; i < tab_.m; ++i) {
                int col = tab_.first_artificial + i;
                state_.basic_cols[i] = col;
                state_.position_of[col] = i;
            }
            if (!basis_.factorize(state_.basic_cols))
                throw SolverError("simplex: identity basis failed to factorize\n" + log_.str());
            state_.x_basic = tab_.rhs;

            state_.phase_one = true;
            LPStatus s = iterate(phase_one_costs());
            if (s != LPStatus::Optimal)
                throw SolverError("simplex: phase 1 did not terminate optimal\n" + log_.str());
            double infeas = phase_one_objective();
            log_ << "phase1 objective " << infeas << " after " << iterations_ << " iterations\n";
            if (infeas > opt_.feas_tol * (1.0 + tab_.rhs.lpNorm<Eigen::Infinity>()))
                return LPStatus::Infeasible;
        }

        state_.phase_one = false;
        for (int i = 0; i < tab_.m; ++i) state_.ub[tab_.first_artificial + i] = 0.0;
        LPStatus s = iterate(tab_.cost);
        log_ << "phase2 status " << static_cast<int>(s) << " after " << iterations_
             << " total iterations, " << basis_.refactor_count() << " refactorizations\n";
        return s;
    }

    const SimplexState& state() const { return state_; }
    long iterations() const { return iterations_; }
    std::string log() const { return log_.str(); }

    Vector dual_values() const {
        Vector c_b(tab_.m);
        for (int r = 0; r < tab_.m; ++r) c_b[r] = tab_.cost[state_.basic_cols[r]];
        Vector y = c_b;
        basis_.btran(y);
        return y;
    }

  private:
    Vector phase_one_costs() const {
        Vector c = Vector::Zero(tab_.n_total);
        for (int i = 0; i < tab_.m; ++i) c[tab_.first_artificial + i] = 1.0;
        return c;
    }

    double phase_one_objective() const {
        double acc = 0.0;
        for (int r = 0; r < tab_.m; ++r)
            if (tab_.is_artificial(state_.basic_cols[r])) acc += std::max(0.0, state_.x_basic[r]);
        return acc;
    }

    bool try_warm_start(const std::vector<int>& cols) {
        if (static_cast<int>(cols.size()) != tab_.m) return false;
        std::vector<int> seen(tab_.n_total, 0);
        for (int col : cols) {
            if (col < 0 || col >= tab_.first_artificial) return false;
            if (seen[col]++) return false;
        }
        if (!basis_.factorize(cols)) return false;
        Vector x = tab_.rhs;
        basis_.ftran(x);
        if (x.minCoeff() < -1e-11) return false;
        state_.basic_cols = cols;
        for (int r = 0; r < tab_.m; ++r) state_.position_of[cols[r]] = r;
        state_.x_basic = x;
        log_ << "warm start accepted\n";
        return true;
    }

    LPStatus iterate(const Vector& cost) {
        const long max_iter = opt_.max_iterations > 0
                                  ? opt_.max_iterations
                                  : std::max<long>(20000, 50L * (tab_.m + tab_.n_total));
        bool bland = false;
        long stall = 0;
        double last_obj = current_objective(cost);
        int reverify_budget = 3;

        while (true) {
            if (++iterations_ > max_iter)
                throw SolverError("simplex: iteration limit " + std::to_string(max_iter) +
                                  " exceeded\n" + log_.str());

            Vector y(tab_.m);
            for (int r = 0; r < tab_.m; ++r) y[r] = cost[state_.basic_cols[r]];
            basis_.btran(y);

            int entering = pick_entering(cost, y, bland);
            if (entering < 0) {
                // Re-verify from a fresh factorization before declaring victory.
                if (reverify_budget-- > 0 && refresh_basis()) {
                    Vector y2(tab_.m);
                    for (int r = 0; r < tab_.m; ++r) y2[r] = cost[state_.basic_cols[r]];
                    basis_.btran(y2);
                    if (pick_entering(cost, y2, bland) >= 0) continue;
                }
                return LPStatus::Optimal;
            }

            Vector w = Vector::Zero(tab_.m);
            for (int p = tab_.col_ptr[entering]; p < tab_.col_ptr[entering + 1]; ++p)
                w[tab_.row_idx[p]] = tab_.values[p];
            basis_.ftran(w);

            int leave_pos = pick_leaving(w, bland);
            if (leave_pos < 0) {
                if (state_.phase_one)
                    throw SolverError("simplex: phase 1 unbounded (internal error)\n" +
                                      log_.str());
                return LPStatus::Unbounded;
            }

            double step = ratio_at(leave_pos, w);
            for (int r = 0; r < tab_.m; ++r) state_.x_basic[r] -= step * w[r];
            int leaving_col = state_.basic_cols[leave_pos];
            state_.position_of[leaving_col] = -1;
            state_.basic_cols[leave_pos] = entering;
            state_.position_of[entering] = leave_pos;
            state_.x_basic[leave_pos] = step;

            basis_.push_eta(leave_pos, w);
            if (basis_.needs_refactor() && !refresh_basis())
                throw SolverError("simplex: basis refactorization failed\n" + log_.str());

            double obj = current_objective(cost);
            if (obj < last_obj - 1e-12 * (1.0 + std::abs(last_obj))) {
                stall = 0;
                if (bland) bland = false;
            } else if (++stall > opt_.stall_limit && !bland) {
                bland = true;
                log_ << "switching to Bland's rule at iteration " << iterations_ << "\n";
            }
            last_obj = obj;
        }
    }

    bool refresh_basis() {
        if (!basis_.factorize(state_.basic_cols)) return false;
        Vector x = tab_.rhs;
        basis_.ftran(x);
        state_.x_basic = x;
        return true;
    }

    // Artificial columns never re-enter; everything else is priced each pass.
    int pick_entering(const Vector& cost, const Vector& y, bool bland) const {
        int best = -1;
        double best_d = -opt_.opt_tol;
        for (int j = 0; j < tab_.first_artificial; ++j) {
            if (state_.position_of[j] >= 0) continue;
            double d = cost[j] - tab_.col_dot(j, y);
            if (d < best_d) {
                if (bland) return j;
                best_d = d;
                best = j;
            }
        }
        return best;
    }

    double ratio_at(int pos, const Vector& w) const {
        double wr = w[pos];
        if (wr > 0.0) return std::max(0.0, state_.x_basic[pos] / wr);
        return std::max(0.0, (state_.x_basic[pos] - state_.ub[state_.basic_cols[pos]]) / wr);
    }

    int pick_leaving(const Vector& w, bool bland) const {
        double best_ratio = kInfinity;
        for (int r = 0; r < tab_.m; ++r) {
            double ratio = blocking_ratio(r, w);
            if (ratio < best_ratio) best_ratio = ratio;
        }
        if (best_ratio == kInfinity) return -1;

        const double tie = best_ratio + 1e-10 * (1.0 + best_ratio);
        int chosen = -1;
        if (bland) {
            int best_col = std::numeric_limits<int>::max();
            for (int r = 0; r < tab_.m; ++r)
                if (blocking_ratio(r, w) <= tie && state_.basic_cols[r] < best_col) {
                    best_col = state_.basic_cols[r];
                    chosen = r;
                }
        } else {
            double best_weight = -1.0;
            for (int r = 0; r < tab_.m; ++r) {
                if (blocking_ratio(r, w) > tie) continue;
                bool artificial = tab_.is_artificial(state_.basic_cols[r]);
                double weight = std::abs(w[r]) + (artificial ? 1e6 : 0.0);
                if (weight > best_weight) {
                    best_weight = weight;
                    chosen = r;
                }
            }
        }
        return chosen;
    }

    double blocking_ratio(int r, const Vector& w) const {
        if (w[r] > kPivotTol) return std::max(0.0, state_.x_basic[r] / w[r]);
        if (w[r] < -kPivotTol) {
            double ub = state_.ub[state_.basic_cols[r]];
            if (ub < kInfinity) return std::max(0.0, (state_.x_basic[r] - ub) / w[r]);
        }
        return kInfinity;
    }

    double current_objective(const Vector& cost) const {
        double acc = 0.0;
        for (int r = 0; r < tab_.m; ++r) acc += cost[state_.basic_cols[r]] * state_.x_basic[r];
        return acc;
    }

    const Tableau& tab_;
    const SimplexOptions& opt_;
    BasisInverse basis_;
    SimplexState state_;
    long iterations_ = 0;
    std::ostringstream log_;
};

}  // namespace

SolveDetail solve_lp_detailed(const LinearProgram& lp, const SimplexOptions& options) {
    lp.validate();
    const int m = lp.num_rows();
    const int n = lp.num_cols();

    SolveDetail detail;
    LPSolution& sol = detail.solution;

    if (m == 0) {
        // No constraints: x = 0 is optimal iff no improving direction exists.
        sol.primal = Vector::Zero(n);
        sol.dual = Vector(0);
        const double sign = lp.sense == ObjectiveSense::Minimize ? 1.0 : -1.0;
        for (int j = 0; j < n; ++j) {
            double cj = sign * lp.c[j];
            bool unbounded = lp.var_bound[j] == VarBound::Free ? cj != 0.0 : cj < 0.0;
            if (unbounded) {
                sol.status = LPStatus::Unbounded;
                return detail;
            }
        }
        sol.status = LPStatus::Optimal;
        sol.objective = 0.0;
        return detail;
    }

    Tableau tab = build_tableau(lp);

    std::optional<std::vector<int>> warm_internal;
    if (options.warm_basis) {
        bool plain = true;  // warm starts only for all-=, all->=0 problems
        for (auto s : lp.row_sense)
            if (s != RowSense::Equal) plain = false;
        for (auto vb : lp.var_bound)
            if (vb != VarBound::NonNegative) plain = false;
        if (plain && static_cast<int>(options.warm_basis->size()) == m) {
            warm_internal = std::vector<int>();
            warm_internal->reserve(m);
            bool ok = true;
            for (int j : *options.warm_basis) {
                if (j < 0 || j >= n) {
                    ok = false;
                    break;
                }
                warm_internal->push_back(tab.plus_col[j]);
            }
            if (!ok) warm_internal.reset();
        }
    }

    Simplex simplex(tab, options);
    LPStatus status = simplex.run(warm_internal);
    sol.status = status;
    sol.iterations = simplex.iterations();
    sol.log = simplex.log();
    if (status != LPStatus::Optimal) return detail;

    const SimplexState& state = simplex.state();
    sol.primal = Vector::Zero(n);
    for (int j = 0; j < n; ++j) {
        int pos = state.position_of[tab.plus_col[j]];
        double v = pos >= 0 ? state.x_basic[pos] : 0.0;
        if (tab.minus_col[j] >= 0) {
            int neg = state.position_of[tab.minus_col[j]];
            v -= neg >= 0 ? state.x_basic[neg] : 0.0;
        }
        sol.primal[j] = v;
    }

    const double sign = lp.sense == ObjectiveSense::Minimize ? 1.0 : -1.0;
    Vector y = simplex.dual_values();
    sol.dual.resize(m);
    for (int i = 0; i < m; ++i) sol.dual[i] = sign * tab.flip[i] * y[i];
    sol.objective = lp.c.dot(sol.primal);

    // Solution quality gates: feasibility, dual feasibility, duality gap.
    double primal_res = 0.0;
    Vector ax = lp.A * sol.primal;
    for (int i = 0; i < m; ++i) {
        double r = lp.row_sense[i] == RowSense::Equal ? std::abs(ax[i] - lp.b[i])
                                                      : std::max(0.0, lp.b[i] - ax[i]);
        primal_res = std::max(primal_res, r);
    }
    Vector aty = lp.A.transpose() * sol.dual;
    double dual_res = 0.0;
    for (int j = 0; j < n; ++j) {
        double d = sign * (lp.c[j] - aty[j]);
        double viol = lp.var_bound[j] == VarBound::Free ? std::abs(d) : std::max(0.0, -d);
        dual_res = std::max(dual_res, viol);
    }
    for (int i = 0; i < m; ++i)
        if (lp.row_sense[i] == RowSense::GreaterEqual)
            dual_res = std::max(dual_res, sign < 0 ? sol.dual[i] : -sol.dual[i]);
    double gap = std::abs(sol.objective - lp.b.dot(sol.dual));

    const double feas_limit = 1e-9 * (1.0 + lp.b.lpNorm<Eigen::Infinity>());
    const double dual_limit = 1e-9 * (1.0 + lp.c.lpNorm<Eigen::Infinity>());
    const double gap_limit = 1e-8 * (1.0 + std::abs(sol.objective));
    if (primal_res > feas_limit || dual_res > dual_limit || gap > gap_limit) {
        std::ostringstream msg;
        msg << "simplex: solution quality check failed: primal residual " << primal_res
            << " (limit " << feas_limit << "), dual residual " << dual_res << " (limit "
            << dual_limit << "), gap " << gap << " (limit " << gap_limit << ")\n"
            << sol.log;
        throw SolverError(msg.str());
    }

    detail.basis.assign(m, -1);
    for (int r = 0; r < m; ++r) {
        int col = state.basic_cols[r];
        if (col < n) detail.basis[r] = col;  // structural plus-columns are 0..n-1
    }
    return detail;
}

LPSolution solve_lp(const LinearProgram& lp, const SimplexOptions& options) {
    return solve_lp_detailed(lp, options).solution;
}

}  // namespace mfglp
