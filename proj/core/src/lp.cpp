#include "uavtraj/lp.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

namespace uavtraj {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPivotTol = 1e-10;
constexpr double kRatioTieTol = 1e-12;
constexpr int kRefactorInterval = 64;

enum VarState : signed char { kAtLower = 0, kAtUpper = 1, kBasic = 2 };

// Dense working set: structural columns, one slack per row, artificials
// appended while phase 1 is active.
struct Tableau {
    int m = 0;
    int n_struct = 0;
    int n_real = 0;   // structural + slack
    int n_total = 0;  // + artificials
    Eigen::MatrixXd cols;
    Eigen::VectorXd b;
    Eigen::VectorXd lo;
    Eigen::VectorXd up;
    Eigen::VectorXd cost;    // phase-2 minimization cost
    Eigen::VectorXd x;
    Eigen::MatrixXd binv;
    std::vector<int> basis;
    std::vector<signed char> state;

    bool fixed(int j) const { return up(j) - lo(j) <= 0.0; }
};

// Rebuilds binv from the current basis and recomputes the basic values.
// Returns false if the basis matrix is numerically singular.
bool refactor(Tableau& t) {
    Eigen::MatrixXd basis_mat(t.m, t.m);
    for (int r = 0; r < t.m; ++r) basis_mat.col(r) = t.cols.col(t.basis[r]);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(basis_mat);
    const Eigen::MatrixXd& lu_mat = lu.matrixLU();
    double max_diag = 0, min_diag = kInf;
    for (int r = 0; r < t.m; ++r) {
        const double d = std::abs(lu_mat(r, r));
        max_diag = std::max(max_diag, d);
        min_diag = std::min(min_diag, d);
    }
    if (t.m > 0 && (min_diag <= 0 || min_diag < 1e-13 * std::max(1.0, max_diag))) return false;
    t.binv = lu.inverse();

    Eigen::VectorXd acc = t.b;
    for (int j = 0; j < t.n_total; ++j) {
        if (t.state[j] != kBasic && t.x(j) != 0.0) acc -= t.cols.col(j) * t.x(j);
    }
    const Eigen::VectorXd xb = t.binv * acc;
    for (int r = 0; r < t.m; ++r) t.x(t.basis[r]) = xb(r);
    return true;
}

double objective_value(const Tableau& t, const Eigen::VectorXd& cost) {
    double v = 0;
    for (int j = 0; j < t.n_total; ++j) {
        if (t.x(j) != 0.0) v += cost(j) * t.x(j);
    }
    return v;
}

enum class RunResult { Optimal, Unbounded, IterLimit, Singular };

// Core pivoting loop, used by both phases. Minimizes `cost`.
RunResult run_simplex(Tableau& t, const Eigen::VectorXd& cost, double tol, int max_iters,
                      int& iters, bool stop_at_zero) {
    bool bland = false;
    int since_improvement = 0;
    int since_refactor = 0;
    double best_obj = objective_value(t, cost);
    const int stall_limit = 4 * t.m + 64;

    Eigen::VectorXd cb(t.m), y(t.m), reduced(t.n_total), w(t.m);
    while (iters < max_iters) {
        if (stop_at_zero && best_obj <= tol) return RunResult::Optimal;

        for (int r = 0; r < t.m; ++r) cb(r) = cost(t.basis[r]);
        y.noalias() = t.binv.transpose() * cb;
        reduced = cost - t.cols.transpose() * y;

        int enter = -1;
        double best_score = tol;
        for (int j = 0; j < t.n_total; ++j) {
            if (t.state[j] == kBasic || t.fixed(j)) continue;
            const double dj = reduced(j);
            double score;
            if (t.state[j] == kAtLower && dj < -tol) {
                score = -dj;
            } else if (t.state[j] == kAtUpper && dj > tol) {
                score = dj;
            } else {
                continue;
            }
            if (bland) {
                enter = j;
                break;
            }
            if (score > best_score) {
                best_score = score;
                enter = j;
            }
        }
        if (enter < 0) return RunResult::Optimal;

        ++iters;
        w.noalias() = t.binv * t.cols.col(enter);
        const double dir_sign = (t.state[enter] == kAtLower) ? 1.0 : -1.0;

        // Ratio test: the entering variable moves by step >= 0 from its bound;
        // basic variable r changes at rate -dir_sign * w(r).
        double step_limit = t.up(enter) - t.lo(enter);  // own-bound flip
        int leave_row = -1;
        double leave_pivot = 0;
        for (int r = 0; r < t.m; ++r) {
            const double rate = dir_sign * w(r);
            const int bj = t.basis[r];
            double ratio;
            if (rate > kPivotTol) {
                ratio = (t.x(bj) - t.lo(bj)) / rate;
            } else if (rate < -kPivotTol) {
                if (t.up(bj) == kInf) continue;
                ratio = (t.up(bj) - t.x(bj)) / (-rate);
            } else {
                continue;
            }
            if (ratio < 0) ratio = 0;  // basic value drifted past its bound
            if (leave_row < 0 || ratio < step_limit - kRatioTieTol) {
                if (ratio <= step_limit) {
                    step_limit = ratio;
                    leave_row = r;
                    leave_pivot = w(r);
                }
            } else if (ratio <= step_limit + kRatioTieTol) {
                // tie: Bland wants the smallest variable index, otherwise
                // prefer the largest pivot for stability
                const bool take = bland ? t.basis[r] < t.basis[leave_row]
                                        : std::abs(w(r)) > std::abs(leave_pivot);
                if (take) {
                    step_limit = std::min(step_limit, ratio);
                    leave_row = r;
                    leave_pivot = w(r);
                }
            }
        }
        if (leave_row < 0 && step_limit == kInf) return RunResult::Unbounded;

        if (leave_row < 0) {
            // bound flip, basis unchanged
            for (int r = 0; r < t.m; ++r) t.x(t.basis[r]) -= dir_sign * step_limit * w(r);
            t.x(enter) = (t.state[enter] == kAtLower) ? t.up(enter) : t.lo(enter);
            t.state[enter] = (t.state[enter] == kAtLower) ? kAtUpper : kAtLower;
        } else {
            const double pivot = w(leave_row);
            if (std::abs(pivot) < kPivotTol) {
                if (!refactor(t)) return RunResult::Singular;
                since_refactor = 0;
                continue;
            }
            for (int r = 0; r < t.m; ++r) {
                if (r != leave_row) t.x(t.basis[r]) -= dir_sign * step_limit * w(r);
            }
            t.x(enter) = (t.state[enter] == kAtLower) ? t.lo(enter) + step_limit
                                                      : t.up(enter) - step_limit;
            const int leave_var = t.basis[leave_row];
            const bool to_lower = dir_sign * pivot > 0;
            t.x(leave_var) = to_lower ? t.lo(leave_var) : t.up(leave_var);
            t.state[leave_var] = to_lower ? kAtLower : kAtUpper;
            t.state[enter] = kBasic;
            t.basis[leave_row] = enter;

            t.binv.row(leave_row) /= pivot;
            for (int r = 0; r < t.m; ++r) {
                if (r == leave_row) continue;
                const double f = w(r);
                if (f != 0.0) t.binv.row(r) -= f * t.binv.row(leave_row);
            }
            if (++since_refactor >= kRefactorInterval) {
                if (!refactor(t)) return RunResult::Singular;
                since_refactor = 0;
            }
        }

        const double obj = objective_value(t, cost);
        if (obj < best_obj - 1e-13 * (1.0 + std::abs(best_obj))) {
            best_obj = obj;
            since_improvement = 0;
        } else if (!bland && ++since_improvement > stall_limit) {
            bland = true;  // degeneracy-cycle heuristic tripped
        }
    }
    return RunResult::IterLimit;
}

double max_bound_violation(const Tableau& t) {
    double v = 0;
    for (int r = 0; r < t.m; ++r) {
        const int j = t.basis[r];
        v = std::max(v, t.lo(j) - t.x(j));
        if (t.up(j) < kInf) v = std::max(v, t.x(j) - t.up(j));
    }
    return v;
}

double row_residual(const Tableau& t, const LpStandardForm& lp) {
    double res = max_bound_violation(t);
    const Eigen::VectorXd xs = t.x.head(lp.num_vars());
    const Eigen::VectorXd ax = lp.constraints * xs;
    for (int r = 0; r < t.m; ++r) {
        const double d = ax(r) - lp.rhs(r);
        res = std::max(res, lp.senses[r] == RowSense::Equal ? std::abs(d) : d);
    }
    return res;
}

}  // namespace

LpStandardForm build_scheduling_lp(const RateTable& rt) {
    const int k = rt.num_users();
    const int n = rt.num_slots();
    const int vars = k * n + 1;  // shares (user-major) then eta
    const int eta = k * n;

    LpStandardForm lp;
    lp.objective = Eigen::VectorXd::Zero(vars);
    lp.objective(eta) = 1.0;
    lp.constraints = Eigen::MatrixXd::Zero(k + n, vars);
    lp.rhs = Eigen::VectorXd::Zero(k + n);
    lp.senses.assign(k + n, RowSense::LessEqual);
    lp.lower = Eigen::VectorXd::Zero(vars);
    lp.upper = Eigen::VectorXd::Ones(vars);
    lp.upper(eta) = kInf;  // eta >= 0 is valid here: all rates are nonnegative

    // average-rate rows, written as eta - (1/N) sum_n R(i,n) a(i,n) <= 0
    for (int i = 0; i < k; ++i) {
        for (int nn = 0; nn < n; ++nn) lp.constraints(i, i * n + nn) = -rt.rates(i, nn) / n;
        lp.constraints(i, eta) = 1.0;
    }
    // slot-capacity rows
    for (int nn = 0; nn < n; ++nn) {
        for (int i = 0; i < k; ++i) lp.constraints(k + nn, i * n + nn) = 1.0;
        lp.rhs(k + nn) = 1.0;
    }
    return lp;
}

LpSolution solve_lp(const LpStandardForm& lp, double lp_tol, int max_iters,
                    const LpSolution* warm_start) {
    const int m = lp.num_rows();
    const int ns = lp.num_vars();
    if (lp.constraints.rows() != m || lp.constraints.cols() != ns ||
        static_cast<int>(lp.senses.size()) != m || lp.lower.size() != ns ||
        lp.upper.size() != ns) {
        throw DimensionMismatchError("inconsistent LP dimensions");
    }
    for (int j = 0; j < ns; ++j) {
        if (!std::isfinite(lp.lower(j)) || lp.lower(j) > lp.upper(j)) {
            throw Error("LP lower bounds must be finite and <= upper bounds");
        }
    }
    if (!lp.constraints.allFinite() || !lp.rhs.allFinite() || !lp.objective.allFinite()) {
        throw Error("LP data must be finite");
    }
    if (max_iters <= 0) max_iters = 50 * std::max(ns, 1);

    Tableau t;
    t.m = m;
    t.n_struct = ns;
    t.n_real = ns + m;
    t.n_total = t.n_real;
    t.cols.resize(m, t.n_real);
    t.cols.leftCols(ns) = lp.constraints;
    t.cols.rightCols(m) = Eigen::MatrixXd::Identity(m, m);
    t.b = lp.rhs;
    t.lo.resize(t.n_real);
    t.up.resize(t.n_real);
    t.lo.head(ns) = lp.lower;
    t.up.head(ns) = lp.upper;
    for (int r = 0; r < m; ++r) {
        t.lo(ns + r) = 0.0;
        t.up(ns + r) = lp.senses[r] == RowSense::Equal ? 0.0 : kInf;
    }
    t.cost = Eigen::VectorXd::Zero(t.n_real);
    t.cost.head(ns) = -lp.objective;  // maximize -> minimize

    LpSolution out;
    const auto finish = [&](LpStatus status, int iters) {
        refactor(t);
        out.status = status;
        out.iterations = iters;
        out.x = t.x.head(ns);
        out.objective = lp.objective.dot(out.x);
        out.feasibility_residual = row_residual(t, lp);
        out.basis = t.basis;
        out.var_status.assign(t.state.begin(), t.state.begin() + t.n_real);
        return out;
    };

    // Warm start: adopt a previous basis when shapes match and the implied
    // basic point is still within bounds.
    bool warm_ok = false;
    if (warm_start && static_cast<int>(warm_start->basis.size()) == m &&
        static_cast<int>(warm_start->var_status.size()) == t.n_real) {
        t.basis = warm_start->basis;
        t.state = warm_start->var_status;
        std::vector<char> seen(t.n_real, 0);
        warm_ok = true;
        for (int j : t.basis) {
            if (j < 0 || j >= t.n_real || seen[j]) warm_ok = false;
            else seen[j] = 1;
        }
        if (warm_ok) {
            t.x = Eigen::VectorXd::Zero(t.n_real);
            for (int j = 0; j < t.n_real; ++j) {
                if (t.state[j] == kAtUpper && t.up(j) < kInf) t.x(j) = t.up(j);
                else if (t.state[j] != kBasic) { t.x(j) = t.lo(j); t.state[j] = kAtLower; }
            }
            t.binv.resize(m, m);
            warm_ok = refactor(t) && max_bound_violation(t) <= lp_tol;
        }
        if (!warm_ok) t.state.clear();
    }

    int iters = 0;
    if (!warm_ok) {
        // Cold start: every structural at its lower bound, slacks basic.
        // Rows whose slack cannot absorb the residual get an artificial.
        t.x = Eigen::VectorXd::Zero(t.n_real);
        t.state.assign(t.n_real, kAtLower);
        t.basis.resize(m);
        for (int j = 0; j < ns; ++j) t.x(j) = t.lo(j);

        Eigen::VectorXd residual = t.b - t.cols.leftCols(ns) * t.x.head(ns);
        std::vector<int> art_rows;
        for (int r = 0; r < m; ++r) {
            const bool slack_ok =
                residual(r) >= 0 && (lp.senses[r] != RowSense::Equal || residual(r) == 0);
            if (slack_ok) {
                t.basis[r] = ns + r;
                t.state[ns + r] = kBasic;
                t.x(ns + r) = residual(r);
            } else {
                art_rows.push_back(r);
            }
        }
        if (!art_rows.empty()) {
            const int na = static_cast<int>(art_rows.size());
            t.n_total = t.n_real + na;
            t.cols.conservativeResize(m, t.n_total);
            t.lo.conservativeResize(t.n_total);
            t.up.conservativeResize(t.n_total);
            t.x.conservativeResize(t.n_total);
            t.cost.conservativeResize(t.n_total);
            t.state.resize(t.n_total, kAtLower);
            Eigen::VectorXd phase1_cost = Eigen::VectorXd::Zero(t.n_total);
            for (int a = 0; a < na; ++a) {
                const int r = art_rows[a];
                const int j = t.n_real + a;
                t.cols.col(j) = Eigen::VectorXd::Zero(m);
                t.cols(r, j) = residual(r) >= 0 ? 1.0 : -1.0;
                t.lo(j) = 0.0;
                t.up(j) = kInf;
                t.cost(j) = 0.0;
                t.x(j) = std::abs(residual(r));
                t.state[j] = kBasic;
                t.basis[r] = j;
                phase1_cost(j) = 1.0;
            }
            t.binv.resize(m, m);
            if (!refactor(t)) return finish(LpStatus::Infeasible, iters);

            const RunResult r1 =
                run_simplex(t, phase1_cost, lp_tol, max_iters, iters, /*stop_at_zero=*/true);
            if (r1 == RunResult::IterLimit) return finish(LpStatus::IterationLimit, iters);
            if (r1 == RunResult::Singular) return finish(LpStatus::Infeasible, iters);
            const double infeas = objective_value(t, phase1_cost);
            if (r1 == RunResult::Unbounded ||
                infeas > lp_tol * (1.0 + t.b.cwiseAbs().maxCoeff())) {
                return finish(LpStatus::Infeasible, iters);
            }
            // Pin artificials at zero; pivot basic ones out where possible.
            for (int j = t.n_real; j < t.n_total; ++j) {
                t.up(j) = 0.0;
                if (t.state[j] != kBasic) t.x(j) = 0.0;
            }
            for (int r = 0; r < m; ++r) {
                if (t.basis[r] < t.n_real) continue;
                const Eigen::RowVectorXd brow = t.binv.row(r) * t.cols.leftCols(t.n_real);
                int repl = -1;
                for (int j = 0; j < t.n_real; ++j) {
                    if (t.state[j] == kBasic || t.fixed(j)) continue;
                    if (std::abs(brow(j)) > 1e-7) { repl = j; break; }
                }
                if (repl < 0) continue;  // redundant row, artificial stays pinned
                const int art = t.basis[r];
                const Eigen::VectorXd w = t.binv * t.cols.col(repl);
                t.state[art] = kAtLower;
                t.x(art) = 0.0;
                t.state[repl] = kBasic;  // degenerate swap, value unchanged
                t.basis[r] = repl;
                t.binv.row(r) /= w(r);
                for (int rr = 0; rr < m; ++rr) {
                    if (rr != r && w(rr) != 0.0) t.binv.row(rr) -= w(rr) * t.binv.row(r);
                }
            }
            if (!refactor(t)) return finish(LpStatus::Infeasible, iters);
        } else {
            t.binv = Eigen::MatrixXd::Identity(m, m);
        }
    }

    const RunResult r2 = run_simplex(t, t.cost, lp_tol, max_iters, iters, /*stop_at_zero=*/false);
    switch (r2) {
        case RunResult::Optimal:
            return finish(LpStatus::Optimal, iters);
        case RunResult::Unbounded:
            return finish(LpStatus::Unbounded, iters);
        case RunResult::Singular:
            return finish(LpStatus::IterationLimit, iters);
        case RunResult::IterLimit:
        default:
            return finish(LpStatus::IterationLimit, iters);
    }
}

Schedule extract_schedule(const LpSolution& sol, int num_users, int num_slots, double lp_tol) {
    if (sol.status != LpStatus::Optimal) {
        throw NotOptimalError("cannot extract a schedule from a non-optimal LP solution");
    }
    if (sol.x.size() != static_cast<long>(num_users) * num_slots + 1) {
        throw DimensionMismatchError("LP solution has " + std::to_string(sol.x.size()) +
                                     " variables, expected " +
                                     std::to_string(num_users * num_slots + 1));
    }
    Schedule a;
    a.shares.resize(num_users, num_slots);
    bool binary = true;
    for (int i = 0; i < num_users; ++i) {
        for (int n = 0; n < num_slots; ++n) {
            double v = sol.x(i * num_slots + n);
            if (std::abs(v) <= lp_tol) v = 0.0;
            else if (std::abs(v - 1.0) <= lp_tol) v = 1.0;
            v = std::clamp(v, 0.0, 1.0);
            a.shares(i, n) = v;
            binary = binary && (v == 0.0 || v == 1.0);
        }
    }
    a.binary = binary;
    return a;
}

}  // namespace uavtraj
