#pragma once

#include <Eigen/Core>
#include <vector>

#include "uavtraj/channel.hpp"

namespace uavtraj {

enum class RowSense { LessEqual, Equal };

/// Canonical form consumed by solve_lp:
///   maximize objective . x
///   subject to constraints * x {<=, =} rhs, lower <= x <= upper.
/// Lower bounds must be finite; upper bounds may be +infinity.
struct LpStandardForm {
    Eigen::VectorXd objective;
    Eigen::MatrixXd constraints;
    Eigen::VectorXd rhs;
    std::vector<RowSense> senses;
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;

    int num_vars() const noexcept { return static_cast<int>(objective.size()); }
    int num_rows() const noexcept { return static_cast<int>(rhs.size()); }
};

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

struct LpSolution {
    Eigen::VectorXd x;
    double objective = 0;
    LpStatus status = LpStatus::IterationLimit;
    int iterations = 0;
    double feasibility_residual = 0;
    // basis and bound statuses over structural+slack columns, for warm starts
    std::vector<int> basis;
    std::vector<signed char> var_status;
};

inline constexpr double kDefaultLpTol = 1e-9;

/// Assembles the max-min scheduling problem for a fixed trajectory:
/// variables are the K*N slot shares (user-major) followed by the epigraph
/// variable eta; rows are K average-rate constraints then N slot-capacity
/// constraints.
LpStandardForm build_scheduling_lp(const RateTable& rt);

/// Dense bounded-variable revised simplex. Deterministic: Dantzig pricing
/// with smallest-index tie-breaks, switching to Bland's rule if the
/// objective stalls. `max_iters <= 0` selects 50 * num_vars. `warm_start`
/// may carry the basis of a previous solution with identical dimensions;
/// it is ignored if stale or infeasible.
LpSolution solve_lp(const LpStandardForm& lp, double lp_tol = kDefaultLpTol,
                    int max_iters = 0, const LpSolution* warm_start = nullptr);

/// Reshapes an optimal scheduling-LP solution into a K x N Schedule,
/// clipping round-off of magnitude <= lp_tol onto the [0,1] bounds.
/// Throws NotOptimalError unless sol.status == Optimal.
Schedule extract_schedule(const LpSolution& sol, int num_users, int num_slots,
                          double lp_tol = kDefaultLpTol);

}  // namespace uavtraj
