#pragma once

#include <Eigen/Core>
#include <vector>

#include "uavtraj/scenario.hpp"

namespace uavtraj {

/// First-order concave minorant of the per-slot rate around an anchor
/// trajectory. For each (user, slot):
///   rate(q) >= -curvature * (||q - w||^2 - ||q_anchor - w||^2) + intercept,
/// with equality and matching gradient at the anchor.
struct ScaBound {
    Eigen::MatrixXd curvature;     // K x N, strictly positive
    Eigen::MatrixXd intercept;     // K x N, rate at the anchor
    Eigen::MatrixXd anchor_dist2;  // K x N, ||q_anchor - w||^2
    Trajectory anchor;
    Eigen::Matrix2Xd users;
};

enum class QcqpStatus { Optimal, Fallback };

struct QcqpSolution {
    Trajectory trajectory;
    double objective = 0;  // minorant objective at the returned trajectory
    QcqpStatus status = QcqpStatus::Optimal;
    int newton_iters = 0;
    double max_constraint_violation = 0;
    std::vector<int> zero_share_users;  // users with no slot share, excluded from the epigraph
};

inline constexpr double kDefaultQcqpTol = 1e-8;
inline constexpr double kDefaultQcqpFeasTol = 1e-6;

ScaBound build_bound(const Scenario& s, const Trajectory& anchor);

double lower_bound_rate(const ScaBound& b, const Eigen::Vector2d& q, int user, int slot);

/// Maximizes the minorant max-min objective over trajectories subject to the
/// per-slot travel cap and loop closure, via a log-barrier Newton method.
/// The loop closure is eliminated by aliasing the last waypoint to the first.
/// Never regresses: the returned objective is at least the minorant value at
/// the (feasible) anchor minus qcqp_tol, falling back to the anchor itself on
/// numerical failure.
QcqpSolution solve_trajectory_qcqp(const Scenario& s, const Schedule& a,
                                   const Trajectory& anchor,
                                   double qcqp_tol = kDefaultQcqpTol,
                                   double qcqp_feas_tol = kDefaultQcqpFeasTol);

}  // namespace uavtraj
