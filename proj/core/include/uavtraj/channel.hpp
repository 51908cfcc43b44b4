#pragma once

#include <Eigen/Core>

#include "uavtraj/scenario.hpp"

namespace uavtraj {

/// Per-slot achievable rates R(i, n) in bps/Hz for a given trajectory.
struct RateTable {
    Eigen::MatrixXd rates;

    int num_users() const noexcept { return static_cast<int>(rates.rows()); }
    int num_slots() const noexcept { return static_cast<int>(rates.cols()); }
};

/// Achievable rate when serving `user` from horizontal position `q`:
/// log2(1 + ref_snr / (H^2 + ||q - w_user||^2)).
double slot_rate(const Scenario& s, const Eigen::Vector2d& q, int user);

/// Evaluates slot_rate for every (user, slot) pair. The trajectory must be
/// feasible; validation failures are raised as InfeasibleTrajectoryError.
RateTable rate_table(const Scenario& s, const Trajectory& t,
                     double feas_tol = kDefaultFeasTol);

/// Per-user average over the period: (1/N) * sum_n shares(i,n) * rates(i,n).
Eigen::VectorXd user_average_rates(const RateTable& rt, const Schedule& a);

/// Smallest per-user average rate (the max-min objective).
double maxmin_objective(const RateTable& rt, const Schedule& a);

}  // namespace uavtraj
