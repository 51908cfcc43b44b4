#include "uavtraj/channel.hpp"

#include <cmath>
#include <numbers>

namespace uavtraj {

double slot_rate(const Scenario& s, const Eigen::Vector2d& q, int user) {
    if (user < 0 || user >= s.num_users()) {
        throw IndexOutOfRangeError("user index " + std::to_string(user) + " out of range");
    }
    const double h2 = s.altitude_m() * s.altitude_m();
    const double d2 = (q - s.users().col(user)).squaredNorm();
    // base-2 rate via natural log, one arithmetic convention everywhere
    return std::log1p(s.ref_snr() / (h2 + d2)) * std::numbers::log2e;
}

RateTable rate_table(const Scenario& s, const Trajectory& t, double feas_tol) {
    const FeasibilityVerdict verdict = validate_trajectory(s, t, feas_tol);
    if (!verdict.feasible()) {
        throw InfeasibleTrajectoryError("trajectory violates " +
                                        std::to_string(verdict.violations.size()) +
                                        " constraint(s); first at slot " +
                                        std::to_string(verdict.violations.front().index));
    }
    RateTable rt;
    rt.rates.resize(s.num_users(), s.num_slots());
    for (int n = 0; n < s.num_slots(); ++n) {
        const Eigen::Vector2d q = t.waypoints.col(n);
        for (int i = 0; i < s.num_users(); ++i) {
            rt.rates(i, n) = slot_rate(s, q, i);
        }
    }
    return rt;
}

Eigen::VectorXd user_average_rates(const RateTable& rt, const Schedule& a) {
    if (rt.rates.rows() != a.shares.rows() || rt.rates.cols() != a.shares.cols()) {
        throw DimensionMismatchError("rate table is " + std::to_string(rt.rates.rows()) + "x" +
                                     std::to_string(rt.rates.cols()) + ", schedule is " +
                                     std::to_string(a.shares.rows()) + "x" +
                                     std::to_string(a.shares.cols()));
    }
    return rt.rates.cwiseProduct(a.shares).rowwise().sum() / rt.rates.cols();
}

double maxmin_objective(const RateTable& rt, const Schedule& a) {
    return user_average_rates(rt, a).minCoeff();
}

}  // namespace uavtraj
