#include "uavtraj/init_baselines.hpp"

#include <chrono>
#include <cmath>
#include <numbers>

namespace uavtraj {

namespace {

SolveReport fixed_trajectory_report(const Scenario& s, Trajectory trajectory, int tau) {
    const auto t_start = std::chrono::steady_clock::now();
    SolveReport report;
    const RateTable rt = rate_table(s, trajectory);
    const LpStandardForm lp = build_scheduling_lp(rt);
    const LpSolution sol = solve_lp(lp);
    if (sol.status != LpStatus::Optimal) {
        throw Error("baseline scheduling LP did not reach optimality");
    }
    report.final_schedule = extract_schedule(sol, s.num_users(), s.num_slots());
    report.final_trajectory = std::move(trajectory);
    report.eta_trace.push_back(maxmin_objective(rt, report.final_schedule));
    report.status = BcdStatus::Converged;
    const BinaryRecovery rec = recover_binary(s, report, tau);
    report.binary_gap = report.eta_relaxed() - rec.eta;
    report.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return report;
}

}  // namespace

std::pair<CircleSpec, Trajectory> circular_init(const Scenario& s) {
    const int n = s.num_slots();
    CircleSpec spec;
    spec.center = s.users().rowwise().mean();
    double user_radius = 0;
    for (int i = 0; i < s.num_users(); ++i) {
        user_radius = std::max(user_radius, (s.users().col(i) - spec.center).norm());
    }
    const double speed_radius = s.v_max_mps() * s.period_s() / (2.0 * std::numbers::pi);
    spec.radius = std::min(speed_radius, user_radius / 2.0);

    // largest radius whose N-gon chord stays within one slot's travel,
    // keeping the serialization-safe interior margin
    const double chord_angle = std::numbers::pi / (n - 1);
    const double cap2 = s.max_step_m() * s.max_step_m();
    const double chord_cap = std::sqrt(cap2 - step_interior_margin2(s.max_step_m()));
    const double inscribed_max = chord_cap / (2.0 * std::sin(chord_angle));
    const double waypoint_radius = std::min(spec.radius, inscribed_max);

    Trajectory t;
    t.waypoints.resize(2, n);
    for (int nn = 0; nn + 1 < n; ++nn) {
        const double theta = 2.0 * std::numbers::pi * nn / (n - 1);
        t.waypoints(0, nn) = spec.center.x() + waypoint_radius * std::cos(theta);
        t.waypoints(1, nn) = spec.center.y() + waypoint_radius * std::sin(theta);
    }
    t.waypoints.col(n - 1) = t.waypoints.col(0);
    return {spec, std::move(t)};
}

SolveReport static_uav_baseline(const Scenario& s, int tau) {
    Trajectory t;
    t.waypoints.resize(2, s.num_slots());
    t.waypoints.colwise() = Eigen::Vector2d(s.users().rowwise().mean());
    return fixed_trajectory_report(s, std::move(t), tau);
}

SolveReport circular_baseline(const Scenario& s, int tau) {
    return fixed_trajectory_report(s, circular_init(s).second, tau);
}

double rate_upper_bound(const Scenario& s) {
    const double h2 = s.altitude_m() * s.altitude_m();
    return std::log1p(s.ref_snr() / h2) * std::numbers::log2e / s.num_users();
}

}  // namespace uavtraj
