#include "uavtraj/optimizer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

namespace uavtraj {

namespace {

Schedule schedule_from_lp(const RateTable& rt, const LpSolution* warm, LpSolution& sol_out) {
    const LpStandardForm lp = build_scheduling_lp(rt);
    sol_out = solve_lp(lp, kDefaultLpTol, 0, warm);
    if (sol_out.status != LpStatus::Optimal) {
        throw Error("scheduling LP did not reach optimality (status " +
                    std::to_string(static_cast<int>(sol_out.status)) + ")");
    }
    return extract_schedule(sol_out, rt.num_users(), rt.num_slots());
}

// Largest-remainder apportionment of tau sub-slots across one slot's shares.
std::vector<int> apportion_slot(const Eigen::VectorXd& shares, int tau) {
    const int k = static_cast<int>(shares.size());
    std::vector<int> counts(k, 0);
    std::vector<double> remainders(k, 0.0);
    double total = 0;
    int floor_sum = 0;
    for (int i = 0; i < k; ++i) {
        const double scaled = tau * std::clamp(shares(i), 0.0, 1.0);
        total += scaled;
        counts[i] = static_cast<int>(std::floor(scaled));
        remainders[i] = scaled - counts[i];
        floor_sum += counts[i];
    }
    const int target = std::min<int>(tau, static_cast<int>(std::llround(total)));
    int leftover = target - floor_sum;
    std::vector<int> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return remainders[a] > remainders[b];  // stable: ties go to the smaller index
    });
    for (int idx = 0; idx < k && leftover > 0; ++idx, --leftover) ++counts[order[idx]];
    return counts;
}

}  // namespace

SolveReport bcd_solve(const Scenario& s, const Trajectory& init, const BcdConfig& cfg) {
    if (!(cfg.epsilon > 0)) throw Error("BcdConfig.epsilon must be positive");
    if (cfg.tau < 1) throw Error("BcdConfig.tau must be at least 1");
    {
        const FeasibilityVerdict v = validate_trajectory(s, init);
        if (!v.feasible()) {
            throw InfeasibleTrajectoryError("initial trajectory is infeasible (" +
                                            std::to_string(v.violations.size()) +
                                            " violations)");
        }
    }
    const auto t_start = std::chrono::steady_clock::now();

    SolveReport report;
    Trajectory q = init;
    RateTable rt = rate_table(s, q);
    LpSolution lp_sol;
    Schedule a = schedule_from_lp(rt, nullptr, lp_sol);
    report.eta_trace.push_back(maxmin_objective(rt, a));
    report.status = BcdStatus::MaxIters;

    for (int r = 0; r < cfg.max_outer_iters; ++r) {
        const QcqpSolution qc = solve_trajectory_qcqp(s, a, q);
        if (qc.status == QcqpStatus::Fallback) {
            const FeasibilityVerdict v = validate_trajectory(s, qc.trajectory);
            if (!v.feasible()) {
                throw Error("trajectory step failed and its fallback is infeasible");
            }
        }
        q = qc.trajectory;
        rt = rate_table(s, q);
        report.zero_share_users = qc.zero_share_users;

        const double eta_full = maxmin_objective(rt, a);
        const double eta_prev = report.eta_trace.back();
        report.eta_trace.push_back(eta_full);
        if ((eta_full - eta_prev) / std::max(eta_prev, 1e-12) < cfg.epsilon) {
            report.status = BcdStatus::Converged;
            break;
        }
        // keep (schedule, trajectory) matching the last trace entry when the
        // iteration cap ends the loop
        if (r + 1 < cfg.max_outer_iters) a = schedule_from_lp(rt, &lp_sol, lp_sol);
    }

    report.final_schedule = a;
    report.final_trajectory = q;
    const BinaryRecovery rec = recover_binary(s, report, cfg.tau);
    report.binary_gap = report.eta_relaxed() - rec.eta;
    report.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return report;
}

BinaryRecovery recover_binary(const Scenario& s, const SolveReport& report, int tau) {
    if (tau < 1) throw Error("tau must be at least 1");
    const Schedule& a = report.final_schedule;
    const Trajectory& q = report.final_trajectory;
    const int k = a.num_users();
    const int n = a.num_slots();
    if (k != s.num_users() || n != s.num_slots() || q.num_slots() != n) {
        throw DimensionMismatchError("report does not match the scenario dimensions");
    }

    const RateTable rt = rate_table(s, q);
    BinaryRecovery rec;
    rec.schedule.shares = Eigen::MatrixXd::Zero(k, static_cast<long>(n) * tau);
    rec.schedule.binary = true;
    rec.trajectory.waypoints.resize(2, static_cast<long>(n) * tau);

    Eigen::VectorXd sub_totals = Eigen::VectorXd::Zero(k);  // sum_n N_i[n] * R_i[n]
    for (int nn = 0; nn < n; ++nn) {
        const std::vector<int> counts = apportion_slot(a.shares.col(nn), tau);
        int cursor = nn * tau;
        for (int i = 0; i < k; ++i) {
            sub_totals(i) += counts[i] * rt.rates(i, nn);
            for (int c = 0; c < counts[i]; ++c) rec.schedule.shares(i, cursor++) = 1.0;
        }
        for (int t = 0; t < tau; ++t) rec.trajectory.waypoints.col(nn * tau + t) = q.waypoints.col(nn);
    }
    rec.eta = (sub_totals / (static_cast<double>(n) * tau)).minCoeff();
    return rec;
}

}  // namespace uavtraj
