#include "uavtraj/sca.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <numbers>

namespace uavtraj {

namespace {

constexpr double kShareDrop = 1e-12;      // schedule entries below this are dropped
constexpr double kNewtonEps = 1e-9;       // centering target on lambda^2 / 2
constexpr double kBarrierMu = 10.0;
constexpr double kArmijoSlope = 0.25;
constexpr double kBacktrack = 0.5;
constexpr int kMaxInnerIters = 60;

struct Barrier {
    int num_slots = 0;
    int nfree = 0;  // free waypoints; the last slot aliases the first
    int dim = 0;    // 2 * nfree + 1 (eta last)
    double smax2 = 0;
    Eigen::MatrixXd weights;        // n_active x nfree, (1/N) * share * curvature
    Eigen::VectorXd consts;         // n_active
    Eigen::Matrix2Xd active_users;  // 2 x n_active
    std::vector<std::pair<int, int>> speed_pairs;

    int n_active() const { return static_cast<int>(consts.size()); }
    int n_ineq() const { return n_active() + static_cast<int>(speed_pairs.size()); }

    Eigen::Map<const Eigen::Matrix2Xd> waypoints(const Eigen::VectorXd& z) const {
        return {z.data(), 2, nfree};
    }

    // minorant average rate of active user ai at the waypoints in z
    double user_value(const Eigen::VectorXd& z, int ai) const {
        const auto q = waypoints(z);
        double acc = 0;
        for (int m = 0; m < nfree; ++m) {
            const double u = weights(ai, m);
            if (u != 0.0) acc += u * (q.col(m) - active_users.col(ai)).squaredNorm();
        }
        return consts(ai) - acc;
    }

    double min_user_value(const Eigen::VectorXd& z) const {
        double v = std::numeric_limits<double>::infinity();
        for (int ai = 0; ai < n_active(); ++ai) v = std::min(v, user_value(z, ai));
        return v;
    }

    // fills constraint values; returns true when all are strictly negative
    bool evaluate(const Eigen::VectorXd& z, Eigen::VectorXd& gvals,
                  Eigen::VectorXd& hvals) const {
        const double eta = z(dim - 1);
        bool interior = true;
        for (int ai = 0; ai < n_active(); ++ai) {
            gvals(ai) = eta - user_value(z, ai);
            interior = interior && gvals(ai) < 0;
        }
        const auto q = waypoints(z);
        for (size_t j = 0; j < speed_pairs.size(); ++j) {
            const auto [a, b] = speed_pairs[j];
            hvals(j) = (q.col(b) - q.col(a)).squaredNorm() - smax2;
            interior = interior && hvals(j) < 0;
        }
        return interior;
    }

    double potential(double t_barrier, const Eigen::VectorXd& z, const Eigen::VectorXd& gvals,
                     const Eigen::VectorXd& hvals) const {
        double phi = -t_barrier * z(dim - 1);
        for (int ai = 0; ai < n_active(); ++ai) phi -= std::log(-gvals(ai));
        for (long j = 0; j < hvals.size(); ++j) phi -= std::log(-hvals(j));
        return phi;
    }

    void derivatives(double t_barrier, const Eigen::VectorXd& z, const Eigen::VectorXd& gvals,
                     const Eigen::VectorXd& hvals, Eigen::VectorXd& grad,
                     Eigen::MatrixXd& hess) const {
        grad.setZero(dim);
        hess.setZero(dim, dim);
        grad(dim - 1) = -t_barrier;
        const auto q = waypoints(z);

        Eigen::VectorXd gi(dim);
        for (int ai = 0; ai < n_active(); ++ai) {
            const double g = gvals(ai);
            const double inv = 1.0 / (-g);
            gi.setZero();
            gi(dim - 1) = 1.0;
            for (int m = 0; m < nfree; ++m) {
                const double u = weights(ai, m);
                if (u == 0.0) continue;
                const Eigen::Vector2d d = q.col(m) - active_users.col(ai);
                gi.segment<2>(2 * m) = 2.0 * u * d;
                hess(2 * m, 2 * m) += 2.0 * u * inv;
                hess(2 * m + 1, 2 * m + 1) += 2.0 * u * inv;
            }
            grad.noalias() += inv * gi;
            hess.noalias() += (inv * inv) * (gi * gi.transpose());
        }

        for (size_t j = 0; j < speed_pairs.size(); ++j) {
            const auto [a, b] = speed_pairs[j];
            const double h = hvals(j);
            const double inv = 1.0 / (-h);
            const Eigen::Vector2d d = q.col(b) - q.col(a);
            const Eigen::Vector2d gb = 2.0 * d;
            grad.segment<2>(2 * a) -= inv * gb;
            grad.segment<2>(2 * b) += inv * gb;

            const Eigen::Matrix2d outer = (inv * inv) * (gb * gb.transpose());
            const Eigen::Matrix2d curv = (2.0 * inv) * Eigen::Matrix2d::Identity();
            hess.block<2, 2>(2 * a, 2 * a) += outer + curv;
            hess.block<2, 2>(2 * b, 2 * b) += outer + curv;
            hess.block<2, 2>(2 * a, 2 * b) -= outer + curv;
            hess.block<2, 2>(2 * b, 2 * a) -= outer + curv;
        }
    }
};

}  // namespace

ScaBound build_bound(const Scenario& s, const Trajectory& anchor) {
    const int n = s.num_slots();
    const int k = s.num_users();
    if (anchor.num_slots() != n) {
        throw LengthMismatchError("anchor has " + std::to_string(anchor.num_slots()) +
                                  " waypoints, scenario expects " + std::to_string(n));
    }
    ScaBound b;
    b.curvature.resize(k, n);
    b.intercept.resize(k, n);
    b.anchor_dist2.resize(k, n);
    b.anchor = anchor;
    b.users = s.users();
    const double h2 = s.altitude_m() * s.altitude_m();
    const double g0 = s.ref_snr();
    for (int nn = 0; nn < n; ++nn) {
        for (int i = 0; i < k; ++i) {
            const double d2 = (anchor.waypoints.col(nn) - s.users().col(i)).squaredNorm();
            b.anchor_dist2(i, nn) = d2;
            b.curvature(i, nn) = g0 * std::numbers::log2e / ((h2 + d2) * (h2 + d2 + g0));
            b.intercept(i, nn) = std::log1p(g0 / (h2 + d2)) * std::numbers::log2e;
        }
    }
    return b;
}

double lower_bound_rate(const ScaBound& b, const Eigen::Vector2d& q, int user, int slot) {
    if (user < 0 || user >= b.curvature.rows()) {
        throw IndexOutOfRangeError("user index " + std::to_string(user) + " out of range");
    }
    if (slot < 0 || slot >= b.curvature.cols()) {
        throw IndexOutOfRangeError("slot index " + std::to_string(slot) + " out of range");
    }
    const double d2 = (q - b.users.col(user)).squaredNorm();
    return -b.curvature(user, slot) * (d2 - b.anchor_dist2(user, slot)) + b.intercept(user, slot);
}

QcqpSolution solve_trajectory_qcqp(const Scenario& s, const Schedule& a,
                                   const Trajectory& anchor, double qcqp_tol,
                                   double qcqp_feas_tol) {
    const int n = s.num_slots();
    const int k = s.num_users();
    if (a.shares.rows() != k || a.shares.cols() != n) {
        throw DimensionMismatchError("schedule dimensions do not match the scenario");
    }
    if (!schedule_feasible(a, 1e-6)) {
        throw Error("schedule violates the slot-share constraints");
    }
    {
        const FeasibilityVerdict v = validate_trajectory(s, anchor, qcqp_feas_tol);
        if (!v.feasible()) {
            throw InfeasibleTrajectoryError("qcqp anchor trajectory is infeasible");
        }
    }

    const ScaBound bound = build_bound(s, anchor);

    std::vector<int> active, zero_share;
    for (int i = 0; i < k; ++i) {
        if ((a.shares.row(i).array() >= kShareDrop).any()) active.push_back(i);
        else zero_share.push_back(i);
    }

    // minorant objective at the anchor itself (where it equals the true rate)
    double eta_anchor = std::numeric_limits<double>::infinity();
    for (int i : active) {
        double v = 0;
        for (int nn = 0; nn < n; ++nn) {
            const double share = a.shares(i, nn);
            if (share >= kShareDrop) v += share * bound.intercept(i, nn);
        }
        eta_anchor = std::min(eta_anchor, v / n);
    }

    QcqpSolution fallback;
    fallback.trajectory = anchor;
    fallback.status = QcqpStatus::Fallback;
    fallback.objective = active.empty() ? 0.0 : eta_anchor;
    fallback.zero_share_users = zero_share;

    if (active.empty()) {
        fallback.status = QcqpStatus::Optimal;
        return fallback;
    }

    Barrier prob;
    prob.num_slots = n;
    prob.nfree = n - 1;
    prob.dim = 2 * prob.nfree + 1;
    // Keep a hair of interior margin on the travel cap: emitted trajectories
    // are serialized at 9 significant digits and must re-validate at the
    // default 1e-6 m^2 tolerance after that rounding.
    const double smax2 = s.max_step_m() * s.max_step_m();
    prob.smax2 = smax2 - step_interior_margin2(s.max_step_m());
    const int na = static_cast<int>(active.size());
    prob.weights = Eigen::MatrixXd::Zero(na, prob.nfree);
    prob.consts = Eigen::VectorXd::Zero(na);
    prob.active_users.resize(2, na);
    for (int ai = 0; ai < na; ++ai) {
        const int i = active[ai];
        prob.active_users.col(ai) = s.users().col(i);
        for (int nn = 0; nn < n; ++nn) {
            const double share = a.shares(i, nn);
            if (share < kShareDrop) continue;
            const int m = (nn == n - 1) ? 0 : nn;
            prob.weights(ai, m) += share * bound.curvature(i, nn) / n;
            prob.consts(ai) += share *
                               (bound.curvature(i, nn) * bound.anchor_dist2(i, nn) +
                                bound.intercept(i, nn)) /
                               n;
        }
    }
    for (int m = 0; m + 1 < prob.nfree; ++m) prob.speed_pairs.emplace_back(m, m + 1);
    if (prob.nfree >= 2) prob.speed_pairs.emplace_back(prob.nfree - 1, 0);

    Eigen::VectorXd z(prob.dim);
    {
        Eigen::Map<Eigen::Matrix2Xd> q(z.data(), 2, prob.nfree);
        q = anchor.waypoints.leftCols(prob.nfree);
        // the anchor may sit on the travel-cap boundary; contract it toward
        // its centroid just enough for a strictly interior barrier start
        if (!prob.speed_pairs.empty()) {
            double max_step2 = 0;
            for (const auto& [pa, pb] : prob.speed_pairs) {
                max_step2 = std::max(max_step2, (q.col(pb) - q.col(pa)).squaredNorm());
            }
            const double target = prob.smax2 * (1.0 - 1e-8);
            if (max_step2 > target) {
                const double shrink = 1.0 - std::sqrt(target / max_step2);
                if (shrink > 1e-3) return fallback;
                const Eigen::Vector2d center = q.rowwise().mean();
                q = ((1.0 - shrink) * (q.colwise() - center)).colwise() + center;
                double recheck = 0;
                for (const auto& [pa, pb] : prob.speed_pairs) {
                    recheck = std::max(recheck, (q.col(pb) - q.col(pa)).squaredNorm());
                }
                if (recheck > prob.smax2 * (1.0 - 0.5e-8)) return fallback;
            }
        }
        z(prob.dim - 1) = prob.min_user_value(z) - 1e-6;
    }

    Eigen::VectorXd gvals(na), hvals(static_cast<long>(prob.speed_pairs.size()));
    Eigen::VectorXd grad(prob.dim), dz(prob.dim), z_trial(prob.dim);
    Eigen::VectorXd gvals_t(na), hvals_t(static_cast<long>(prob.speed_pairs.size()));
    Eigen::MatrixXd hess(prob.dim, prob.dim);

    int newton_total = 0;
    bool failed = false;
    double t_barrier = 1.0;
    while (!failed) {
        for (int inner = 0; inner < kMaxInnerIters; ++inner) {
            if (!prob.evaluate(z, gvals, hvals)) {
                failed = true;  // drifted out of the interior
                break;
            }
            prob.derivatives(t_barrier, z, gvals, hvals, grad, hess);

            Eigen::LLT<Eigen::MatrixXd> llt(hess);
            double jitter = 0;
            for (int tries = 0; llt.info() != Eigen::Success && tries < 4; ++tries) {
                const double base = hess.diagonal().cwiseAbs().maxCoeff();
                jitter = (jitter == 0) ? 1e-12 * std::max(base, 1.0) : jitter * 1e3;
                hess.diagonal().array() += jitter;
                llt.compute(hess);
            }
            if (llt.info() != Eigen::Success) {
                failed = true;
                break;
            }
            dz = -llt.solve(grad);
            const double lambda2 = std::max(0.0, -grad.dot(dz));
            if (0.5 * lambda2 <= kNewtonEps) break;

            ++newton_total;
            const double slope = grad.dot(dz);
            const double phi0 = prob.potential(t_barrier, z, gvals, hvals);
            double step = 1.0;
            bool accepted = false;
            while (step > 1e-18) {
                z_trial = z + step * dz;
                if (prob.evaluate(z_trial, gvals_t, hvals_t) &&
                    prob.potential(t_barrier, z_trial, gvals_t, hvals_t) <=
                        phi0 + kArmijoSlope * step * slope) {
                    accepted = true;
                    break;
                }
                step *= kBacktrack;
            }
            if (!accepted) {
                failed = true;
                break;
            }
            z = z_trial;
        }
        if (failed) break;
        if (prob.n_ineq() / t_barrier <= qcqp_tol) break;
        t_barrier *= kBarrierMu;
        if (t_barrier > 1e18) break;
    }

    fallback.newton_iters = newton_total;
    if (failed) return fallback;

    QcqpSolution out;
    out.newton_iters = newton_total;
    out.zero_share_users = zero_share;
    out.trajectory.waypoints.resize(2, n);
    out.trajectory.waypoints.leftCols(prob.nfree) = prob.waypoints(z);
    out.trajectory.waypoints.col(n - 1) = out.trajectory.waypoints.col(0);
    out.objective = prob.min_user_value(z);
    out.status = QcqpStatus::Optimal;

    const FeasibilityVerdict v = validate_trajectory(s, out.trajectory, qcqp_feas_tol);
    double worst = 0;
    for (const auto& viol : v.violations) worst = std::max(worst, viol.magnitude);
    out.max_constraint_violation = worst;
    if (!v.feasible() || out.objective < eta_anchor - qcqp_tol) {
        return fallback;  // preserve the monotonicity contract
    }
    return out;
}

}  // namespace uavtraj
