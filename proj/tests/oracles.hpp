// Test-only reference implementations, kept independent of the solver paths
// they validate.
#pragma once

#include <Eigen/Core>
#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace oracles {

// Dual value of the max-min scheduling problem at user weights `lambda`:
//   G(lambda) = (1/N) * sum_n max_i lambda_i * R(i, n)
// By LP duality the scheduling optimum equals min over the simplex of G.
inline double dual_value(const Eigen::MatrixXd& rates, const Eigen::VectorXd& lambda) {
    double acc = 0;
    for (int n = 0; n < rates.cols(); ++n) {
        double best = 0;
        for (int i = 0; i < rates.rows(); ++i) best = std::max(best, lambda(i) * rates(i, n));
        acc += best;
    }
    return acc / rates.cols();
}

// Exact max-min scheduling optimum for K <= 3 users via minimax duality:
// G is piecewise-linear convex on the weight simplex, so its minimum sits at
// an intersection of tie lines / simplex facets, all of which are enumerated.
inline double maxmin_lp_oracle(const Eigen::MatrixXd& rates) {
    const int k = static_cast<int>(rates.rows());
    const int n = static_cast<int>(rates.cols());
    if (k == 1) return rates.row(0).mean();

    double best = std::numeric_limits<double>::infinity();
    const auto consider = [&](Eigen::VectorXd lambda) {
        for (int i = 0; i < k; ++i) {
            if (lambda(i) < -1e-9) return;
            lambda(i) = std::max(lambda(i), 0.0);
        }
        const double sum = lambda.sum();
        if (sum <= 1e-12) return;
        best = std::min(best, dual_value(rates, lambda / sum));
    };

    if (k == 2) {
        consider(Eigen::Vector2d(1, 0));
        consider(Eigen::Vector2d(0, 1));
        for (int nn = 0; nn < n; ++nn) {
            const double denom = rates(0, nn) + rates(1, nn);
            if (denom <= 0) continue;
            const double l1 = rates(1, nn) / denom;  // l1*R1 == (1-l1)*R2
            consider(Eigen::Vector2d(l1, 1 - l1));
        }
        return best;
    }

    // k == 3: lines a . (l1, l2) = c over the l3 = 1 - l1 - l2 chart
    struct Line {
        Eigen::Vector2d a;
        double c;
    };
    std::vector<Line> lines;
    lines.push_back({{1, 0}, 0});  // l1 = 0
    lines.push_back({{0, 1}, 0});  // l2 = 0
    lines.push_back({{1, 1}, 1});  // l3 = 0
    for (int nn = 0; nn < n; ++nn) {
        const double r1 = rates(0, nn), r2 = rates(1, nn), r3 = rates(2, nn);
        lines.push_back({{r1, -r2}, 0});        // l1 r1 = l2 r2
        lines.push_back({{r1 + r3, r3}, r3});   // l1 r1 = l3 r3
        lines.push_back({{r3, r2 + r3}, r3});   // l2 r2 = l3 r3
    }
    for (size_t p = 0; p < lines.size(); ++p) {
        for (size_t q = p + 1; q < lines.size(); ++q) {
            Eigen::Matrix2d m;
            m.row(0) = lines[p].a.transpose();
            m.row(1) = lines[q].a.transpose();
            const double det = m.determinant();
            const double scale = m.cwiseAbs().maxCoeff();
            if (std::abs(det) <= 1e-12 * std::max(1.0, scale * scale)) continue;
            const Eigen::Vector2d sol = m.inverse() * Eigen::Vector2d(lines[p].c, lines[q].c);
            consider(Eigen::Vector3d(sol(0), sol(1), 1 - sol(0) - sol(1)));
        }
    }
    return best;
}

// Best objective over every binary assignment (including idle slots),
// (K+1)^N enumeration; only sensible for tiny instances.
inline double best_binary_objective(const Eigen::MatrixXd& rates) {
    const int k = static_cast<int>(rates.rows());
    const int n = static_cast<int>(rates.cols());
    long total = 1;
    for (int i = 0; i < n; ++i) total *= (k + 1);
    double best = -std::numeric_limits<double>::infinity();
    std::vector<int> pick(n);
    for (long code = 0; code < total; ++code) {
        long c = code;
        for (int nn = 0; nn < n; ++nn) {
            pick[nn] = static_cast<int>(c % (k + 1));
            c /= (k + 1);
        }
        Eigen::VectorXd avg = Eigen::VectorXd::Zero(k);
        for (int nn = 0; nn < n; ++nn) {
            if (pick[nn] > 0) avg(pick[nn] - 1) += rates(pick[nn] - 1, nn);
        }
        best = std::max(best, avg.minCoeff() / n);
    }
    return best;
}

// Central finite-difference gradient of a scalar field over R^2.
template <class F>
Eigen::Vector2d fd_gradient(F&& f, const Eigen::Vector2d& q, double h) {
    Eigen::Vector2d g;
    for (int d = 0; d < 2; ++d) {
        Eigen::Vector2d hi = q, lo = q;
        hi(d) += h;
        lo(d) -= h;
        g(d) = (f(hi) - f(lo)) / (2 * h);
    }
    return g;
}

}  // namespace oracles
