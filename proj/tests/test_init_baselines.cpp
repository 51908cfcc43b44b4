#include <doctest.h>

#include <random>

#include "test_helpers.hpp"
#include "uavtraj/init_baselines.hpp"

using namespace uavtraj;

namespace {

Eigen::Matrix2Xd square_users() {
    Eigen::Matrix2Xd u(2, 4);
    u << 500, 500, -500, -500, 500, -500, 500, -500;
    return u;
}

}  // namespace

TEST_CASE("circular_init geometry") {
    SUBCASE("single user degenerates to hovering") {
        const Scenario s = helpers::make_scenario(helpers::single_user(220, -60), 60, 120);
        const auto [spec, t] = circular_init(s);
        CHECK(spec.radius == 0.0);
        for (int n = 0; n < 120; ++n) {
            CHECK((t.waypoints.col(n) - Eigen::Vector2d(220, -60)).norm() == 0.0);
        }
    }

    SUBCASE("half the user spread when the period allows it") {
        const Scenario s = helpers::make_scenario(square_users(), 120, 240);
        const auto [spec, t] = circular_init(s);
        CHECK(spec.center.norm() < 1e-12);
        CHECK(spec.radius == doctest::Approx(353.55339059327378).epsilon(1e-12));
        // waypoints actually ride the requested circle here
        CHECK((t.waypoints.col(0) - spec.center).norm() ==
              doctest::Approx(spec.radius).epsilon(1e-12));
    }

    SUBCASE("speed-limited radius for a short period") {
        const Scenario s = helpers::make_scenario(square_users(), 30, 60);
        const auto [spec, t] = circular_init(s);
        CHECK(spec.radius == doctest::Approx(238.73241463784302).epsilon(1e-12));
        // the N-gon inscribed cap binds just below the continuous-time radius
        const double waypoint_radius = (t.waypoints.col(0) - spec.center).norm();
        CHECK(waypoint_radius <= spec.radius);
        const double cap2 = s.max_step_m() * s.max_step_m();
        const double chord_cap = std::sqrt(cap2 - step_interior_margin2(s.max_step_m()));
        CHECK(waypoint_radius ==
              doctest::Approx(chord_cap / (2.0 * std::sin(std::numbers::pi / 59)))
                  .epsilon(1e-9));
        CHECK(validate_trajectory(s, t).feasible());
    }

    SUBCASE("loop closes exactly and the circle respects the speed budget") {
        std::mt19937 rng(3);
        for (int rep = 0; rep < 8; ++rep) {
            const int n = 12 + 31 * rep;
            const Scenario s =
                helpers::make_scenario(helpers::random_users(rng, 2 + rep % 5, 1400), 45, n);
            const auto [spec, t] = circular_init(s);
            CHECK(t.waypoints.col(0) == t.waypoints.col(n - 1));
            CHECK(2 * std::numbers::pi * spec.radius <=
                  s.v_max_mps() * s.period_s() + 1e-9);
            CHECK(validate_trajectory(s, t).feasible());
        }
    }
}

TEST_CASE("static baseline") {
    SUBCASE("single user at the center reaches the overhead rate") {
        const Scenario s = helpers::make_scenario(helpers::single_user(700, 700), 60, 120);
        const SolveReport report = static_uav_baseline(s);
        CHECK(report.eta_relaxed() == doctest::Approx(13.287856641840545).epsilon(1e-9));
    }

    SUBCASE("objective is independent of the period") {
        std::mt19937 rng(11);
        const Eigen::Matrix2Xd users = helpers::random_users(rng, 4, 1000);
        const SolveReport short_period =
            static_uav_baseline(helpers::make_scenario(users, 30, 60));
        const SolveReport long_period =
            static_uav_baseline(helpers::make_scenario(users, 120, 240));
        CHECK(short_period.eta_relaxed() ==
              doctest::Approx(long_period.eta_relaxed()).epsilon(1e-9));
    }

    SUBCASE("symmetric users split time evenly") {
        Eigen::Matrix2Xd u(2, 2);
        u << -300, 300, 0, 0;
        const Scenario s = helpers::make_scenario(u, 20, 40);
        const SolveReport report = static_uav_baseline(s);
        CHECK(report.final_schedule.shares.row(0).sum() == doctest::Approx(20.0).epsilon(1e-6));
        CHECK(report.final_schedule.shares.row(1).sum() == doctest::Approx(20.0).epsilon(1e-6));
    }
}

TEST_CASE("circular baseline") {
    SUBCASE("degenerates to the static hover for a single user") {
        const Scenario s = helpers::make_scenario(helpers::single_user(123, 456), 40, 80);
        CHECK(circular_baseline(s).eta_relaxed() ==
              doctest::Approx(static_uav_baseline(s).eta_relaxed()).epsilon(1e-12));
    }

    SUBCASE("every baseline respects the upper bound") {
        std::mt19937 rng(19);
        for (int rep = 0; rep < 5; ++rep) {
            const Scenario s =
                helpers::make_scenario(helpers::random_users(rng, 2 + rep, 1400), 60, 120);
            const double ub = rate_upper_bound(s);
            CHECK(static_uav_baseline(s).eta_relaxed() <= ub + 1e-9);
            CHECK(circular_baseline(s).eta_relaxed() <= ub + 1e-9);
        }
    }
}

TEST_CASE("rate_upper_bound closed forms") {
    std::mt19937 rng(4);
    const Scenario six = helpers::make_scenario(helpers::random_users(rng, 6, 1400), 120, 240);
    CHECK(rate_upper_bound(six) == doctest::Approx(2.2146427736400907).epsilon(1e-12));

    const Scenario one = helpers::make_scenario(helpers::single_user(0, 0), 120, 240);
    CHECK(rate_upper_bound(one) == doctest::Approx(13.287856641840545).epsilon(1e-12));

    const Scenario two = helpers::make_scenario(helpers::random_users(rng, 2, 1400), 120, 240);
    const Scenario four = helpers::make_scenario(helpers::random_users(rng, 4, 1400), 120, 240);
    CHECK(rate_upper_bound(two) == doctest::Approx(2.0 * rate_upper_bound(four)).epsilon(1e-12));
}
