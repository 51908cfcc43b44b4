#include <doctest.h>

#include "test_helpers.hpp"
#include "uavtraj/scenario.hpp"

using namespace uavtraj;

namespace {

const char* kReferenceConfig = R"(
# six users, one realization
users = 327,516; 613,297; 1034,478; 1057,926; 647,1104; 308,949
altitude_m = 100
period_s = 120
num_slots = 240
v_max_mps = 50
tx_power_w = 0.1
ref_gain_db = -50
noise_power_dbm = -110
)";

}  // namespace

TEST_CASE("load_scenario accepts the reference setup and derives constants") {
    const Scenario s = load_scenario(kReferenceConfig);
    CHECK(s.num_users() == 6);
    CHECK(s.altitude_m() == 100.0);
    CHECK(s.period_s() == 120.0);
    CHECK(s.num_slots() == 240);
    CHECK(s.ref_gain() == doctest::Approx(1e-5).epsilon(1e-12));
    CHECK(s.noise_power_w() == doctest::Approx(1e-14).epsilon(1e-12));
    CHECK(s.ref_snr() == doctest::Approx(1e8).epsilon(1e-12));
    CHECK(s.slot_length_s() == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(s.max_step_m() == doctest::Approx(25.0).epsilon(1e-15));
    CHECK(s.users()(0, 0) == 327.0);
    CHECK(s.users()(1, 5) == 949.0);
}

TEST_CASE("derived reference SNR equals P*rho0/sigma2 exactly") {
    const Scenario s = helpers::make_scenario(helpers::single_user(0, 0), 60, 120);
    CHECK(s.ref_snr() == s.tx_power_w() * s.ref_gain() / s.noise_power_w());
}

TEST_CASE("load_scenario rejects bad configurations with the offending key") {
    const auto patch = [&](const std::string& from, const std::string& to) {
        std::string text = kReferenceConfig;
        const size_t at = text.find(from);
        REQUIRE(at != std::string::npos);
        text.replace(at, from.size(), to);
        return text;
    };

    CHECK_THROWS_AS(load_scenario(patch("altitude_m = 100", "altitude_m = 0")),
                    NonPositiveParameterError);
    try {
        load_scenario(patch("altitude_m = 100", "altitude_m = 0"));
    } catch (const ConfigError& e) {
        CHECK(e.key() == "altitude_m");
    }

    CHECK_THROWS_AS(load_scenario(patch("period_s = 120", "period_s = twelve")),
                    MalformedNumberError);
    CHECK_THROWS_AS(load_scenario(patch("period_s = 120", "cadence_s = 120")),
                    UnknownKeyError);
    CHECK_THROWS_AS(load_scenario(patch("period_s = 120\n", "")), MissingKeyError);
    CHECK_THROWS_AS(load_scenario(patch("num_slots = 240", "num_slots = 1")),
                    NonPositiveParameterError);
    CHECK_THROWS_AS(load_scenario(std::string(kReferenceConfig) + "\nperiod_s = 60\n"),
                    ConfigError);
}

TEST_CASE("scenario render/load round-trip") {
    const Scenario s = load_scenario(kReferenceConfig);
    const Scenario r = load_scenario(render_scenario(s));
    CHECK(r.users() == s.users());
    CHECK(r.altitude_m() == s.altitude_m());
    CHECK(r.period_s() == s.period_s());
    CHECK(r.num_slots() == s.num_slots());
    CHECK(r.v_max_mps() == s.v_max_mps());
    CHECK(r.tx_power_w() == s.tx_power_w());
    // dB keys go through pow/log10, exact to ~1 ulp
    CHECK(r.ref_gain() == doctest::Approx(s.ref_gain()).epsilon(1e-12));
    CHECK(r.noise_power_w() == doctest::Approx(s.noise_power_w()).epsilon(1e-12));
}

TEST_CASE("validate_trajectory flags each violated constraint") {
    const Scenario s = helpers::make_scenario(helpers::single_user(0, 0), 120, 240);
    REQUIRE(s.max_step_m() == doctest::Approx(25.0));

    SUBCASE("hovering is feasible") {
        const FeasibilityVerdict v = validate_trajectory(s, helpers::hover_at(40, -7, 240));
        CHECK(v.feasible());
    }

    SUBCASE("an over-long step is reported with its squared excess") {
        Trajectory t = helpers::hover_at(0, 0, 240);
        t.waypoints(0, 5) = 26.0;  // step of 26 m from slot 4 to 5 and 5 to 6
        const FeasibilityVerdict v = validate_trajectory(s, t, 1e-6);
        REQUIRE(v.violations.size() == 2);
        CHECK(v.violations[0].kind == ViolationKind::Speed);
        CHECK(v.violations[0].index == 4);
        CHECK(v.violations[0].magnitude == doctest::Approx(26.0 * 26.0 - 25.0 * 25.0));
    }

    SUBCASE("an open loop violates periodicity") {
        Trajectory t = helpers::hover_at(0, 0, 240);
        t.waypoints(1, 239) = 1.0;
        const FeasibilityVerdict v = validate_trajectory(s, t);
        bool found = false;
        for (const auto& viol : v.violations) {
            if (viol.kind == ViolationKind::Periodicity) {
                found = true;
                CHECK(viol.magnitude == doctest::Approx(1.0));
            }
        }
        CHECK(found);
    }

    SUBCASE("wrong waypoint count throws") {
        CHECK_THROWS_AS(validate_trajectory(s, helpers::hover_at(0, 0, 239)),
                        LengthMismatchError);
    }
}

TEST_CASE("coincident user positions are accepted") {
    Eigen::Matrix2Xd users(2, 2);
    users << 250, 250, 400, 400;  // both users at (250, 400)
    const Scenario s = helpers::make_scenario(users, 20, 40);
    CHECK(s.num_users() == 2);
}

TEST_CASE("schedule_feasible checks bounds and per-slot sums") {
    Schedule a;
    a.shares = Eigen::MatrixXd::Constant(2, 3, 0.5);
    CHECK(schedule_feasible(a));
    a.shares(0, 1) = 0.7;  // column sums to 1.2
    CHECK_FALSE(schedule_feasible(a));
    a.shares(0, 1) = -0.1;
    CHECK_FALSE(schedule_feasible(a));
}
