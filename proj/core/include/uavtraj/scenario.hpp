#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <string>
#include <vector>

#include "uavtraj/errors.hpp"

namespace uavtraj {

struct ScenarioParams {
    Eigen::Matrix2Xd users;     // one column per ground user, meters
    double altitude_m = 0;      // fixed flight altitude H
    double period_s = 0;        // cyclical TDMA period T
    int num_slots = 0;          // N equal-time slots per period
    double v_max_mps = 0;       // maximum horizontal speed
    double tx_power_w = 0;      // transmit power P
    double ref_gain = 0;        // linear channel power gain at 1 m
    double noise_power_w = 0;   // receiver AWGN power
};

/// Immutable problem instance. Validates all physical parameters on
/// construction and precomputes the derived slot length, per-slot travel
/// cap and reference SNR.
class Scenario {
public:
    explicit Scenario(ScenarioParams params);

    const Eigen::Matrix2Xd& users() const noexcept { return params_.users; }
    int num_users() const noexcept { return static_cast<int>(params_.users.cols()); }
    double altitude_m() const noexcept { return params_.altitude_m; }
    double period_s() const noexcept { return params_.period_s; }
    int num_slots() const noexcept { return params_.num_slots; }
    double v_max_mps() const noexcept { return params_.v_max_mps; }
    double tx_power_w() const noexcept { return params_.tx_power_w; }
    double ref_gain() const noexcept { return params_.ref_gain; }
    double noise_power_w() const noexcept { return params_.noise_power_w; }

    /// T / N, seconds.
    double slot_length_s() const noexcept { return slot_length_s_; }
    /// Largest horizontal distance coverable within one slot, meters.
    double max_step_m() const noexcept { return max_step_m_; }
    /// P * ref_gain / noise_power, the received SNR at 1 m separation.
    double ref_snr() const noexcept { return ref_snr_; }

private:
    ScenarioParams params_;
    double slot_length_s_ = 0;
    double max_step_m_ = 0;
    double ref_snr_ = 0;
};

/// One horizontal waypoint per slot; column n is the position held
/// throughout slot n. A valid trajectory closes on itself: the last
/// column repeats the first.
struct Trajectory {
    Eigen::Matrix2Xd waypoints;

    int num_slots() const noexcept { return static_cast<int>(waypoints.cols()); }
};

/// Slot-share matrix: shares(i, n) is the fraction of slot n assigned to
/// user i. `binary` marks a schedule whose entries are all exactly 0 or 1.
struct Schedule {
    Eigen::MatrixXd shares;
    bool binary = false;

    int num_users() const noexcept { return static_cast<int>(shares.rows()); }
    int num_slots() const noexcept { return static_cast<int>(shares.cols()); }
};

enum class ViolationKind { Periodicity, Speed, NonFinite };

struct TrajectoryViolation {
    ViolationKind kind;
    int index;         // 0-based slot of the offending step or waypoint
    double magnitude;  // m^2 for Speed, meters for Periodicity
};

struct FeasibilityVerdict {
    std::vector<TrajectoryViolation> violations;

    bool feasible() const noexcept { return violations.empty(); }
};

inline constexpr double kDefaultFeasTol = 1e-6;         // m^2, step-length constraint
inline constexpr double kDefaultPeriodicityTol = 1e-9;  // m, loop-closure equality

/// Interior margin (m^2) kept between generated steps and the travel cap so
/// that trajectories serialized at 9 significant digits still validate at
/// kDefaultFeasTol after being reloaded.
inline double step_interior_margin2(double max_step_m) {
    const double cap2 = max_step_m * max_step_m;
    return std::min(0.5 * cap2, std::max(1e-4, 1e-4 * max_step_m));
}

/// Parses a flat `key = value` configuration (see README for the key list)
/// into a validated Scenario. dB/dBm keys are converted to linear units here;
/// everything downstream is SI.
Scenario load_scenario(const std::string& config_text);

/// Reads the file at `path` and forwards to load_scenario.
Scenario load_scenario_file(const std::string& path);

/// Inverse of load_scenario: serializes `s` so that loading the result
/// reproduces the scenario.
std::string render_scenario(const Scenario& s);

/// Checks loop closure and the per-slot travel cap. Returns every violated
/// constraint with its index and magnitude; an empty list means feasible.
/// Throws LengthMismatchError when the waypoint count differs from N.
FeasibilityVerdict validate_trajectory(const Scenario& s, const Trajectory& t,
                                       double feas_tol = kDefaultFeasTol,
                                       double periodicity_tol = kDefaultPeriodicityTol);

/// True when all shares lie in [0,1] and every per-slot column sums to at
/// most 1, within `tol`.
bool schedule_feasible(const Schedule& a, double tol = 1e-9);

}  // namespace uavtraj
