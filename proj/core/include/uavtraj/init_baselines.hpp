#pragma once

#include <utility>

#include "uavtraj/optimizer.hpp"

namespace uavtraj {

/// Circle used to seed the trajectory optimizer: centered at the users'
/// geometric center, radius min(speed-limited maximum, half the user spread).
struct CircleSpec {
    Eigen::Vector2d center = Eigen::Vector2d::Zero();
    double radius = 0;
};

/// Builds the circular initial trajectory. The returned waypoints sample the
/// circle at angles 2*pi*(n-1)/(N-1) so the loop closes exactly. When the
/// spec radius exceeds what an N-gon of feasible chords can reach (it can by
/// a factor up to N/(N-1) when the speed limit binds), the waypoint radius is
/// capped at the inscribed maximum so the result always validates.
std::pair<CircleSpec, Trajectory> circular_init(const Scenario& s);

/// UAV parked at the users' geometric center; scheduling optimized by one LP.
SolveReport static_uav_baseline(const Scenario& s, int tau = 100);

/// Trajectory fixed to circular_init's output; scheduling optimized by one LP.
SolveReport circular_baseline(const Scenario& s, int tau = 100);

/// (1/K) * log2(1 + ref_snr / H^2): the rate attained if the UAV could hover
/// directly above every user in turn with negligible travel time.
double rate_upper_bound(const Scenario& s);

}  // namespace uavtraj
