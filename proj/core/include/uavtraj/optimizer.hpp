#pragma once

#include <vector>

#include "uavtraj/lp.hpp"
#include "uavtraj/sca.hpp"

namespace uavtraj {

struct BcdConfig {
    double epsilon = 1e-4;     // stop when the fractional objective increase drops below this
    int max_outer_iters = 200;
    int tau = 100;             // sub-slots per slot for binary recovery
};

enum class BcdStatus { Converged, MaxIters };

struct SolveReport {
    // objective after the initial scheduling pass, then after each full
    // scheduling + trajectory iteration; nondecreasing within solver tolerance
    std::vector<double> eta_trace;
    Schedule final_schedule;  // relaxed shares
    Trajectory final_trajectory;
    BcdStatus status = BcdStatus::MaxIters;
    double binary_gap = 0;  // objective lost by recovering a binary schedule at cfg.tau
    double wall_time_s = 0;
    std::vector<int> zero_share_users;

    double eta_relaxed() const { return eta_trace.empty() ? 0.0 : eta_trace.back(); }
    double eta_binary() const { return eta_relaxed() - binary_gap; }
    int iterations() const {
        return eta_trace.empty() ? 0 : static_cast<int>(eta_trace.size()) - 1;
    }
};

struct BinaryRecovery {
    Schedule schedule;      // binary, over tau * N sub-slots
    Trajectory trajectory;  // waypoints replicated tau times per slot
    double eta = 0;         // objective of the recovered schedule, recomputed exactly
};

/// Alternates optimal scheduling (LP) and trajectory refinement (SCA QCQP)
/// from a feasible initial trajectory until the fractional objective
/// increase falls below cfg.epsilon.
SolveReport bcd_solve(const Scenario& s, const Trajectory& init, const BcdConfig& cfg = {});

/// Expands each slot into `tau` sub-slots and apportions them per user by
/// largest remainder (smallest-index tie-break), yielding a binary schedule
/// whose objective approaches the relaxed one as tau grows.
BinaryRecovery recover_binary(const Scenario& s, const SolveReport& report, int tau);

}  // namespace uavtraj
