#include <benchmark/benchmark.h>

#include <random>

#include "uavtraj/init_baselines.hpp"

using namespace uavtraj;

namespace {

Scenario bench_scenario(int k, double period_s, int num_slots) {
    std::mt19937 rng(12);
    std::uniform_real_distribution<double> coord(0.0, 1400.0);
    ScenarioParams p;
    p.users.resize(2, k);
    for (int i = 0; i < k; ++i) {
        p.users(0, i) = coord(rng);
        p.users(1, i) = coord(rng);
    }
    p.altitude_m = 100;
    p.period_s = period_s;
    p.num_slots = num_slots;
    p.v_max_mps = 50;
    p.tx_power_w = 0.1;
    p.ref_gain = 1e-5;
    p.noise_power_w = 1e-14;
    return Scenario(std::move(p));
}

}  // namespace

static void BM_RateTable(benchmark::State& state) {
    const Scenario s = bench_scenario(6, 120, static_cast<int>(state.range(0)));
    const Trajectory t = circular_init(s).second;
    for (auto _ : state) {
        benchmark::DoNotOptimize(rate_table(s, t));
    }
}
BENCHMARK(BM_RateTable)->Arg(60)->Arg(240);

static void BM_SchedulingLp(benchmark::State& state) {
    const Scenario s = bench_scenario(6, 120, static_cast<int>(state.range(0)));
    const RateTable rt = rate_table(s, circular_init(s).second);
    const LpStandardForm lp = build_scheduling_lp(rt);
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_lp(lp));
    }
}
BENCHMARK(BM_SchedulingLp)->Arg(60)->Arg(120)->Arg(240);

static void BM_BuildBound(benchmark::State& state) {
    const Scenario s = bench_scenario(6, 120, 240);
    const Trajectory t = circular_init(s).second;
    for (auto _ : state) {
        benchmark::DoNotOptimize(build_bound(s, t));
    }
}
BENCHMARK(BM_BuildBound);

static void BM_TrajectoryQcqp(benchmark::State& state) {
    const Scenario s = bench_scenario(4, 30, static_cast<int>(state.range(0)));
    const Trajectory init = circular_init(s).second;
    const RateTable rt = rate_table(s, init);
    const LpSolution sol = solve_lp(build_scheduling_lp(rt));
    const Schedule a = extract_schedule(sol, s.num_users(), s.num_slots());
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_trajectory_qcqp(s, a, init));
    }
}
BENCHMARK(BM_TrajectoryQcqp)->Arg(30)->Arg(60);

static void BM_BcdSolveSmall(benchmark::State& state) {
    const Scenario s = bench_scenario(3, 20, 40);
    const Trajectory init = circular_init(s).second;
    for (auto _ : state) {
        benchmark::DoNotOptimize(bcd_solve(s, init));
    }
}
BENCHMARK(BM_BcdSolveSmall);

BENCHMARK_MAIN();
