#include <CLI11.hpp>
#include <iostream>
#include <string>
#include <vector>

#include "uavtraj/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Max-min fair joint user scheduling and cyclic trajectory design "
                 "for a UAV base station"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string out_dir = "out";
    uavtraj::CommandOptions opt;
    std::vector<double> periods = {30, 60, 90, 120};
    double sweep_slot_length = 0.5;

    const auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("scenario", scenario_path, "Scenario configuration file")->required();
        cmd->add_option("-o,--out", out_dir, "Output directory (created if missing)");
    };
    const auto add_solver_flags = [&](CLI::App* cmd) {
        cmd->add_option("--epsilon", opt.bcd.epsilon,
                        "Fractional-increase convergence threshold");
        cmd->add_option("--tau", opt.bcd.tau, "Sub-slots per slot for binary recovery");
        cmd->add_option("--max-iters", opt.bcd.max_outer_iters, "Outer iteration cap");
        cmd->add_option("--seed", opt.seed,
                        "Reserved for future stochastic features; currently unused");
    };

    CLI::App* solve = app.add_subcommand(
        "solve", "Optimize scheduling and trajectory for one scenario");
    add_common(solve);
    add_solver_flags(solve);
    solve->add_option("--slot-length", opt.slot_length_s,
                      "Override num_slots with ceil(period / this), seconds");
    solve->add_option("--decimate", opt.decimate_s,
                      "Also write a trajectory sampled every this many seconds");

    CLI::App* sweep = app.add_subcommand(
        "sweep", "Compare proposed/circular/static schemes across periods");
    add_common(sweep);
    add_solver_flags(sweep);
    sweep->add_option("--periods", periods, "Periods to sweep, seconds")->delimiter(',');
    sweep->add_option("--slot-length", sweep_slot_length,
                      "Target slot length used to derive N per period, seconds");

    CLI::App* init = app.add_subcommand(
        "init-only", "Write only the circular initialization trajectory");
    add_common(init);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : uavtraj::kExitConfig;
    }

    if (solve->parsed()) {
        return uavtraj::cmd_solve(scenario_path, out_dir, opt, std::cout, std::cerr);
    }
    if (sweep->parsed()) {
        uavtraj::SweepSpec spec;
        spec.periods_s = periods;
        spec.slot_length_s = sweep_slot_length;
        return uavtraj::cmd_sweep(scenario_path, spec, out_dir, opt, std::cout, std::cerr);
    }
    return uavtraj::cmd_init_only(scenario_path, out_dir, std::cout, std::cerr);
}
