#include "uavtraj/commands.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

namespace uavtraj {

namespace fs = std::filesystem;

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return std::string(buf);
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path + "'");
    return out;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, sep)) fields.push_back(f);
    return fields;
}

Scenario with_period(const Scenario& s, double period_s, double slot_length_s) {
    ScenarioParams p;
    p.users = s.users();
    p.altitude_m = s.altitude_m();
    p.period_s = period_s;
    p.num_slots = static_cast<int>(std::ceil(period_s / slot_length_s));
    p.v_max_mps = s.v_max_mps();
    p.tx_power_w = s.tx_power_w();
    p.ref_gain = s.ref_gain();
    p.noise_power_w = s.noise_power_w();
    return Scenario(std::move(p));
}

// Loads the scenario (optionally re-deriving N from a slot-length target) and
// prepares the output directory. Configuration problems end up on `diag` and
// leave the optional empty.
std::optional<Scenario> prepare(const std::string& scenario_path, double slot_length_s,
                                const std::string& out_dir, std::ostream& diag) {
    std::optional<Scenario> s;
    try {
        s = load_scenario_file(scenario_path);
        if (slot_length_s > 0) s = with_period(*s, s->period_s(), slot_length_s);
        fs::create_directories(out_dir);
    } catch (const std::exception& e) {
        diag << "error: " << e.what() << "\n";
        return std::nullopt;
    }
    return s;
}

void write_report_csv(const std::string& path, const Scenario& s, const SolveReport& report) {
    std::ofstream out = open_out(path);
    out << "key,value\n";
    out << "eta_relaxed," << fmt(report.eta_relaxed()) << "\n";
    out << "eta_binary," << fmt(report.eta_binary()) << "\n";
    out << "binary_gap," << fmt(report.binary_gap) << "\n";
    out << "upper_bound," << fmt(rate_upper_bound(s)) << "\n";
    out << "iterations," << report.iterations() << "\n";
    out << "status," << (report.status == BcdStatus::Converged ? "converged" : "max_iters")
        << "\n";
    out << "wall_time_s," << fmt(report.wall_time_s) << "\n";
}

void write_decimated_csv(const std::string& path, const Scenario& s, const Trajectory& t,
                         double decimate_s) {
    const int stride = std::max(1, static_cast<int>(std::llround(decimate_s / s.slot_length_s())));
    std::ofstream out = open_out(path);
    out << "slot,x_m,y_m\n";
    for (int n = 0; n < t.num_slots(); n += stride) {
        out << (n + 1) << "," << fmt(t.waypoints(0, n)) << "," << fmt(t.waypoints(1, n)) << "\n";
    }
}

struct SweepRow {
    double period_s = 0;
    std::string scheme;
    double eta_relaxed = 0;
    double eta_binary = 0;
    double upper_bound = 0;
    int iters = 0;
    std::string status = "failed";
};

SweepRow run_sweep_task(const Scenario& base, double period_s, double slot_length_s,
                        const std::string& scheme, const BcdConfig& cfg) {
    SweepRow row;
    row.period_s = period_s;
    row.scheme = scheme;
    const Scenario s = with_period(base, period_s, slot_length_s);
    row.upper_bound = rate_upper_bound(s);
    SolveReport report;
    if (scheme == "proposed") {
        report = bcd_solve(s, circular_init(s).second, cfg);
    } else if (scheme == "circular") {
        report = circular_baseline(s, cfg.tau);
    } else {
        report = static_uav_baseline(s, cfg.tau);
    }
    row.eta_relaxed = report.eta_relaxed();
    row.eta_binary = report.eta_binary();
    row.iters = report.iterations();
    row.status = report.status == BcdStatus::Converged ? "converged" : "max_iters";
    return row;
}

}  // namespace

void write_trajectory_csv(const std::string& path, const Trajectory& t) {
    std::ofstream out = open_out(path);
    out << "slot,x_m,y_m\n";
    for (int n = 0; n < t.num_slots(); ++n) {
        out << (n + 1) << "," << fmt(t.waypoints(0, n)) << "," << fmt(t.waypoints(1, n)) << "\n";
    }
}

Trajectory read_trajectory_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read '" + path + "'");
    std::string line;
    std::getline(in, line);  // header
    std::vector<Eigen::Vector2d> points;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split(line, ',');
        if (f.size() != 3) throw Error("bad trajectory row '" + line + "'");
        points.emplace_back(std::stod(f[1]), std::stod(f[2]));
    }
    Trajectory t;
    t.waypoints.resize(2, static_cast<long>(points.size()));
    for (size_t i = 0; i < points.size(); ++i) t.waypoints.col(static_cast<long>(i)) = points[i];
    return t;
}

void write_schedule_csv(const std::string& path, const Schedule& a) {
    std::ofstream out = open_out(path);
    out << "slot,user,alpha\n";
    for (int n = 0; n < a.num_slots(); ++n) {
        for (int i = 0; i < a.num_users(); ++i) {
            out << (n + 1) << "," << (i + 1) << "," << fmt(a.shares(i, n)) << "\n";
        }
    }
}

Schedule read_schedule_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read '" + path + "'");
    std::string line;
    std::getline(in, line);
    struct Entry {
        int slot, user;
        double alpha;
    };
    std::vector<Entry> entries;
    int max_slot = 0, max_user = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split(line, ',');
        if (f.size() != 3) throw Error("bad schedule row '" + line + "'");
        const Entry e{std::stoi(f[0]), std::stoi(f[1]), std::stod(f[2])};
        max_slot = std::max(max_slot, e.slot);
        max_user = std::max(max_user, e.user);
        entries.push_back(e);
    }
    Schedule a;
    a.shares = Eigen::MatrixXd::Zero(max_user, max_slot);
    for (const Entry& e : entries) a.shares(e.user - 1, e.slot - 1) = e.alpha;
    a.binary = (a.shares.array() == 0.0 || a.shares.array() == 1.0).all();
    return a;
}

void write_speed_csv(const std::string& path, const Scenario& s, const Trajectory& t) {
    std::ofstream out = open_out(path);
    out << "slot,speed_mps\n";
    for (int n = 0; n + 1 < t.num_slots(); ++n) {
        const double speed =
            (t.waypoints.col(n + 1) - t.waypoints.col(n)).norm() / s.slot_length_s();
        out << (n + 1) << "," << fmt(speed) << "\n";
    }
}

int cmd_solve(const std::string& scenario_path, const std::string& out_dir,
              const CommandOptions& opt, std::ostream& out, std::ostream& diag) {
    const std::optional<Scenario> s = prepare(scenario_path, opt.slot_length_s, out_dir, diag);
    if (!s) return kExitConfig;
    try {
        const SolveReport report = bcd_solve(*s, circular_init(*s).second, opt.bcd);
        const fs::path dir(out_dir);
        write_trajectory_csv((dir / "trajectory.csv").string(), report.final_trajectory);
        write_schedule_csv((dir / "schedule.csv").string(), report.final_schedule);
        write_speed_csv((dir / "speed.csv").string(), *s, report.final_trajectory);
        write_report_csv((dir / "report.csv").string(), *s, report);
        if (opt.decimate_s > 0) {
            write_decimated_csv((dir / "trajectory_decimated.csv").string(), *s,
                                report.final_trajectory, opt.decimate_s);
        }
        for (int i : report.zero_share_users) {
            diag << "note: user " << (i + 1) << " received no slot share\n";
        }
        out << "status: " << (report.status == BcdStatus::Converged ? "converged" : "max_iters")
            << "\n";
        out << "iterations: " << report.iterations() << "\n";
        out << "eta_relaxed: " << fmt(report.eta_relaxed()) << "\n";
        out << "eta_binary: " << fmt(report.eta_binary()) << "\n";
        out << "upper_bound: " << fmt(rate_upper_bound(*s)) << "\n";
        return report.status == BcdStatus::Converged ? kExitOk : kExitSolver;
    } catch (const std::exception& e) {
        diag << "error: " << e.what() << "\n";
        return kExitSolver;
    }
}

int cmd_sweep(const std::string& scenario_path, const SweepSpec& sweep,
              const std::string& out_dir, const CommandOptions& opt, std::ostream& out,
              std::ostream& diag) {
    if (sweep.periods_s.empty() || !(sweep.slot_length_s > 0)) {
        diag << "error: sweep needs at least one period and a positive slot length\n";
        return kExitConfig;
    }
    for (double p : sweep.periods_s) {
        if (!(p > 0) || !std::isfinite(p)) {
            diag << "error: sweep periods must be positive\n";
            return kExitConfig;
        }
    }
    const std::optional<Scenario> base = prepare(scenario_path, 0, out_dir, diag);
    if (!base) return kExitConfig;

    const std::vector<std::string> schemes = {"proposed", "circular", "static"};
    struct Task {
        double period;
        std::string scheme;
    };
    std::vector<Task> tasks;
    for (double p : sweep.periods_s) {
        for (const auto& scheme : schemes) tasks.push_back({p, scheme});
    }
    std::vector<SweepRow> rows(tasks.size());

    // worker pool over independent (period, scheme) pairs
    std::atomic<size_t> next{0};
    const unsigned workers =
        std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(),
                                        static_cast<unsigned>(tasks.size())));
    auto worker = [&]() {
        for (size_t idx = next.fetch_add(1); idx < tasks.size(); idx = next.fetch_add(1)) {
            rows[idx].period_s = tasks[idx].period;
            rows[idx].scheme = tasks[idx].scheme;
            try {
                rows[idx] = run_sweep_task(*base, tasks[idx].period, sweep.slot_length_s,
                                           tasks[idx].scheme, opt.bcd);
            } catch (const std::exception&) {
                rows[idx].status = "failed";
                rows[idx].eta_relaxed = rows[idx].eta_binary =
                    std::numeric_limits<double>::quiet_NaN();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned wi = 0; wi < workers; ++wi) pool.emplace_back(worker);
    for (auto& th : pool) th.join();

    // single writer, canonical row order
    std::ofstream csv = open_out((fs::path(out_dir) / "sweep.csv").string());
    csv << "T_s,scheme,eta_relaxed,eta_binary,upper_bound,iters,status\n";
    bool any_failed = false;
    for (const SweepRow& row : rows) {
        csv << fmt(row.period_s) << "," << row.scheme << "," << fmt(row.eta_relaxed) << ","
            << fmt(row.eta_binary) << "," << fmt(row.upper_bound) << "," << row.iters << ","
            << row.status << "\n";
        if (row.status == "failed") {
            any_failed = true;
            diag << "warning: " << row.scheme << " at T=" << row.period_s
                 << " failed, skipped\n";
        }
        out << "T=" << row.period_s << " " << row.scheme
            << ": eta_relaxed=" << fmt(row.eta_relaxed)
            << " eta_binary=" << fmt(row.eta_binary) << " (" << row.status << ")\n";
    }
    return any_failed ? kExitSolver : kExitOk;
}

int cmd_init_only(const std::string& scenario_path, const std::string& out_dir,
                  std::ostream& out, std::ostream& diag) {
    const std::optional<Scenario> s = prepare(scenario_path, 0, out_dir, diag);
    if (!s) return kExitConfig;
    const auto [spec, trajectory] = circular_init(*s);
    const fs::path dir(out_dir);
    {
        std::ofstream circle = open_out((dir / "circle.csv").string());
        circle << "center_x_m,center_y_m,radius_m\n";
        circle << fmt(spec.center.x()) << "," << fmt(spec.center.y()) << "," << fmt(spec.radius)
               << "\n";
    }
    write_trajectory_csv((dir / "trajectory.csv").string(), trajectory);
    out << "center: " << fmt(spec.center.x()) << "," << fmt(spec.center.y()) << "\n";
    out << "radius: " << fmt(spec.radius) << "\n";
    return kExitOk;
}

}  // namespace uavtraj
