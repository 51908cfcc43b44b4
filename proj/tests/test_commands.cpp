#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "test_helpers.hpp"
#include "uavtraj/channel.hpp"
#include "uavtraj/commands.hpp"

using namespace uavtraj;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        static int counter = 0;
        path = fs::temp_directory_path() /
               ("uavtraj_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    std::string str(const std::string& name = "") const { return (path / name).string(); }
};

std::string write_config(const TempDir& dir, const std::string& body) {
    const std::string p = dir.str("scenario.conf");
    std::ofstream out(p);
    out << body;
    return p;
}

const char* kSmallConfig = R"(
users = 0,0; 220,40
altitude_m = 100
period_s = 16
num_slots = 32
v_max_mps = 50
tx_power_w = 0.1
ref_gain_db = -50
noise_power_dbm = -110
)";

std::map<std::string, std::string> read_report(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::map<std::string, std::string> kv;
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        const size_t comma = line.find(',');
        if (comma == std::string::npos) continue;
        kv[line.substr(0, comma)] = line.substr(comma + 1);
    }
    return kv;
}

}  // namespace

TEST_CASE("cmd_solve writes consistent artifacts") {
    TempDir dir;
    const std::string config = write_config(dir, kSmallConfig);
    std::ostringstream out, diag;
    CommandOptions opt;
    opt.decimate_s = 2.0;
    const int code = cmd_solve(config, dir.str("out"), opt, out, diag);
    CAPTURE(diag.str());
    REQUIRE(code == kExitOk);
    CHECK(out.str().find("eta_relaxed:") != std::string::npos);
    CHECK(out.str().find("eta_binary:") != std::string::npos);
    CHECK(out.str().find("iterations:") != std::string::npos);

    const Scenario s = load_scenario_file(config);
    const Trajectory t = read_trajectory_csv(dir.str("out/trajectory.csv"));
    REQUIRE(t.num_slots() == 32);
    CHECK(validate_trajectory(s, t).feasible());

    const Schedule a = read_schedule_csv(dir.str("out/schedule.csv"));
    REQUIRE(a.num_users() == 2);
    REQUIRE(a.num_slots() == 32);
    CHECK(schedule_feasible(a, 1e-6));

    // objective recomputed from the emitted files matches the report
    const auto report = read_report(dir.str("out/report.csv"));
    const double eta_files = maxmin_objective(rate_table(s, t), a);
    CHECK(std::stod(report.at("eta_relaxed")) == doctest::Approx(eta_files).epsilon(1e-6));
    CHECK(std::stod(report.at("eta_binary")) <=
          std::stod(report.at("eta_relaxed")) + 1e-12);
    CHECK(std::stod(report.at("upper_bound")) >= std::stod(report.at("eta_relaxed")) - 1e-9);
    CHECK(report.at("status") == "converged");

    // speed.csv has N-1 rows consistent with the trajectory
    std::ifstream speeds(dir.str("out/speed.csv"));
    std::string line;
    std::getline(speeds, line);
    CHECK(line == "slot,speed_mps");
    int rows = 0;
    double max_speed = 0;
    while (std::getline(speeds, line)) {
        if (line.empty()) continue;
        ++rows;
        max_speed = std::max(max_speed, std::stod(line.substr(line.find(',') + 1)));
    }
    CHECK(rows == 31);
    CHECK(max_speed <= s.v_max_mps() * (1 + 1e-6));

    CHECK(fs::exists(dir.str("out/trajectory_decimated.csv")));
}

TEST_CASE("cmd_solve reports configuration problems") {
    TempDir dir;
    std::ostringstream out, diag;

    SUBCASE("unknown key") {
        const std::string config =
            write_config(dir, std::string(kSmallConfig) + "\nwarp_factor = 9\n");
        CHECK(cmd_solve(config, dir.str("out"), {}, out, diag) == kExitConfig);
        CHECK(diag.str().find("warp_factor") != std::string::npos);
    }

    SUBCASE("missing file") {
        CHECK(cmd_solve(dir.str("nope.conf"), dir.str("out"), {}, out, diag) == kExitConfig);
        CHECK_FALSE(diag.str().empty());
    }
}

TEST_CASE("cmd_init_only emits the circle and its trajectory") {
    TempDir dir;
    const char* four_square = R"(
users = 500,500; 500,-500; -500,500; -500,-500
altitude_m = 100
period_s = 120
num_slots = 240
v_max_mps = 50
tx_power_w = 0.1
ref_gain_db = -50
noise_power_dbm = -110
)";
    const std::string config = write_config(dir, four_square);
    std::ostringstream out, diag;
    REQUIRE(cmd_init_only(config, dir.str("out"), out, diag) == kExitOk);

    std::ifstream circle(dir.str("out/circle.csv"));
    std::string header, row;
    std::getline(circle, header);
    std::getline(circle, row);
    CHECK(header == "center_x_m,center_y_m,radius_m");
    const double radius = std::stod(row.substr(row.rfind(',') + 1));
    CHECK(radius == doctest::Approx(353.553391).epsilon(1e-6));

    const Scenario s = load_scenario_file(config);
    const Trajectory t = read_trajectory_csv(dir.str("out/trajectory.csv"));
    CHECK(validate_trajectory(s, t).feasible());
}

TEST_CASE("cmd_sweep produces ordered rows with the documented invariants") {
    TempDir dir;
    const std::string config = write_config(dir, kSmallConfig);
    std::ostringstream out, diag;
    SweepSpec sweep;
    sweep.periods_s = {8, 16};
    sweep.slot_length_s = 0.5;
    const int code = cmd_sweep(config, sweep, dir.str("out"), {}, out, diag);
    CAPTURE(diag.str());
    REQUIRE(code == kExitOk);

    std::ifstream csv(dir.str("out/sweep.csv"));
    std::string line;
    std::getline(csv, line);
    CHECK(line == "T_s,scheme,eta_relaxed,eta_binary,upper_bound,iters,status");
    struct Row {
        double period;
        std::string scheme, eta_relaxed, eta_binary, status;
    };
    std::vector<Row> rows;
    while (std::getline(csv, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) f.push_back(field);
        REQUIRE(f.size() == 7);
        rows.push_back({std::stod(f[0]), f[1], f[2], f[3], f[6]});
    }
    REQUIRE(rows.size() == 6);
    // canonical ordering: period ascending, then proposed / circular / static
    CHECK(rows[0].period == 8);
    CHECK(rows[0].scheme == "proposed");
    CHECK(rows[1].scheme == "circular");
    CHECK(rows[2].scheme == "static");
    CHECK(rows[3].period == 16);

    // static objective strings are identical across periods
    CHECK(rows[2].eta_relaxed == rows[5].eta_relaxed);
    CHECK(rows[2].eta_binary == rows[5].eta_binary);

    // proposed dominates circular at every period
    for (int base : {0, 3}) {
        CHECK(std::stod(rows[base].eta_relaxed) >=
              std::stod(rows[base + 1].eta_relaxed) - 1e-6);
        CHECK(std::stod(rows[base + 1].eta_relaxed) >= 0.0);
    }
}

TEST_CASE("cmd_sweep validates its spec") {
    TempDir dir;
    const std::string config = write_config(dir, kSmallConfig);
    std::ostringstream out, diag;
    SweepSpec sweep;
    sweep.periods_s = {};
    CHECK(cmd_sweep(config, sweep, dir.str("out"), {}, out, diag) == kExitConfig);
    sweep.periods_s = {-5};
    CHECK(cmd_sweep(config, sweep, dir.str("out"), {}, out, diag) == kExitConfig);
}

TEST_CASE("cmd_sweep records a failing period and keeps going") {
    TempDir dir;
    const std::string config = write_config(dir, kSmallConfig);
    std::ostringstream out, diag;
    SweepSpec sweep;
    sweep.periods_s = {0.4, 8};  // 0.4 s yields a single slot, which is rejected
    sweep.slot_length_s = 0.5;
    CHECK(cmd_sweep(config, sweep, dir.str("out"), {}, out, diag) == kExitSolver);
    CHECK(diag.str().find("failed") != std::string::npos);

    std::ifstream csv(dir.str("out/sweep.csv"));
    std::string line;
    std::getline(csv, line);
    int failed = 0, converged = 0;
    while (std::getline(csv, line)) {
        if (line.find("failed") != std::string::npos) ++failed;
        if (line.find("converged") != std::string::npos) ++converged;
    }
    CHECK(failed == 3);     // all three schemes at T=0.4
    CHECK(converged == 3);  // all three schemes at T=8
}
