#include "uavtraj/scenario.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace uavtraj {

namespace {

std::string trim(const std::string& s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

double parse_double(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    double value = 0;
    const char* first = t.data();
    const char* last = t.data() + t.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || t.empty()) {
        throw MalformedNumberError(key, t);
    }
    return value;
}

long parse_integer(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    long value = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
        throw MalformedNumberError(key, t);
    }
    return value;
}

Eigen::Matrix2Xd parse_users(const std::string& value) {
    std::vector<Eigen::Vector2d> points;
    std::stringstream ss(value);
    std::string pair;
    while (std::getline(ss, pair, ';')) {
        const std::string p = trim(pair);
        if (p.empty()) continue;
        const size_t comma = p.find(',');
        if (comma == std::string::npos) {
            throw MalformedNumberError("users", p);
        }
        const double x = parse_double("users", p.substr(0, comma));
        const double y = parse_double("users", p.substr(comma + 1));
        points.emplace_back(x, y);
    }
    if (points.empty()) {
        throw NonPositiveParameterError("users", "must list at least one position");
    }
    Eigen::Matrix2Xd users(2, static_cast<int>(points.size()));
    for (size_t i = 0; i < points.size(); ++i) users.col(static_cast<int>(i)) = points[i];
    return users;
}

constexpr std::array<const char*, 8> kScenarioKeys = {
    "users",      "altitude_m", "period_s",   "num_slots",
    "v_max_mps",  "tx_power_w", "ref_gain_db", "noise_power_dbm"};

}  // namespace

Scenario::Scenario(ScenarioParams params) : params_(std::move(params)) {
    if (params_.users.cols() < 1) {
        throw NonPositiveParameterError("users", "must list at least one position");
    }
    if (!params_.users.allFinite()) {
        throw MalformedNumberError("users", "non-finite position");
    }
    const auto require_positive = [](double v, const char* key) {
        if (!(v > 0) || !std::isfinite(v)) throw NonPositiveParameterError(key);
    };
    require_positive(params_.altitude_m, "altitude_m");
    require_positive(params_.period_s, "period_s");
    require_positive(params_.v_max_mps, "v_max_mps");
    require_positive(params_.tx_power_w, "tx_power_w");
    require_positive(params_.ref_gain, "ref_gain_db");
    require_positive(params_.noise_power_w, "noise_power_dbm");
    if (params_.num_slots < 2) {
        throw NonPositiveParameterError("num_slots", "must be at least 2");
    }

    slot_length_s_ = params_.period_s / params_.num_slots;
    max_step_m_ = params_.v_max_mps * slot_length_s_;
    ref_snr_ = params_.tx_power_w * params_.ref_gain / params_.noise_power_w;
    if (!(ref_snr_ > 0) || !std::isfinite(ref_snr_)) {
        throw ConfigError("ref_gain_db", "derived reference SNR is not finite and positive");
    }
}

Scenario load_scenario(const std::string& config_text) {
    std::map<std::string, std::string> kv;
    std::stringstream ss(config_text);
    std::string line;
    while (std::getline(ss, line)) {
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(line, "expected 'key = value', got '" + line + "'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        bool known = false;
        for (const char* k : kScenarioKeys) known = known || key == k;
        if (!known) throw UnknownKeyError(key);
        if (kv.count(key)) throw ConfigError(key, "duplicate key '" + key + "'");
        kv[key] = value;
    }
    for (const char* k : kScenarioKeys) {
        if (!kv.count(k)) throw MissingKeyError(k);
    }

    ScenarioParams p;
    p.users = parse_users(kv["users"]);
    p.altitude_m = parse_double("altitude_m", kv["altitude_m"]);
    p.period_s = parse_double("period_s", kv["period_s"]);
    p.num_slots = static_cast<int>(parse_integer("num_slots", kv["num_slots"]));
    p.v_max_mps = parse_double("v_max_mps", kv["v_max_mps"]);
    p.tx_power_w = parse_double("tx_power_w", kv["tx_power_w"]);
    p.ref_gain = std::pow(10.0, parse_double("ref_gain_db", kv["ref_gain_db"]) / 10.0);
    p.noise_power_w =
        std::pow(10.0, (parse_double("noise_power_dbm", kv["noise_power_dbm"]) - 30.0) / 10.0);
    return Scenario(std::move(p));
}

Scenario load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path, "cannot open scenario file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return load_scenario(buf.str());
}

std::string render_scenario(const Scenario& s) {
    const auto num = [](double v) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return std::string(buf);
    };
    std::string out;
    out += "users = ";
    for (int i = 0; i < s.num_users(); ++i) {
        if (i > 0) out += "; ";
        out += num(s.users()(0, i)) + "," + num(s.users()(1, i));
    }
    out += "\n";
    out += "altitude_m = " + num(s.altitude_m()) + "\n";
    out += "period_s = " + num(s.period_s()) + "\n";
    out += "num_slots = " + std::to_string(s.num_slots()) + "\n";
    out += "v_max_mps = " + num(s.v_max_mps()) + "\n";
    out += "tx_power_w = " + num(s.tx_power_w()) + "\n";
    out += "ref_gain_db = " + num(10.0 * std::log10(s.ref_gain())) + "\n";
    out += "noise_power_dbm = " + num(10.0 * std::log10(s.noise_power_w()) + 30.0) + "\n";
    return out;
}

FeasibilityVerdict validate_trajectory(const Scenario& s, const Trajectory& t,
                                       double feas_tol, double periodicity_tol) {
    const int n = t.num_slots();
    if (n != s.num_slots()) {
        throw LengthMismatchError("trajectory has " + std::to_string(n) +
                                  " waypoints, scenario expects " +
                                  std::to_string(s.num_slots()));
    }
    FeasibilityVerdict verdict;
    for (int i = 0; i < n; ++i) {
        if (!t.waypoints.col(i).allFinite()) {
            verdict.violations.push_back({ViolationKind::NonFinite, i, 0.0});
        }
    }
    if (!verdict.violations.empty()) return verdict;

    const double closure = (t.waypoints.col(0) - t.waypoints.col(n - 1)).norm();
    if (closure > periodicity_tol) {
        verdict.violations.push_back({ViolationKind::Periodicity, n - 1, closure});
    }
    const double cap = s.max_step_m() * s.max_step_m();
    for (int i = 0; i + 1 < n; ++i) {
        const double step2 = (t.waypoints.col(i + 1) - t.waypoints.col(i)).squaredNorm();
        if (step2 > cap + feas_tol) {
            verdict.violations.push_back({ViolationKind::Speed, i, step2 - cap});
        }
    }
    return verdict;
}

bool schedule_feasible(const Schedule& a, double tol) {
    if (a.shares.size() == 0) return false;
    if ((a.shares.array() < -tol).any() || (a.shares.array() > 1.0 + tol).any()) return false;
    return (a.shares.colwise().sum().array() <= 1.0 + tol).all();
}

}  // namespace uavtraj
