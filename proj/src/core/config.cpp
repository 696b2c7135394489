// SPDX-License-Identifier: Apache-2.0
#include "config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace machlim {

namespace {

std::string strip(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

bool parse_double(const std::string& s, double& out) {
    try {
        std::size_t pos = 0;
        out = std::stod(s, &pos);
        return pos == s.size() && std::isfinite(out);
    } catch (...) {
        return false;
    }
}

bool parse_int(const std::string& s, long long& out) {
    auto first = s.data();
    auto last = s.data() + s.size();
    auto [p, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && p == last;
}

bool parse_u64(const std::string& s, std::uint64_t& out) {
    auto first = s.data();
    auto last = s.data() + s.size();
    auto [p, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && p == last;
}

bool parse_double_list(const std::string& s, std::vector<double>& out) {
    out.clear();
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        double v;
        if (!parse_double(strip(item), v)) return false;
        out.push_back(v);
    }
    return !out.empty();
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += fmt(v[i]);
    }
    return s;
}

struct Key {
    std::function<bool(RunConfig&, const std::string&)> set;  // false on malformed value
    std::function<std::string(const RunConfig&)> get;
};

const std::map<std::string, Key>& key_table() {
    static const std::map<std::string, Key> table = {
        {"grid.n",
         {[](RunConfig& c, const std::string& v) {
              long long n;
              if (!parse_int(v, n)) return false;
              c.grid_n = static_cast<int>(n);
              return true;
          },
          [](const RunConfig& c) { return std::to_string(c.grid_n); }}},
        {"grid.L",
         {[](RunConfig& c, const std::string& v) { return parse_double(v, c.grid_L); },
          [](const RunConfig& c) { return fmt(c.grid_L); }}},
        {"phys.eps",
         {[](RunConfig& c, const std::string& v) { return parse_double(v, c.phys.eps); },
          [](const RunConfig& c) { return fmt(c.phys.eps); }}},
        {"phys.mu",
         {[](RunConfig& c, const std::string& v) { return parse_double(v, c.phys.mu); },
          [](const RunConfig& c) { return fmt(c.phys.mu); }}},
        {"phys.lambda",
         {[](RunConfig& c, const std::string& v) { return parse_double(v, c.phys.lambda); },
          [](const RunConfig& c) { return fmt(c.phys.lambda); }}},
        {"phys.nu",
         {[](RunConfig& c, const std::string& v) { return parse_double(v, c.phys.nu); },
          [](const RunConfig& c) { return fmt(c.phys.nu); }}},
        {"phys.kappa",
         {[](RunConfig& c, const std::string& v) { return parse_double(v, c.phys.kappa); },
          [](const RunConfig& c) { return fmt(c.phys.kappa); }}},
        {"phys.theta_bar",
         {[](RunConfig& c, const std::string& v) { return parse_double(v, c.phys.theta_bar); },
          [](const RunConfig& c) { return fmt(c.phys.theta_bar); }}},
        {"init.mode",
         {[](RunConfig& c, const std::string& v) {
              if (v != "well_prepared" && v != "ill_prepared") return false;
              c.init_mode = v;
              return true;
          },
          [](const RunConfig& c) { return c.init_mode; }}},
        {"init.L0",
         {[](RunConfig& c, const std::string& v) { return parse_double(v, c.init_L0); },
          [](const RunConfig& c) { return fmt(c.init_L0); }}},
        {"init.band",
         {[](RunConfig& c, const std::string& v) {
              long long n;
              if (!parse_int(v, n)) return false;
              c.init_band = static_cast<int>(n);
              return true;
          },
          [](const RunConfig& c) { return std::to_string(c.init_band); }}},
        {"init.seed",
         {[](RunConfig& c, const std::string& v) { return parse_u64(v, c.init_seed); },
          [](const RunConfig& c) { return std::to_string(c.init_seed); }}},
        {"time.dt_safety",
         {[](RunConfig& c, const std::string& v) { return parse_double(v, c.time_dt_safety); },
          [](const RunConfig& c) { return fmt(c.time_dt_safety); }}},
        {"time.T_end",
         {[](RunConfig& c, const std::string& v) { return parse_double(v, c.time_T_end); },
          [](const RunConfig& c) { return fmt(c.time_T_end); }}},
        {"time.scheme",
         {[](RunConfig& c, const std::string& v) {
              if (v != "imex1" && v != "imexbdf2") return false;
              c.time_scheme = v;
              return true;
          },
          [](const RunConfig& c) { return c.time_scheme; }}},
        {"time.dt_max",
         {[](RunConfig& c, const std::string& v) { return parse_double(v, c.time_dt_max); },
          [](const RunConfig& c) { return fmt(c.time_dt_max); }}},
        {"out.every",
         {[](RunConfig& c, const std::string& v) { return parse_double(v, c.out_every); },
          [](const RunConfig& c) { return fmt(c.out_every); }}},
        {"out.dir",
         {[](RunConfig& c, const std::string& v) {
              c.out_dir = v;
              return !v.empty();
          },
          [](const RunConfig& c) { return c.out_dir; }}},
        {"sweep.eps_list",
         {[](RunConfig& c, const std::string& v) {
              return parse_double_list(v, c.sweep_eps_list);
          },
          [](const RunConfig& c) { return fmt(c.sweep_eps_list); }}},
        {"sweep.mode",
         {[](RunConfig& c, const std::string& v) {
              if (v != "well_prepared" && v != "ill_prepared_sponged") return false;
              c.sweep_mode = v;
              return true;
          },
          [](const RunConfig& c) { return c.sweep_mode; }}},
        {"sweep.s_report",
         {[](RunConfig& c, const std::string& v) { return parse_double(v, c.sweep_s_report); },
          [](const RunConfig& c) { return fmt(c.sweep_s_report); }}},
        {"sponge.inner",
         {[](RunConfig& c, const std::string& v) { return parse_double(v, c.sponge_inner); },
          [](const RunConfig& c) { return fmt(c.sponge_inner); }}},
        {"sponge.outer",
         {[](RunConfig& c, const std::string& v) { return parse_double(v, c.sponge_outer); },
          [](const RunConfig& c) { return fmt(c.sponge_outer); }}},
        {"sponge.strength",
         {[](RunConfig& c, const std::string& v) { return parse_double(v, c.sponge_strength); },
          [](const RunConfig& c) { return fmt(c.sponge_strength); }}},
        {"probe.radius",
         {[](RunConfig& c, const std::string& v) { return parse_double(v, c.probe_radius); },
          [](const RunConfig& c) { return fmt(c.probe_radius); }}},
        {"acoustic.eps_list",
         {[](RunConfig& c, const std::string& v) {
              return parse_double_list(v, c.acoustic_eps_list);
          },
          [](const RunConfig& c) { return fmt(c.acoustic_eps_list); }}},
        {"acoustic.profile",
         {[](RunConfig& c, const std::string& v) {
              if (v != "uniform" && v != "bump") return false;
              c.acoustic_profile = v;
              return true;
          },
          [](const RunConfig& c) { return c.acoustic_profile; }}},
        {"acoustic.sponge",
         {[](RunConfig& c, const std::string& v) {
              if (v != "on" && v != "off") return false;
              c.acoustic_sponge = (v == "on");
              return true;
          },
          [](const RunConfig& c) { return c.acoustic_sponge ? "on" : "off"; }}},
        {"acoustic.T",
         {[](RunConfig& c, const std::string& v) { return parse_double(v, c.acoustic_T); },
          [](const RunConfig& c) { return fmt(c.acoustic_T); }}},
        {"acoustic.n",
         {[](RunConfig& c, const std::string& v) {
              long long n;
              if (!parse_int(v, n)) return false;
              c.acoustic_n = static_cast<int>(n);
              return true;
          },
          [](const RunConfig& c) { return std::to_string(c.acoustic_n); }}},
        {"acoustic.L",
         {[](RunConfig& c, const std::string& v) { return parse_double(v, c.acoustic_L); },
          [](const RunConfig& c) { return fmt(c.acoustic_L); }}},
        {"acoustic.safety",
         {[](RunConfig& c, const std::string& v) { return parse_double(v, c.acoustic_safety); },
          [](const RunConfig& c) { return fmt(c.acoustic_safety); }}},
        {"acoustic.implicit",
         {[](RunConfig& c, const std::string& v) {
              if (v != "on" && v != "off") return false;
              c.acoustic_implicit = (v == "on");
              return true;
          },
          [](const RunConfig& c) { return c.acoustic_implicit ? "on" : "off"; }}},
    };
    return table;
}

bool power_of_two(int n) { return n >= 1 && (n & (n - 1)) == 0; }

// Cross-field constraints, mirroring the type invariants.
void validate(const RunConfig& c, std::vector<ConfigIssue>& issues) {
    auto bad = [&](const std::string& key, const std::string& constraint) {
        issues.push_back({0, key + ": constraint violated: \"" + constraint + "\""});
    };
    if (c.grid_n < 8 || !power_of_two(c.grid_n)) bad("grid.n", "power of two >= 8");
    if (!(c.grid_L > 0.0)) bad("grid.L", "L > 0");
    if (!(c.phys.eps > 0.0 && c.phys.eps <= 1.0)) bad("phys.eps", "0 < eps <= 1");
    if (!(c.phys.mu > 0.0)) bad("phys.mu", "mu > 0");
    if (!(c.phys.nu > 0.0)) bad("phys.nu", "nu > 0");
    if (!(c.phys.kappa > 0.0)) bad("phys.kappa", "kappa > 0");
    if (!(2.0 * c.phys.mu + 3.0 * c.phys.lambda > 0.0))
        bad("phys.lambda", "2*mu + 3*lambda > 0");
    if (!(c.phys.theta_bar > 0.0)) bad("phys.theta_bar", "theta_bar > 0");
    if (!(c.init_L0 > 0.0)) bad("init.L0", "L0 > 0");
    if (c.init_band < 1 || c.init_band > c.grid_n / 3)
        bad("init.band", "1 <= band <= dealias cutoff (n/3)");
    if (!(c.time_dt_safety > 0.0)) bad("time.dt_safety", "dt_safety > 0");
    if (!(c.time_T_end > 0.0)) bad("time.T_end", "T_end > 0");
    if (c.time_dt_max < 0.0) bad("time.dt_max", "dt_max >= 0");
    if (!(c.out_every > 0.0)) bad("out.every", "every > 0");
    for (std::size_t i = 0; i + 1 < c.sweep_eps_list.size(); ++i)
        if (!(c.sweep_eps_list[i] > c.sweep_eps_list[i + 1])) {
            bad("sweep.eps_list", "strictly descending");
            break;
        }
    for (double e : c.sweep_eps_list)
        if (!(e > 0.0 && e <= 1.0)) {
            bad("sweep.eps_list", "every eps in (0,1]");
            break;
        }
    if (!(c.sweep_s_report >= 1.0)) bad("sweep.s_report", "s_report >= 1");
    if (c.sponge_inner < 0.0 || c.sponge_outer < 0.0 || c.sponge_strength < 0.0)
        bad("sponge.*", "radii and strength >= 0");
    if (c.sponge_inner > 0.0 && c.sponge_outer > 0.0) {
        if (!(c.sponge_inner < c.sponge_outer && c.sponge_outer <= 0.5 * c.grid_L))
            bad("sponge.outer", "inner < outer <= L/2");
    }
    if (c.probe_radius < 0.0) bad("probe.radius", "radius >= 0");
    if (!(c.acoustic_T > 0.0)) bad("acoustic.T", "T > 0");
    if (c.acoustic_n < 8 || !power_of_two(c.acoustic_n)) bad("acoustic.n", "power of two >= 8");
    if (!(c.acoustic_L > 0.0)) bad("acoustic.L", "L > 0");
    if (!(c.acoustic_safety > 0.0)) bad("acoustic.safety", "safety > 0");
    for (double e : c.acoustic_eps_list)
        if (!(e > 0.0 && e <= 1.0)) {
            bad("acoustic.eps_list", "every eps in (0,1]");
            break;
        }
}

}  // namespace

ConfigError::ConfigError(std::vector<ConfigIssue> iss)
    : std::runtime_error([&iss] {
          std::string msg = "invalid config:";
          for (const auto& i : iss) {
              msg += "\n  ";
              if (i.line > 0) msg += "line " + std::to_string(i.line) + ": ";
              msg += i.message;
          }
          return msg;
      }()),
      issues(std::move(iss)) {}

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::vector<ConfigIssue> issues;
    std::stringstream ss(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(ss, raw)) {
        ++lineno;
        std::string line = raw;
        if (auto pos = line.find('#'); pos != std::string::npos) line = line.substr(0, pos);
        line = strip(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            issues.push_back({lineno, "expected key=value: \"" + strip(raw) + "\""});
            continue;
        }
        const std::string key = strip(line.substr(0, eq));
        const std::string val = strip(line.substr(eq + 1));
        const auto it = key_table().find(key);
        if (it == key_table().end()) {
            issues.push_back({lineno, "unknown key \"" + key + "\""});
            continue;
        }
        if (!it->second.set(cfg, val))
            issues.push_back({lineno, key + ": malformed value \"" + val + "\""});
    }
    validate(cfg, issues);
    if (!issues.empty()) throw ConfigError(std::move(issues));
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& config) {
    std::string out;
    for (const auto& [key, handlers] : key_table())
        out += key + " = " + handlers.get(config) + "\n";
    return out;
}

}  // namespace machlim
