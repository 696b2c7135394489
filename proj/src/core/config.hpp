// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "eps_state.hpp"

namespace machlim {

struct ConfigIssue {
    int line;  // 0 when the issue is not tied to a single line
    std::string message;
};

struct ConfigError : std::runtime_error {
    std::vector<ConfigIssue> issues;
    explicit ConfigError(std::vector<ConfigIssue> iss);
};

// Flat key=value run configuration ('#' comments, unknown keys rejected,
// every violation reported with its line number).
struct RunConfig {
    // grid.*
    int grid_n = 32;
    double grid_L = 6.283185307179586;
    // phys.*
    PhysParams phys;
    // init.*
    std::string init_mode = "well_prepared";  // well_prepared | ill_prepared
    double init_L0 = 1.0;
    int init_band = 4;
    std::uint64_t init_seed = 1;
    // time.*
    double time_dt_safety = 0.4;
    double time_T_end = 0.5;
    std::string time_scheme = "imex1";  // imex1 | imexbdf2
    double time_dt_max = 0.0;           // 0 -> auto (out.every / 4)
    // out.*
    double out_every = 0.05;
    std::string out_dir = "out";
    // sweep.*
    std::vector<double> sweep_eps_list{0.4, 0.2, 0.1, 0.05};
    std::string sweep_mode = "well_prepared";  // well_prepared | ill_prepared_sponged
    double sweep_s_report = 4.0;
    // sponge.* (0 -> auto: inner 0.30 L, outer 0.48 L, matched strength)
    double sponge_inner = 0.0;
    double sponge_outer = 0.0;
    double sponge_strength = 0.0;
    // probe.*
    double probe_radius = 0.0;  // 0 -> L/8
    // acoustic.*
    std::vector<double> acoustic_eps_list{0.4, 0.2, 0.1, 0.05};
    std::string acoustic_profile = "bump";  // uniform | bump
    bool acoustic_sponge = true;
    double acoustic_T = 4.0;
    int acoustic_n = 64;
    double acoustic_L = 6.283185307179586;
    double acoustic_safety = 0.4;
    bool acoustic_implicit = false;

    bool operator==(const RunConfig&) const = default;
};

// Parses and validates; throws ConfigError carrying *all* problems found.
RunConfig parse_config(const std::string& text);
RunConfig parse_config_file(const std::string& path);

// Canonical text form; parse(serialize(c)) == c.
std::string serialize_config(const RunConfig& config);

}  // namespace machlim
