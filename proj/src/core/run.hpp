// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "config.hpp"
#include "diagnostics.hpp"
#include "masks.hpp"

namespace machlim {

// Resolved geometry helpers (auto values filled in from the config).
double resolved_probe_radius(const RunConfig& config);
SpongeProfile resolved_sponge(const RunConfig& config, double eps);

// curl(e^{-vartheta} w) snapshots of a limit run, used as the reference
// trajectory for the incompressible-component comparison.
struct LimitReference {
    std::vector<double> times;
    std::vector<VectorField> curl_btw;
};

struct EpsRunArgs {
    RunConfig config;
    std::optional<double> override_eps;  // sweep member
    double norm_eps = 0.0;               // family normalization (0: use run eps)
    bool sponge_on = false;
    const LimitReference* reference = nullptr;
    std::string diag_csv_path;           // empty: no csv written
    std::optional<double> fixed_dt;      // conservation studies
    // Cap dt at ~0.7 / (fastest resolved acoustic frequency) so the fast
    // oscillations are tracked rather than damped out; used by the sweeps.
    bool resolve_acoustics = false;
    // Additional accuracy cap (sweeps use a uniform cap across members so
    // the comparison against the limit reference is unbiased).
    std::optional<double> dt_cap_override;
};

struct EpsRunOutput {
    std::vector<DiagnosticsRecord> records;
    double q1 = 0.0;          // (int ||p||^2_{L2(K)} dt)^{1/2}
    double q2 = 0.0;          // same for the constraint residual
    double q3 = 0.0;          // sup_t localized H^{s'-1} gap to the reference
    double sup_triple = 0.0;
    double energy_initial = 0.0;
    double energy_final = 0.0;
    double max_divh_res = 0.0;
    int steps = 0;
    bool aborted = false;
    std::string abort_reason;
};

EpsRunOutput run_eps(const EpsRunArgs& args);

struct LimitRunOutput {
    std::vector<DiagnosticsRecord> records;
    LimitReference reference;
    double max_constraint_res = 0.0;
    int steps = 0;
    bool aborted = false;
    std::string abort_reason;
};

// Runs the limit solver from `initial` (or from data generated per the
// config when absent) to T_end, sampling every out.every.  dt_cap == 0 uses
// the config cap (time.dt_max or out.every / 4).
LimitRunOutput run_limit(const RunConfig& config, std::optional<LimitState> initial,
                         const std::string& diag_csv_path, double dt_cap = 0.0);

// 0.7 / (sqrt(2 e^theta_bar) k_cut / eps): a few steps per period of the
// fastest retained acoustic mode.
double acoustic_resolution_dt(const RunConfig& config, double eps);

// Shared family data for sweeps: the limit initial state is the projection
// of the seed-determined base fields (independent of eps).
LimitState make_limit_initial_data(const RunConfig& config);

void write_diag_csv(const std::string& path, const std::vector<DiagnosticsRecord>& records);

}  // namespace machlim
