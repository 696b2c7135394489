// SPDX-License-Identifier: Apache-2.0
#include "run.hpp"

#include <cmath>

#include "eps_system.hpp"
#include "limit_system.hpp"
#include "masks.hpp"
#include "norms.hpp"
#include "ops.hpp"

namespace machlim {

namespace {

constexpr double kTimeEps = 1e-12;

InitialDataSpec data_spec_from_config(const RunConfig& cfg, double norm_eps) {
    InitialDataSpec spec;
    spec.mode = cfg.init_mode == "well_prepared" ? InitialDataSpec::Mode::well_prepared
                                                 : InitialDataSpec::Mode::ill_prepared;
    spec.L0 = cfg.init_L0;
    spec.band = cfg.init_band;
    spec.theta_radius = 0.25 * cfg.grid_L;
    spec.norm_s = cfg.sweep_s_report;
    spec.norm_eps = norm_eps;
    return spec;
}

double effective_dt_cap(const RunConfig& cfg) {
    return cfg.time_dt_max > 0.0 ? cfg.time_dt_max : 0.25 * cfg.out_every;
}

}  // namespace

double resolved_probe_radius(const RunConfig& cfg) {
    return cfg.probe_radius > 0.0 ? cfg.probe_radius : 0.25 * cfg.grid_L;
}

double acoustic_resolution_dt(const RunConfig& cfg, double eps) {
    const Grid grid(cfg.grid_n, cfg.grid_L);
    const double k_cut = grid.k0() * grid.dealias_cutoff();
    const double omega_max = std::sqrt(2.0 * std::exp(cfg.phys.theta_bar)) * k_cut / eps;
    return 0.7 / omega_max;
}

SpongeProfile resolved_sponge(const RunConfig& cfg, double eps) {
    SpongeProfile sp;
    sp.inner_radius = cfg.sponge_inner > 0.0 ? cfg.sponge_inner : 0.30 * cfg.grid_L;
    sp.outer_radius = cfg.sponge_outer > 0.0 ? cfg.sponge_outer : 0.48 * cfg.grid_L;
    if (cfg.sponge_strength > 0.0) {
        sp.strength = cfg.sponge_strength;
    } else {
        // Matched to the acoustic speed sqrt(2 e^theta_bar)/eps over the
        // annulus width: a pulse crossing the sponge loses O(1) of its energy.
        const double c = std::sqrt(2.0 * std::exp(cfg.phys.theta_bar)) / eps;
        sp.strength = 2.0 * c / (sp.outer_radius - sp.inner_radius);
    }
    return sp;
}

void write_diag_csv(const std::string& path, const std::vector<DiagnosticsRecord>& records) {
    CsvWriter csv(path);
    csv.line(kDiagnosticsHeader);
    for (const auto& r : records) csv.line(format_record(r));
}

EpsRunOutput run_eps(const EpsRunArgs& args) {
    const RunConfig& cfg = args.config;
    PhysParams par = cfg.phys;
    if (args.override_eps) par.eps = *args.override_eps;
    par.validate();

    const Grid grid(cfg.grid_n, cfg.grid_L);
    const ScalarField probe = ball_mask(grid, resolved_probe_radius(cfg));
    const double s = cfg.sweep_s_report;

    EpsRunOutput out;
    try {
        EpsState state =
            make_initial_data(grid, data_spec_from_config(cfg, args.norm_eps), par,
                              cfg.init_seed);
        ImexStepper stepper(grid, par,
                            cfg.time_scheme == "imexbdf2" ? TimeScheme::imexbdf2
                                                          : TimeScheme::imex1);
        if (args.sponge_on) stepper.set_sponge(sponge_sigma(grid, resolved_sponge(cfg, par.eps)));

        TripleNormAccumulator acc(s, par.eps);
        acc.init(state, par.theta_bar);
        out.energy_initial = reconstructed_total_energy(state, par);

        auto q3_gap = [&](const EpsState& st, std::size_t sample_idx) {
            if (!args.reference || sample_idx >= args.reference->curl_btw.size()) return 0.0;
            VectorField diff =
                sub(curl_weighted_velocity(st.theta, st.u), args.reference->curl_btw[sample_idx]);
            for (int c = 0; c < 3; ++c) diff[c] = multiply(probe, diff[c]);
            return sobolev_norm(diff, s - 2.0);  // H^{s'-1} with s' = s - 1
        };

        auto sample_record = [&](const EpsState& st, std::size_t sample_idx) {
            DiagnosticsRecord r = compute_eps_diagnostics(st, par, s, probe, acc.value());
            out.records.push_back(r);
            out.max_divh_res = std::max(out.max_divh_res, r.divH_res);
            out.q3 = std::max(out.q3, q3_gap(st, sample_idx));
        };

        sample_record(state, 0);
        double q1_sq = 0.0, q2_sq = 0.0;
        std::size_t sample_idx = 1;
        double cap = effective_dt_cap(cfg);
        if (args.resolve_acoustics) cap = std::min(cap, acoustic_resolution_dt(cfg, par.eps));
        if (args.dt_cap_override) cap = std::min(cap, *args.dt_cap_override);
        while (state.time < cfg.time_T_end - kTimeEps) {
            const double t_next = std::min(cfg.time_T_end, sample_idx * cfg.out_every);
            double dt = args.fixed_dt ? *args.fixed_dt
                                      : std::min(cfl_dt(state, par, cfg.time_dt_safety), cap);
            dt = std::min(dt, t_next - state.time);
            if (dt < kTimeEps) {
                ++sample_idx;
                continue;
            }
            // Left-endpoint quadrature of the local acoustic quantities.
            q1_sq += dt * std::pow(masked_l2(probe, state.p), 2);
            q2_sq += dt * std::pow(masked_l2(probe, constraint_field(state, par)), 2);
            state = stepper.step(state, dt);
            acc.add(state, par.theta_bar, dt);
            ++out.steps;
            if (state.time >= t_next - kTimeEps && t_next < cfg.time_T_end - kTimeEps) {
                sample_record(state, sample_idx);
                ++sample_idx;
            }
        }
        sample_record(state, sample_idx);
        out.q1 = std::sqrt(q1_sq);
        out.q2 = std::sqrt(q2_sq);
        out.sup_triple = acc.value();
        out.energy_final = reconstructed_total_energy(state, par);
    } catch (const std::exception& e) {
        out.aborted = true;
        out.abort_reason = e.what();
    }
    if (!args.diag_csv_path.empty()) write_diag_csv(args.diag_csv_path, out.records);
    return out;
}

LimitState make_limit_initial_data(const RunConfig& cfg) {
    PhysParams par = cfg.phys;
    const Grid grid(cfg.grid_n, cfg.grid_L);
    InitialDataSpec spec = data_spec_from_config(cfg, 0.0);
    // The limit data come from the shared (uncorrected) family fields; the
    // family normalization uses the largest sweep eps.
    spec.mode = InitialDataSpec::Mode::ill_prepared;
    spec.norm_eps = cfg.sweep_eps_list.empty() ? par.eps : cfg.sweep_eps_list.front();
    PhysParams par_ref = par;
    par_ref.eps = spec.norm_eps;
    const EpsState base = make_initial_data(grid, spec, par_ref, cfg.init_seed);
    return project_to_limit(base, par);
}

LimitRunOutput run_limit(const RunConfig& cfg, std::optional<LimitState> initial,
                         const std::string& diag_csv_path, double dt_cap) {
    PhysParams par = cfg.phys;
    par.validate();
    const Grid grid(cfg.grid_n, cfg.grid_L);
    const ScalarField probe = ball_mask(grid, resolved_probe_radius(cfg));
    const double s = cfg.sweep_s_report;

    LimitRunOutput out;
    try {
        LimitState state = initial ? std::move(*initial) : make_limit_initial_data(cfg);
        auto sample = [&](const LimitState& st) {
            DiagnosticsRecord r = compute_limit_diagnostics(st, par, s, probe);
            out.records.push_back(r);
            out.max_constraint_res = std::max(out.max_constraint_res, r.constraint_res);
            out.reference.times.push_back(st.time);
            out.reference.curl_btw.push_back(curl_weighted_velocity(st.vartheta, st.w));
        };
        sample(state);
        std::size_t sample_idx = 1;
        const double cap = dt_cap > 0.0 ? dt_cap : effective_dt_cap(cfg);
        while (state.time < cfg.time_T_end - kTimeEps) {
            const double t_next = std::min(cfg.time_T_end, sample_idx * cfg.out_every);
            double dt = std::min(cfl_dt(state, par, cfg.time_dt_safety), cap);
            dt = std::min(dt, t_next - state.time);
            if (dt < kTimeEps) {
                ++sample_idx;
                continue;
            }
            state = step_limit(state, dt, par);
            ++out.steps;
            if (state.time >= t_next - kTimeEps && t_next < cfg.time_T_end - kTimeEps) {
                sample(state);
                ++sample_idx;
            }
        }
        sample(state);
    } catch (const std::exception& e) {
        out.aborted = true;
        out.abort_reason = e.what();
    }
    if (!diag_csv_path.empty()) write_diag_csv(diag_csv_path, out.records);
    return out;
}

}  // namespace machlim
