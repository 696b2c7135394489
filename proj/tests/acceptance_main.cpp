// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite: one pass/fail line per criterion, exit code = number of
// failed criteria.  Heavier runs (the 64^3 sweeps) reuse one result across
// the related criteria.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "acoustic.hpp"
#include "eps_system.hpp"
#include "experiments.hpp"
#include "fft.hpp"
#include "identities.hpp"
#include "limit_system.hpp"
#include "norms.hpp"
#include "ops.hpp"
#include "rng.hpp"
#include "run.hpp"

using namespace machlim;

namespace {

int g_failures = 0;

double now_s() {
    using namespace std::chrono;
    return duration<double>(steady_clock::now().time_since_epoch()).count();
}

void report(int criterion, const std::string& what, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", criterion,
                what.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return "<missing:" + path + ">";
    return std::string(std::istreambuf_iterator<char>(in), {});
}

RunConfig sweep_base_config() {
    RunConfig cfg;
    cfg.grid_n = 64;
    cfg.grid_L = 8.0 * M_PI;
    cfg.init_band = 4;
    cfg.init_seed = 1;
    cfg.init_L0 = 1.0;
    cfg.time_T_end = 0.5;
    cfg.out_every = 0.05;
    cfg.sweep_eps_list = {0.4, 0.2, 0.1, 0.05};
    cfg.sweep_s_report = 4.0;
    return cfg;
}

// ---- criterion 1 ----------------------------------------------------------
void criterion_identities() {
    const double t0 = now_s();
    const Grid g(32, 2.0 * M_PI);
    const auto cases = run_identity_suite(g, 12345, 20);
    double worst = 0.0;
    for (const auto& c : cases) worst = std::max(worst, c.relative());
    const double dt = now_s() - t0;
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "7 identities x 20 draws at 32^3, worst relative residual %.3e, %.1f s",
                  worst, dt);
    report(1, "vector/energy identity suite <= 1e-10", worst <= 1e-10 && dt < 10.0, detail);
}

// ---- criterion 2 ----------------------------------------------------------
void criterion_fixed_points() {
    const double t0 = now_s();
    const Grid g(32, 2.0 * M_PI);
    PhysParams par;
    EpsState eq(g);
    for (auto& v : eq.theta.values) v = par.theta_bar;

    const Tendencies f = rhs_full(eq, par);
    double worst = std::max({linf_norm(f.dp), linf_norm(f.du), linf_norm(f.dH),
                             linf_norm(f.dtheta)});
    const EpsState stepped = step_imex(eq, 0.01, par);
    for (std::size_t i = 0; i < eq.p.values.size(); ++i) {
        worst = std::max(worst, std::abs(stepped.p.values[i] - eq.p.values[i]));
        worst = std::max(worst, std::abs(stepped.theta.values[i] - eq.theta.values[i]));
    }

    LimitState zero(g);
    for (auto& v : zero.vartheta.values) v = par.theta_bar;
    const LimitState zstep = step_limit(zero, 0.02, par);
    worst = std::max(worst, l2_norm(zstep.w));
    worst = std::max(worst, l2_norm(zstep.h));
    const double dt = now_s() - t0;
    char detail[160];
    std::snprintf(detail, sizeof(detail), "worst deviation %.3e, %.1f s", worst, dt);
    report(2, "equilibrium / zero states exactly invariant <= 1e-14",
           worst <= 1e-14 && dt < 5.0, detail);
}

// ---- criterion 3 ----------------------------------------------------------
void criterion_conservation() {
    const double t0 = now_s();
    bool pass = true;
    std::string detail;

    // (a) div H over 1000 steps of an ill-prepared 32^3 run.
    {
        const Grid g(32, 2.0 * M_PI);
        PhysParams par;
        par.eps = 0.1;
        InitialDataSpec spec;
        spec.mode = InitialDataSpec::Mode::ill_prepared;
        EpsState st = make_initial_data(g, spec, par, 77);
        ImexStepper stepper(g, par);
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            st = stepper.step(st, std::min(cfl_dt(st, par, 0.4), 5e-3));
            worst = std::max(worst, div_h_residual(st));
        }
        pass = pass && worst <= 1e-10;
        detail += "divH(1000 steps)=" + format_double(worst);
    }

    // (b) reconstructed total-energy drift at 64^3 over unit rescaled time,
    // dt halved until the drift converges.
    {
        RunConfig cfg = sweep_base_config();
        cfg.time_T_end = 1.0;
        cfg.init_mode = "ill_prepared";
        cfg.phys.eps = 0.2;
        double drift = 1.0, prev_drift = -1.0;
        double dt_try = 0.02;
        for (int halving = 0; halving < 4; ++halving) {
            EpsRunArgs args;
            args.config = cfg;
            args.fixed_dt = dt_try;
            const EpsRunOutput out = run_eps(args);
            if (out.aborted) {
                pass = false;
                detail += " energy-run-aborted:" + out.abort_reason;
                break;
            }
            drift = std::abs(out.energy_final - out.energy_initial) /
                    std::abs(out.energy_initial);
            if (prev_drift >= 0.0 &&
                std::abs(drift - prev_drift) <= 0.25 * std::max(drift, 1e-12))
                break;  // converged under halving
            prev_drift = drift;
            dt_try *= 0.5;
        }
        pass = pass && drift <= 1e-5;
        detail += ", energy drift=" + format_double(drift) + " (dt=" + format_double(dt_try) + ")";
    }

    // (c) limit constraint residual every step, 500 random-data steps.
    {
        const Grid g(32, 2.0 * M_PI);
        PhysParams par;
        LimitState st(g);
        st.w = random_band_limited_vector(g, 5, 31);
        st.h = leray_project(random_band_limited_vector(g, 5, 32));
        const ScalarField dev = random_band_limited(g, 4, 33);
        for (std::size_t i = 0; i < st.vartheta.values.size(); ++i)
            st.vartheta.values[i] = par.theta_bar + 0.05 * dev.values[i];
        st = enforce_constraint(st, par);
        double worst = 0.0;
        for (int i = 0; i < 500; ++i) {
            st = step_limit(st, std::min(cfl_dt(st, par, 0.4), 0.01), par);
            worst = std::max(worst, limit_constraint_residual(st, par));
        }
        pass = pass && worst <= 1e-8;
        detail += ", limit constraint(500 steps)=" + format_double(worst);
    }

    const double dt = now_s() - t0;
    detail += ", " + format_double(dt) + " s";
    report(3, "div H / total energy / limit constraint", pass && dt < 600.0, detail);
}

// ---- criterion 4 ----------------------------------------------------------
void criterion_oracles() {
    const double t0 = now_s();
    bool pass = true;
    std::string detail;

    // rhs_full against pointwise symbolic evaluation on the three
    // closed-form states.
    {
        const Grid g(32, 2.0 * M_PI);
        PhysParams par;
        par.eps = 0.1;
        double worst = 0.0;

        // state 1: equilibrium
        {
            EpsState st(g);
            for (auto& v : st.theta.values) v = par.theta_bar;
            const Tendencies f = rhs_full(st, par);
            worst = std::max({worst, linf_norm(f.dp), linf_norm(f.du), linf_norm(f.dH),
                              linf_norm(f.dtheta)});
        }
        // state 2: pure temperature mode
        {
            EpsState st(g);
            for (int ix = 0; ix < g.n(); ++ix)
                for (int iy = 0; iy < g.n(); ++iy)
                    for (int iz = 0; iz < g.n(); ++iz)
                        st.theta.at(ix, iy, iz) =
                            par.theta_bar + 0.01 * std::sin(g.coord(ix));
            const Tendencies f = rhs_full(st, par);
            for (int ix = 0; ix < g.n(); ++ix) {
                const double x = g.coord(ix);
                const double A = 0.01;
                const double th = par.theta_bar + A * std::sin(x);
                const double dflux =
                    std::exp(th) * (A * A * std::cos(x) * std::cos(x) - A * std::sin(x));
                worst = std::max(worst,
                                 std::abs(f.dp.at(ix, 3, 4) - par.kappa / par.eps * dflux));
                worst = std::max(worst, std::abs(f.dtheta.at(ix, 3, 4) - par.kappa * dflux));
                worst = std::max(worst, std::abs(f.du[0].at(ix, 3, 4)));
            }
        }
        // state 3: single magnetic mode
        {
            EpsState st(g);
            for (auto& v : st.theta.values) v = par.theta_bar;
            for (int ix = 0; ix < g.n(); ++ix)
                for (int iy = 0; iy < g.n(); ++iy)
                    for (int iz = 0; iz < g.n(); ++iz)
                        st.H[0].at(ix, iy, iz) = std::sin(g.coord(iz));
            const Tendencies f = rhs_full(st, par);
            const double beta = std::exp(par.theta_bar);
            for (int iz = 0; iz < g.n(); ++iz) {
                const double z = g.coord(iz);
                const double cz = std::cos(z), sz = std::sin(z);
                worst = std::max(worst, std::abs(f.dH[0].at(2, 5, iz) + par.nu * sz));
                worst = std::max(worst, std::abs(f.du[2].at(2, 5, iz) + beta * cz * sz));
                worst = std::max(worst,
                                 std::abs(f.dp.at(2, 5, iz) - par.eps * par.nu * cz * cz));
                worst = std::max(worst, std::abs(f.dtheta.at(2, 5, iz) -
                                                 par.eps * par.eps * par.nu * cz * cz));
            }
        }
        pass = pass && worst <= 1e-10;
        detail += "rhs oracle worst=" + format_double(worst);
    }

    // acoustic plane wave: phase error below 1% per period.
    {
        const Grid g(64, 2.0 * M_PI);
        const double eps = 0.25;
        ScalarField v(g), vt(g);
        const double k = g.k0();
        for (int ix = 0; ix < g.n(); ++ix)
            for (int iy = 0; iy < g.n(); ++iy)
                for (int iz = 0; iz < g.n(); ++iz) {
                    v.at(ix, iy, iz) = std::cos(k * g.coord(ix));
                    vt.at(ix, iy, iz) = (k / eps) * std::sin(k * g.coord(ix));
                }
        ScalarField one(g);
        for (auto& q : one.values) q = 1.0;
        WaveState st(v, vt, one, one, eps);
        const double period = 2.0 * M_PI * eps / k;
        const int nsteps = static_cast<int>(std::ceil(period / wave_cfl_dt(st, 0.4)));
        SpongeProfile off;
        for (int i = 0; i < nsteps; ++i) st = step_wave(st, period / nsteps, nullptr, off);
        double err = 0.0;
        for (int ix = 0; ix < g.n(); ++ix)
            err = std::max(err, std::abs(st.v.at(ix, 1, 2) - std::cos(k * g.coord(ix))));
        pass = pass && err <= 0.063;  // sin(1% of 2 pi)
        detail += ", wave phase err=" + format_double(err);
    }

    // rate fitting on synthetic exponents.
    {
        bool ok = true;
        for (double alpha_true : {0.5, 1.0, 2.0}) {
            std::vector<std::pair<double, double>> series;
            for (double e : {0.4, 0.2, 0.1, 0.05})
                series.emplace_back(e, 2.0 * std::pow(e, alpha_true));
            const RateFit f = fit_rate("synthetic", series);
            ok = ok && std::abs(f.alpha - alpha_true) <= 0.05;
        }
        pass = pass && ok;
        detail += std::string(", synthetic rates ") + (pass ? "ok" : "bad");
    }

    const double dt = now_s() - t0;
    detail += ", " + format_double(dt) + " s";
    report(4, "symbolic rhs / wave phase / rate-fit oracles", pass && dt < 120.0, detail);
}

// ---- criteria 5 and 6 ------------------------------------------------------
void criteria_sweeps() {
    const double t0 = now_s();
    RunConfig base = sweep_base_config();
    base.out_dir = "acceptance_out/sweep_wp";
    SweepResult wp = run_sweep(SweepPlan{base});

    auto find_assert = [](const SweepResult& r, const std::string& name) {
        for (const auto& a : r.assertions)
            if (a.name == name) return a;
        return SweepAssertion{name, false, "missing"};
    };

    {
        const SweepAssertion a = find_assert(wp, "uniform_bound_ratio_lt_2");
        char detail[256];
        std::snprintf(detail, sizeof(detail),
                      "well-prepared 64^3 sweep eps={0.4,0.2,0.1,0.05}, %s, %.0f s",
                      a.detail.c_str(), now_s() - t0);
        report(5, "uniform-in-eps bound: sup triple norm ratio < 2", a.pass, detail);
    }

    {
        const double t1 = now_s();
        RunConfig ill = sweep_base_config();
        ill.sweep_mode = "ill_prepared_sponged";
        ill.init_mode = "ill_prepared";
        ill.out_dir = "acceptance_out/sweep_ill";
        const SweepResult is = run_sweep(SweepPlan{ill});

        const bool q1d_wp = find_assert(wp, "q1_decreasing_in_eps").pass;
        const bool q2d_wp = find_assert(wp, "q2_decreasing_in_eps").pass;
        const bool q3d_wp = find_assert(wp, "q3_decreasing_in_eps").pass;
        const bool alpha_wp = find_assert(wp, "q1_rate_alpha_ge_0.8").pass;
        const bool q1d_ill = find_assert(is, "q1_decreasing_in_eps").pass;
        const bool q2d_ill = find_assert(is, "q2_decreasing_in_eps").pass;
        const bool pass = q1d_wp && q2d_wp && q3d_wp && alpha_wp && q1d_ill && q2d_ill;
        char detail[512];
        std::snprintf(detail, sizeof(detail),
                      "wp: q1 dec %d, q2 dec %d, q3 dec %d, %s; sponged: q1 dec %d, q2 dec %d; "
                      "%.0f s",
                      q1d_wp, q2d_wp, q3d_wp, find_assert(wp, "q1_rate_alpha_ge_0.8").detail.c_str(),
                      q1d_ill, q2d_ill, now_s() - t1);
        report(6, "convergence shadows: Q1/Q2/Q3 vs eps", pass, detail);
    }
}

// ---- criterion 7 -----------------------------------------------------------
void criterion_acoustic_decay() {
    const double t0 = now_s();
    AcousticOptions opt;  // bump profile, sponge on, 64^3, T = 4
    const auto runs = run_acoustic_sweep(opt);
    bool monotone = true;
    std::string detail = "time-avg local energy:";
    for (std::size_t i = 0; i < runs.size(); ++i) {
        if (i > 0) monotone = monotone && (runs[i].time_avg_local_energy <
                                           runs[i - 1].time_avg_local_energy);
        detail += " " + format_double(runs[i].time_avg_local_energy);
    }
    const double dt = now_s() - t0;
    detail += ", " + format_double(dt) + " s";
    report(7, "acoustic local-energy decay across eps (sponge on, bump profile)",
           monotone && dt < 600.0, detail);
}

// ---- criterion 8 -----------------------------------------------------------
void criterion_reproducibility() {
    const double t0 = now_s();
    namespace fs = std::filesystem;
    bool pass = true;

    // identities CSV twice
    {
        const Grid g(32, 2.0 * M_PI);
        auto emit = [&](const std::string& path) {
            CsvWriter csv(path);
            csv.line("name,residual,input_norm,pass");
            for (const auto& c : run_identity_suite(g, 12345, 5))
                csv.line(std::string(to_string(c.name)) + "," + format_double(c.residual_norm) +
                         "," + format_double(c.input_norm) + "," +
                         (c.relative() <= 1e-10 ? "pass" : "fail"));
        };
        emit("acceptance_out/ident_a.csv");
        emit("acceptance_out/ident_b.csv");
        pass = pass && slurp("acceptance_out/ident_a.csv") == slurp("acceptance_out/ident_b.csv");
    }

    // small sweep twice, byte-compare every CSV
    {
        RunConfig base;
        base.grid_n = 16;
        base.grid_L = 8.0 * M_PI;
        base.init_band = 3;
        base.time_T_end = 0.1;
        base.out_every = 0.05;
        base.sweep_eps_list = {0.4, 0.2, 0.1};
        base.init_seed = 5;
        for (const char* dir : {"acceptance_out/repro_a", "acceptance_out/repro_b"}) {
            RunConfig c = base;
            c.out_dir = dir;
            run_sweep(SweepPlan{c});
        }
        for (const std::string member :
             {std::string("eps_0.4"), std::string("eps_0.2"), std::string("eps_0.1")})
            pass = pass && slurp("acceptance_out/repro_a/" + member + "/diag.csv") ==
                               slurp("acceptance_out/repro_b/" + member + "/diag.csv");
        pass = pass && slurp("acceptance_out/repro_a/rates.csv") ==
                           slurp("acceptance_out/repro_b/rates.csv");
        pass = pass && slurp("acceptance_out/repro_a/limit_diag.csv") ==
                           slurp("acceptance_out/repro_b/limit_diag.csv");
    }

    char detail[96];
    std::snprintf(detail, sizeof(detail), "%.0f s", now_s() - t0);
    report(8, "byte-identical CSVs for identical config and seed", pass, detail);
}

}  // namespace

int main() {
    std::filesystem::create_directories("acceptance_out");
    criterion_identities();
    criterion_fixed_points();
    criterion_conservation();
    criterion_oracles();
    criteria_sweeps();
    criterion_acoustic_decay();
    criterion_reproducibility();
    std::printf("%d of 8 criteria failed\n", g_failures);
    return g_failures;
}
