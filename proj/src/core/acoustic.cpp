// SPDX-License-Identifier: Apache-2.0
#include "acoustic.hpp"

#include <algorithm>
#include <cmath>

#include "fft.hpp"
#include "ops.hpp"

namespace machlim {

namespace {

constexpr double kCoefFloor = 1e-6;

double min_value(const ScalarField& f) {
    double m = f.values[0];
    for (double v : f.values) m = std::min(m, v);
    return m;
}

double max_value(const ScalarField& f) {
    double m = f.values[0];
    for (double v : f.values) m = std::max(m, v);
    return m;
}

// (div(b grad v) + c) / (eps^2 a), dealiased.
ScalarField acceleration(const WaveState& st, const ScalarField* forcing) {
    const VectorField gv = grad(st.v);
    ScalarField acc = div(multiply(st.b_coef, gv));
    if (forcing) acc = add(acc, *forcing);
    const double e2 = st.eps * st.eps;
    for (std::size_t i = 0; i < acc.values.size(); ++i)
        acc.values[i] /= e2 * st.a_coef.values[i];
    return dealias(acc);
}

}  // namespace

WaveState::WaveState(ScalarField v_, ScalarField vt_, ScalarField a_, ScalarField b_,
                     double eps_)
    : v(std::move(v_)), vt(std::move(vt_)), a_coef(std::move(a_)), b_coef(std::move(b_)),
      eps(eps_) {
    if (!(eps > 0.0)) throw ContractViolation("WaveState: eps must be positive");
    if (min_value(a_coef) <= kCoefFloor || min_value(b_coef) <= kCoefFloor)
        throw ContractViolation("WaveState: coefficients must stay above the positive floor");
}

double wave_cfl_dt(const WaveState& st, double safety) {
    const double ratio = max_value(st.b_coef) / min_value(st.a_coef);
    return safety * st.eps * st.grid().dx() / std::sqrt(ratio);
}

WaveState step_wave(const WaveState& st, double dt, const ScalarField* forcing,
                    const SpongeProfile& sponge, bool implicit) {
    if (!(dt > 0.0)) throw ContractViolation("step_wave: dt must be positive");
    const Grid& g = st.grid();
    const ScalarField sigma = sponge_sigma(g, sponge);

    WaveState out = st;
    out.time = st.time + dt;

    if (!implicit) {
        if (dt > st.eps * g.dx() / std::sqrt(max_value(st.b_coef) / min_value(st.a_coef)))
            throw ContractViolation("step_wave: dt violates the explicit stability bound");
        // Damped velocity-Verlet; sigma handled implicitly in each half kick.
        const ScalarField a0 = acceleration(st, forcing);
        ScalarField vth(g);
        for (std::size_t i = 0; i < vth.values.size(); ++i)
            vth.values[i] = (st.vt.values[i] + 0.5 * dt * a0.values[i]) /
                            (1.0 + 0.5 * dt * sigma.values[i]);
        for (std::size_t i = 0; i < out.v.values.size(); ++i)
            out.v.values[i] = st.v.values[i] + dt * vth.values[i];
        const ScalarField a1 = acceleration(out, forcing);
        for (std::size_t i = 0; i < out.vt.values.size(); ++i)
            out.vt.values[i] = (vth.values[i] + 0.5 * dt * a1.values[i]) /
                               (1.0 + 0.5 * dt * sigma.values[i]);
        return out;
    }

    // Trapezoidal step: solve
    //   [I - (dt^2/4) W + (dt/2) sigma] vt' = vt + dt W(v) + dt c~ + (dt^2/4) W(vt)
    //                                         - (dt/2) sigma vt,
    // W(x) = div(b grad x)/(eps^2 a), then v' = v + (dt/2)(vt + vt').
    auto W = [&](const ScalarField& x) {
        WaveState tmp = st;
        tmp.v = x;
        return acceleration(tmp, nullptr);
    };
    ScalarField rhs = scale(W(st.v), dt);
    if (forcing) {
        ScalarField ctil(g);
        const double e2 = st.eps * st.eps;
        for (std::size_t i = 0; i < ctil.values.size(); ++i)
            ctil.values[i] = forcing->values[i] / (e2 * st.a_coef.values[i]);
        axpy_inplace(rhs, dt, dealias(ctil));
    }
    axpy_inplace(rhs, 0.25 * dt * dt, W(st.vt));
    for (std::size_t i = 0; i < rhs.values.size(); ++i)
        rhs.values[i] += st.vt.values[i] * (1.0 - 0.5 * dt * sigma.values[i]);

    // Preconditioner: constant-coefficient inverse with mean a, b.
    const double abar = mean(st.a_coef), bbar = mean(st.b_coef);
    const double cfac = 0.25 * dt * dt * bbar / (st.eps * st.eps * abar);
    Fft& fft = Fft::get(g.n());
    auto precond = [&](const ScalarField& r) {
        SpectralScalar s = fft.forward(r);
        const double k0sq = g.k0() * g.k0();
        for_modes(g, [&](std::size_t i, int mx, int my, int mz) {
            const double k2 = k0sq * (double(mx) * mx + double(my) * my + double(mz) * mz);
            s.coeff[i] /= (1.0 + cfac * k2);
        });
        return fft.inverse(s);
    };
    auto apply_M = [&](const ScalarField& x) {
        ScalarField mx = sub(x, scale(W(x), 0.25 * dt * dt));
        for (std::size_t i = 0; i < mx.values.size(); ++i)
            mx.values[i] += 0.5 * dt * sigma.values[i] * x.values[i];
        return mx;
    };
    ScalarField vtn = precond(rhs);
    const double ref = std::max(1.0, l2_norm(rhs));
    double res = 0.0;
    bool converged = false;
    for (int it = 0; it < 500; ++it) {
        ScalarField r = sub(rhs, apply_M(vtn));
        res = l2_norm(r);
        if (res <= 1e-10 * ref) {
            converged = true;
            break;
        }
        axpy_inplace(vtn, 1.0, precond(r));
    }
    if (!converged) throw ConvergenceError("step_wave: implicit solve stalled", res);
    out.vt = vtn;
    for (std::size_t i = 0; i < out.v.values.size(); ++i)
        out.v.values[i] = st.v.values[i] + 0.5 * dt * (st.vt.values[i] + vtn.values[i]);
    return out;
}

double wave_total_energy(const WaveState& st) {
    const VectorField gv = grad(st.v);
    double acc = 0.0;
    const double e2 = st.eps * st.eps;
    for (std::size_t i = 0; i < st.v.values.size(); ++i) {
        const double g2 = gv[0].values[i] * gv[0].values[i] +
                          gv[1].values[i] * gv[1].values[i] +
                          gv[2].values[i] * gv[2].values[i];
        acc += e2 * st.a_coef.values[i] * st.vt.values[i] * st.vt.values[i] +
               st.b_coef.values[i] * g2;
    }
    return acc * st.grid().cell_volume();
}

LocalEnergyProbe::LocalEnergyProbe(const Grid& grid, double radius)
    : mask_(ball_mask(grid, radius)), radius_(radius), mask_volume_(integral(mask_)) {
    if (!(radius > 0.0) || radius > 0.5 * grid.length())
        throw ContractViolation("LocalEnergyProbe: radius must lie in (0, L/2]");
}

double LocalEnergyProbe::operator()(const ScalarField& v) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < v.values.size(); ++i)
        acc += mask_.values[i] * v.values[i] * v.values[i];
    return acc * v.grid.cell_volume();
}

double local_energy(const WaveState& st, double radius) {
    return LocalEnergyProbe(st.grid(), radius)(st.v);
}

std::vector<AcousticRun> run_acoustic_sweep(const AcousticOptions& opt) {
    if (opt.eps_list.empty())
        throw ContractViolation("run_acoustic_sweep: eps_list must not be empty");
    const Grid grid(opt.n, opt.L);
    const double probe_radius = opt.probe_radius > 0.0 ? opt.probe_radius : opt.L / 8.0;

    SpongeProfile sponge;
    if (opt.sponge_on) {
        sponge.inner_radius = 0.30 * opt.L;
        sponge.outer_radius = 0.48 * opt.L;
    }
    if (opt.sponge_on && probe_radius >= sponge.inner_radius)
        throw ContractViolation("run_acoustic_sweep: probe radius must sit inside the sponge");

    // Coefficients: uniform a = b = 1, or the localized temperature profile
    // b = exp(bump) over the flat background with a = 1/2.
    ScalarField a_coef(grid), b_coef(grid);
    if (opt.profile == AcousticOptions::Profile::uniform) {
        for (auto& v : a_coef.values) v = 1.0;
        for (auto& v : b_coef.values) v = 1.0;
    } else {
        for (auto& v : a_coef.values) v = 0.5;
        const ScalarField bump = central_bump(grid, 0.25 * opt.L, 0.5);
        for (std::size_t i = 0; i < b_coef.values.size(); ++i)
            b_coef.values[i] = std::exp(bump.values[i]);
    }

    const ScalarField pulse = dealias(central_bump(grid, opt.L / 6.0, 1.0));
    const LocalEnergyProbe probe(grid, probe_radius);

    std::vector<AcousticRun> runs;
    for (double eps : opt.eps_list) {
        WaveState st(pulse, ScalarField(grid), a_coef, b_coef, eps);
        SpongeProfile sp = sponge;
        if (opt.sponge_on) {
            const double cref = std::sqrt(max_value(b_coef) / min_value(a_coef)) / eps;
            const double width = sp.outer_radius - sp.inner_radius;
            sp.strength =
                opt.sponge_strength > 0.0 ? opt.sponge_strength : 2.0 * cref / width;
        }
        const double dt_stab = opt.implicit ? opt.safety * grid.dx() : wave_cfl_dt(st, opt.safety);
        const int per_sample = std::max(1, static_cast<int>(std::ceil(
                                              opt.T / opt.samples / dt_stab)));
        const double dt = opt.T / opt.samples / per_sample;

        AcousticRun run;
        run.eps = eps;
        run.series.push_back({0.0, probe(st.v), wave_total_energy(st)});
        double avg = 0.0;
        for (int s = 0; s < opt.samples; ++s) {
            for (int q = 0; q < per_sample; ++q) {
                const double le = probe(st.v);
                avg += dt * le;
                st = step_wave(st, dt, nullptr, sp, opt.implicit);
            }
            run.series.push_back({st.time, probe(st.v), wave_total_energy(st)});
        }
        run.time_avg_local_energy = avg / opt.T;
        runs.push_back(std::move(run));
    }
    return runs;
}

}  // namespace machlim
