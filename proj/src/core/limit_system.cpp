// SPDX-License-Identifier: Apache-2.0
#include "limit_system.hpp"

#include <cmath>

#include "fft.hpp"
#include "norms.hpp"
#include "ops.hpp"

namespace machlim {

namespace {

ScalarField exp_of(const ScalarField& f) {
    ScalarField out(f.grid);
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] = std::exp(f.values[i]);
    return dealias(out);
}

ScalarField raw_constraint(const LimitState& st, const PhysParams& par) {
    const ScalarField c = exp_of(st.vartheta);
    const VectorField flux = multiply(c, grad(st.vartheta));
    ScalarField r = div(st.w);
    for (std::size_t i = 0; i < r.values.size(); ++i) r.values[i] *= 2.0;
    axpy_inplace(r, -par.kappa, div(flux));
    return r;
}

}  // namespace

double limit_constraint_residual(const LimitState& st, const PhysParams& par) {
    return l2_norm(raw_constraint(st, par));
}

LimitState enforce_constraint(const LimitState& state, const PhysParams& par) {
    LimitState st = state;
    const double tol_scale = std::max(1.0, sobolev_norm(st.w, 1.0));
    double res = 0.0;
    for (int sweep = 0; sweep < 200; ++sweep) {
        ScalarField r = raw_constraint(st, par);
        res = l2_norm(r);
        if (res <= 1e-10 * tol_scale) return st;
        const ScalarField phi = scale(inv_laplacian(r), 0.5);
        axpy_inplace(st.w, -1.0, grad(phi));
    }
    throw ConvergenceError("enforce_constraint: no convergence in 200 sweeps", res);
}

ScalarField solve_weighted_poisson(const ScalarField& c, const ScalarField& div_g,
                                   double rel_tol, int max_iter) {
    const double cbar = mean(c);
    if (!(cbar > 0.0))
        throw ContractViolation("solve_weighted_poisson: coefficient mean must be positive");
    const double ref = std::max(1.0, l2_norm(div_g));
    ScalarField pi = scale(inv_laplacian(div_g), 1.0 / cbar);
    double res = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        ScalarField lhs = div(multiply(c, grad(pi)));
        ScalarField r = sub(div_g, lhs);
        res = l2_norm(r);
        if (res <= rel_tol * ref) return pi;
        axpy_inplace(pi, 1.0 / cbar, inv_laplacian(r));
    }
    throw ConvergenceError("solve_weighted_poisson: no convergence", res);
}

LimitTendencies rhs_limit(const LimitState& st, const PhysParams& par, ScalarField* pi_out) {
    par.validate();
    require_finite(st.w, "field w");
    require_finite(st.h, "field h");
    require_finite(st.vartheta, "field vartheta");
    if (linf_norm(st.vartheta) > 20.0)
        throw NumericError("rhs_limit: |vartheta|_inf exceeds overflow guard");
    const Grid& g = st.grid();
    Fft& fft = Fft::get(g.n());

    const SpectralVector sw = fft.forward(st.w);
    const SpectralVector sh = fft.forward(st.h);
    const SpectralScalar sth = fft.forward(st.vartheta);

    VectorField gth(g), ch(g), divPhi(g), laph(g);
    grad_spec(sth, gth);
    curl_spec(sh, ch);
    std::array<VectorField, 3> J{VectorField(g), VectorField(g), VectorField(g)};
    for (int i = 0; i < 3; ++i) grad_spec(sw[i], J[i]);
    {
        const double k0 = g.k0();
        SpectralVector sv(g), sl(g);
        for_modes(g, [&](std::size_t i, int mx, int my, int mz) {
            const int half = g.n() / 2;
            if (std::abs(mx) == half || std::abs(my) == half || mz == half) return;
            const double K = k0 * k0 * (double(mx) * mx + double(my) * my + double(mz) * mz);
            const double kx = k0 * mx, ky = k0 * my, kz = k0 * mz;
            const std::complex<double> kdotw =
                kx * sw[0].coeff[i] + ky * sw[1].coeff[i] + kz * sw[2].coeff[i];
            sv[0].coeff[i] = -par.mu * K * sw[0].coeff[i] - (par.mu + par.lambda) * kx * kdotw;
            sv[1].coeff[i] = -par.mu * K * sw[1].coeff[i] - (par.mu + par.lambda) * ky * kdotw;
            sv[2].coeff[i] = -par.mu * K * sw[2].coeff[i] - (par.mu + par.lambda) * kz * kdotw;
            for (int c = 0; c < 3; ++c) sl[c].coeff[i] = -K * sh[c].coeff[i];
        });
        for (int c = 0; c < 3; ++c) {
            fft.inverse(sv[c].coeff.data(), divPhi[c].values.data());
            fft.inverse(sl[c].coeff.data(), laph[c].values.data());
        }
    }

    ScalarField divw(g);
    for (std::size_t i = 0; i < divw.values.size(); ++i)
        divw.values[i] = J[0][0].values[i] + J[1][1].values[i] + J[2][2].values[i];

    const ScalarField c = exp_of(st.vartheta);

    LimitTendencies out(g);
    out.dvartheta = sub(scale(dot(st.w, gth), -1.0), divw);
    axpy_inplace(out.dvartheta, par.kappa, div(multiply(c, gth)));

    out.dh = curl(cross(st.w, st.h));
    axpy_inplace(out.dh, par.nu, laph);

    VectorField F = multiply(c, add(cross(ch, st.h), divPhi));
    for (int i = 0; i < 3; ++i) axpy_inplace(F[i], -1.0, dot(st.w, J[i]));

    // pi from the time-differentiated constraint:
    //   div(e^th grad pi) = div(F - (kappa/2) e^th (dth grad th + grad dth)).
    VectorField G = F;
    VectorField corr = add(multiply(out.dvartheta, gth), grad(out.dvartheta));
    axpy_inplace(G, -0.5 * par.kappa, multiply(c, corr));
    const ScalarField pi = solve_weighted_poisson(c, div(G));
    out.dw = sub(F, multiply(c, grad(pi)));
    if (pi_out) *pi_out = pi;

    require_finite(out.dw, "tendency dw");
    require_finite(out.dh, "tendency dh");
    require_finite(out.dvartheta, "tendency dvartheta");
    return out;
}

LimitState step_limit(const LimitState& state, double dt, const PhysParams& par) {
    if (!(dt > 0.0)) throw ContractViolation("step_limit: dt must be positive");
    const Grid& g = state.grid();
    ScalarField pi(g);
    const LimitTendencies f = rhs_limit(state, par, &pi);

    // Explicit part excludes the frozen-coefficient diffusion, which is
    // solved per mode below.
    const double beta = std::exp(par.theta_bar);
    Fft& fft = Fft::get(g.n());
    SpectralVector swn = fft.forward(add(state.w, scale(f.dw, dt)));
    SpectralVector shn = fft.forward(add(state.h, scale(f.dh, dt)));
    SpectralScalar sthn = fft.forward(add(state.vartheta, scale(f.dvartheta, dt)));
    SpectralVector sw0 = fft.forward(state.w);
    SpectralVector sh0 = fft.forward(state.h);
    SpectralScalar sth0 = fft.forward(state.vartheta);

    const double k0 = g.k0();
    for_modes(g, [&](std::size_t i, int mx, int my, int mz) {
        const double m2 = double(mx) * mx + double(my) * my + double(mz) * mz;
        if (m2 == 0.0) return;
        const double K = k0 * k0 * m2;
        const double kx = k0 * mx, ky = k0 * my, kz = k0 * mz;
        // Backward-Euler correction relative to the fully explicit predictor:
        // X' = (X* + dt L X*_..) is assembled as (X^n + dt N) with N = F - L X^n,
        // i.e. add back dt L X^n, then divide by (I - dt L).
        const double fh = 1.0 / (1.0 + dt * par.nu * K);
        const double fth = 1.0 / (1.0 + dt * par.kappa * beta * K);
        const double fperp = 1.0 / (1.0 + dt * beta * par.mu * K);
        const double fpar = 1.0 / (1.0 + dt * beta * (2.0 * par.mu + par.lambda) * K);

        // remove dt * L x0 that is implicit, from the explicit predictor
        const std::complex<double> kdotw0 =
            kx * sw0[0].coeff[i] + ky * sw0[1].coeff[i] + kz * sw0[2].coeff[i];
        std::array<std::complex<double>, 3> lw{
            -beta * (par.mu * K * sw0[0].coeff[i] + (par.mu + par.lambda) * kx * kdotw0),
            -beta * (par.mu * K * sw0[1].coeff[i] + (par.mu + par.lambda) * ky * kdotw0),
            -beta * (par.mu * K * sw0[2].coeff[i] + (par.mu + par.lambda) * kz * kdotw0)};
        std::array<std::complex<double>, 3> wstar;
        for (int c = 0; c < 3; ++c) wstar[c] = swn[c].coeff[i] - dt * lw[c];
        for (int c = 0; c < 3; ++c)
            shn[c].coeff[i] -= dt * (-par.nu * K * sh0[c].coeff[i]);
        sthn.coeff[i] -= dt * (-par.kappa * beta * K * sth0.coeff[i]);

        // implicit solve
        sthn.coeff[i] *= fth;
        for (int c = 0; c < 3; ++c) shn[c].coeff[i] *= fh;
        const std::complex<double> kdotw = kx * wstar[0] + ky * wstar[1] + kz * wstar[2];
        const std::complex<double> proj = kdotw / K;
        swn[0].coeff[i] = (wstar[0] - kx * proj) * fperp + kx * proj * fpar;
        swn[1].coeff[i] = (wstar[1] - ky * proj) * fperp + ky * proj * fpar;
        swn[2].coeff[i] = (wstar[2] - kz * proj) * fperp + kz * proj * fpar;
    });
    dealias_inplace(swn);
    dealias_inplace(shn);
    dealias_inplace(sthn);
    leray_project_spec(shn);

    LimitState out(g);
    out.w = fft.inverse(swn);
    out.h = fft.inverse(shn);
    out.vartheta = fft.inverse(sthn);
    out.pi = pi;
    out.time = state.time + dt;
    return enforce_constraint(out, par);
}

double cfl_dt(const LimitState& st, const PhysParams& par, double safety) {
    const double wmax = linf_norm(st.w);
    const double hmax = linf_norm(st.h);
    const double thmax = linf_norm(st.vartheta);
    const double speed = std::max(wmax + hmax * std::exp(0.5 * thmax), 1e-8);
    (void)par;
    return safety * st.grid().dx() / speed;
}

LimitState project_to_limit(const EpsState& eps_state, const PhysParams& par) {
    LimitState st(eps_state.grid());
    st.w = eps_state.u;
    st.h = leray_project(eps_state.H);
    st.vartheta = eps_state.theta;
    st.pi = ScalarField(eps_state.grid());
    st.time = eps_state.time;
    return enforce_constraint(st, par);
}

}  // namespace machlim
