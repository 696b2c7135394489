// SPDX-License-Identifier: Apache-2.0
#include "eps_system.hpp"

#include <cmath>

#include "fft.hpp"
#include "norms.hpp"
#include "ops.hpp"
#include "rng.hpp"

namespace machlim {

namespace {

constexpr double kThetaOverflowGuard = 20.0;
constexpr double kCflFloor = 1e-8;
constexpr std::complex<double> kI{0.0, 1.0};

ScalarField exp_field(const ScalarField& base, double coeff, double shift = 0.0) {
    ScalarField out(base.grid);
    for (std::size_t i = 0; i < out.values.size(); ++i)
        out.values[i] = std::exp(coeff * base.values[i] + shift);
    return out;
}

// exp(theta - eps p), exp(-eps p), exp(theta); all dealiased.
struct Coefficients {
    ScalarField a;   // e^{-eps p}
    ScalarField b;   // e^{theta}
    ScalarField ab;  // e^{theta - eps p}
};

Coefficients make_coefficients(const EpsState& st, const PhysParams& par) {
    ScalarField a(st.grid()), b(st.grid()), ab(st.grid());
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        const double ep = par.eps * st.p.values[i];
        const double th = st.theta.values[i];
        a.values[i] = std::exp(-ep);
        b.values[i] = std::exp(th);
        ab.values[i] = std::exp(th - ep);
    }
    return Coefficients{dealias(a), dealias(b), dealias(ab)};
}

void guard_state(const EpsState& st) {
    if (linf_norm(st.theta) > kThetaOverflowGuard)
        throw NumericError("rhs_full: |theta|_inf exceeds overflow guard (field theta)");
    require_finite(st.p, "field p");
    require_finite(st.u, "field u");
    require_finite(st.H, "field H");
    require_finite(st.theta, "field theta");
}

// Spectral copy of the full state, in the fixed component order
// [p, ux, uy, uz, Hx, Hy, Hz, theta] used by the implicit solver.
struct SpecState {
    std::array<SpectralScalar, 8> f;

    explicit SpecState(const Grid& g)
        : f{SpectralScalar(g), SpectralScalar(g), SpectralScalar(g), SpectralScalar(g),
            SpectralScalar(g), SpectralScalar(g), SpectralScalar(g), SpectralScalar(g)} {}

    const Grid& grid() const { return f[0].grid; }
};

SpecState to_spectral(const EpsState& st) {
    SpecState s(st.grid());
    Fft& fft = Fft::get(st.grid().n());
    fft.forward(st.p.values.data(), s.f[0].coeff.data());
    for (int c = 0; c < 3; ++c) fft.forward(st.u[c].values.data(), s.f[1 + c].coeff.data());
    for (int c = 0; c < 3; ++c) fft.forward(st.H[c].values.data(), s.f[4 + c].coeff.data());
    fft.forward(st.theta.values.data(), s.f[7].coeff.data());
    return s;
}

SpecState to_spectral(const Tendencies& t) {
    SpecState s(t.dp.grid);
    Fft& fft = Fft::get(t.dp.grid.n());
    fft.forward(t.dp.values.data(), s.f[0].coeff.data());
    for (int c = 0; c < 3; ++c) fft.forward(t.du[c].values.data(), s.f[1 + c].coeff.data());
    for (int c = 0; c < 3; ++c) fft.forward(t.dH[c].values.data(), s.f[4 + c].coeff.data());
    fft.forward(t.dtheta.values.data(), s.f[7].coeff.data());
    return s;
}

EpsState to_physical(const SpecState& s, double time) {
    EpsState st(s.grid());
    Fft& fft = Fft::get(s.grid().n());
    fft.inverse(s.f[0].coeff.data(), st.p.values.data());
    for (int c = 0; c < 3; ++c) fft.inverse(s.f[1 + c].coeff.data(), st.u[c].values.data());
    for (int c = 0; c < 3; ++c) fft.inverse(s.f[4 + c].coeff.data(), st.H[c].values.data());
    fft.inverse(s.f[7].coeff.data(), st.theta.values.data());
    st.time = time;
    return st;
}

// Frozen-coefficient implicit operator L applied spectrally:
//   L p     = -(2/eps) div u - (kappa b /eps) (-Delta) theta   [b = e^{theta_bar}]
//   L u     = -(b/eps) grad p + b (mu Lap u + (mu+lambda) grad div u)
//   L H     = nu Lap H
//   L theta = kappa b Lap theta
void apply_implicit_operator(const SpecState& x, const PhysParams& par, SpecState& out) {
    const Grid& g = x.grid();
    const double k0 = g.k0();
    const double beta = std::exp(par.theta_bar);
    for_modes(g, [&](std::size_t i, int mx, int my, int mz) {
        const double m2 = double(mx) * mx + double(my) * my + double(mz) * mz;
        const double K = k0 * k0 * m2;
        const double kx = k0 * mx, ky = k0 * my, kz = k0 * mz;
        const std::complex<double> p = x.f[0].coeff[i];
        const std::complex<double> ux = x.f[1].coeff[i], uy = x.f[2].coeff[i],
                                   uz = x.f[3].coeff[i];
        const std::complex<double> th = x.f[7].coeff[i];
        const std::complex<double> divu = kI * (kx * ux + ky * uy + kz * uz);
        const std::complex<double> kdotu = kx * ux + ky * uy + kz * uz;
        out.f[0].coeff[i] = -(2.0 / par.eps) * divu - (par.kappa * beta * K / par.eps) * th;
        const std::complex<double> pres = -(beta / par.eps) * kI * p;
        out.f[1].coeff[i] =
            pres * kx - beta * (par.mu * K * ux + (par.mu + par.lambda) * kx * kdotu);
        out.f[2].coeff[i] =
            pres * ky - beta * (par.mu * K * uy + (par.mu + par.lambda) * ky * kdotu);
        out.f[3].coeff[i] =
            pres * kz - beta * (par.mu * K * uz + (par.mu + par.lambda) * kz * kdotu);
        for (int c = 0; c < 3; ++c) out.f[4 + c].coeff[i] = -par.nu * K * x.f[4 + c].coeff[i];
        out.f[7].coeff[i] = -par.kappa * beta * K * th;
    });
}

// Solves (I - dt L) x_new = rhs exactly per wavenumber (theta first, then the
// coupled (p, div u) pair, then the solenoidal velocity part and H).
void solve_implicit(SpecState& x, const PhysParams& par, double dt) {
    const Grid& g = x.grid();
    const double k0 = g.k0();
    const double beta = std::exp(par.theta_bar);
    const double alpha = dt / par.eps;
    for_modes(g, [&](std::size_t i, int mx, int my, int mz) {
        const double m2 = double(mx) * mx + double(my) * my + double(mz) * mz;
        if (m2 == 0.0) return;  // zero mode has no implicit terms
        const double K = k0 * k0 * m2;
        const double kx = k0 * mx, ky = k0 * my, kz = k0 * mz;

        std::complex<double>& th = x.f[7].coeff[i];
        th /= (1.0 + dt * par.kappa * beta * K);
        for (int c = 0; c < 3; ++c) x.f[4 + c].coeff[i] /= (1.0 + dt * par.nu * K);

        std::complex<double>& p = x.f[0].coeff[i];
        std::complex<double>&ux = x.f[1].coeff[i], &uy = x.f[2].coeff[i], &uz = x.f[3].coeff[i];
        const std::complex<double> kdotu = kx * ux + ky * uy + kz * uz;
        const std::complex<double> D = kI * kdotu;
        const std::complex<double> R = p - alpha * par.kappa * beta * K * th;
        const double a22 = 1.0 + dt * beta * (2.0 * par.mu + par.lambda) * K;
        const double det = a22 + 2.0 * alpha * alpha * beta * K;
        // det >= 1 for dt > 0; the pair is never singular.
        const std::complex<double> Pn = (a22 * R - 2.0 * alpha * D) / det;
        const std::complex<double> Dn = (D + alpha * beta * K * R) / det;
        p = Pn;
        const double perp_fac = 1.0 / (1.0 + dt * beta * par.mu * K);
        const std::complex<double> proj = kdotu / K;
        const std::complex<double> par_fac = -kI * Dn / K;
        ux = (ux - kx * proj) * perp_fac + kx * par_fac;
        uy = (uy - ky * proj) * perp_fac + ky * par_fac;
        uz = (uz - kz * proj) * perp_fac + kz * par_fac;
    });
}

Tendencies rhs_with_sponge(const EpsState& st, const PhysParams& par,
                           const ScalarField* sigma) {
    Tendencies f = rhs_full(st, par);
    if (sigma) {
        // Sponge damps the acoustic components: p and the curl-free part of u.
        axpy_inplace(f.dp, -1.0, multiply(*sigma, st.p));
        VectorField u_ac = sub(st.u, leray_project(st.u));
        axpy_inplace(f.du, -1.0, multiply(*sigma, u_ac));
    }
    return f;
}

// The variable-coefficient part of the singular operator relative to the
// frozen one:  (L_frozen - L_var) applied to the iterate,
//   p-row: -(kappa/eps) div((beta - ab) grad theta)
//   u-row: -(1/eps) (beta - b) grad p.
// Output is spectral and dealiased; everything else cancels exactly.
struct SingularDelta {
    const Grid& grid;
    const PhysParams& par;
    ScalarField beta_minus_b;   // e^{theta_bar} - e^{theta^n}
    ScalarField beta_minus_ab;  // e^{theta_bar} - e^{theta^n - eps p^n}

    SingularDelta(const EpsState& st, const PhysParams& p, const Coefficients& co)
        : grid(st.grid()), par(p), beta_minus_b(st.grid()), beta_minus_ab(st.grid()) {
        const double beta = std::exp(p.theta_bar);
        for (std::size_t i = 0; i < beta_minus_b.values.size(); ++i) {
            beta_minus_b.values[i] = beta - co.b.values[i];
            beta_minus_ab.values[i] = beta - co.ab.values[i];
        }
    }

    bool trivial() const {
        return linf_norm(beta_minus_b) == 0.0 && linf_norm(beta_minus_ab) == 0.0;
    }

    // out.f[0] and out.f[1..3] receive the delta rows; theta/H rows are zero.
    void apply(const SpecState& x, SpecState& out) const {
        Fft& fft = Fft::get(grid.n());
        VectorField gp(grid), gth(grid);
        grad_spec(x.f[0], gp);
        grad_spec(x.f[7], gth);
        ScalarField px(grid), py(grid), pz(grid), qx(grid), qy(grid), qz(grid);
        for (std::size_t i = 0; i < px.values.size(); ++i) {
            px.values[i] = beta_minus_b.values[i] * gp[0].values[i];
            py.values[i] = beta_minus_b.values[i] * gp[1].values[i];
            pz.values[i] = beta_minus_b.values[i] * gp[2].values[i];
            qx.values[i] = beta_minus_ab.values[i] * gth[0].values[i];
            qy.values[i] = beta_minus_ab.values[i] * gth[1].values[i];
            qz.values[i] = beta_minus_ab.values[i] * gth[2].values[i];
        }
        SpectralVector sp(grid), sq(grid);
        fft.forward(px.values.data(), sp[0].coeff.data());
        fft.forward(py.values.data(), sp[1].coeff.data());
        fft.forward(pz.values.data(), sp[2].coeff.data());
        fft.forward(qx.values.data(), sq[0].coeff.data());
        fft.forward(qy.values.data(), sq[1].coeff.data());
        fft.forward(qz.values.data(), sq[2].coeff.data());

        const double k0 = grid.k0();
        const double inv_eps = 1.0 / par.eps;
        const int cut = grid.dealias_cutoff();
        for_modes(grid, [&](std::size_t i, int mx, int my, int mz) {
            const bool masked = std::abs(mx) > cut || std::abs(my) > cut || mz > cut;
            if (masked) {
                out.f[0].coeff[i] = 0.0;
                for (int c = 1; c <= 3; ++c) out.f[c].coeff[i] = 0.0;
            } else {
                const std::complex<double> divq =
                    kI * k0 *
                    (double(mx) * sq[0].coeff[i] + double(my) * sq[1].coeff[i] +
                     double(mz) * sq[2].coeff[i]);
                out.f[0].coeff[i] = -par.kappa * inv_eps * divq;
                out.f[1].coeff[i] = -inv_eps * sp[0].coeff[i];
                out.f[2].coeff[i] = -inv_eps * sp[1].coeff[i];
                out.f[3].coeff[i] = -inv_eps * sp[2].coeff[i];
            }
            for (int c = 4; c < 8; ++c) out.f[c].coeff[i] = 0.0;
        });
    }
};

double spec_norm2(const SpecState& x) {
    double acc = 0.0;
    for (int q = 0; q < 8; ++q)
        for (const auto& c : x.f[q].coeff) acc += std::norm(c);
    return acc;
}

// Solves (I - dt L_var) x = rhs by Richardson iteration preconditioned with
// the exact constant-coefficient solve.
void solve_implicit_variable(SpecState& x, const SingularDelta& delta,
                             const PhysParams& par, double dt) {
    SpecState rhs = x;
    solve_implicit(x, par, dt);  // x0 = M^{-1} rhs
    if (delta.trivial()) return;
    const double ref = std::sqrt(spec_norm2(rhs)) + 1e-300;
    SpecState dl(x.grid()), next(x.grid());
    for (int it = 0; it < 60; ++it) {
        delta.apply(x, dl);
        for (int q = 0; q < 8; ++q)
            for (std::size_t i = 0; i < next.f[q].coeff.size(); ++i)
                next.f[q].coeff[i] = rhs.f[q].coeff[i] - dt * dl.f[q].coeff[i];
        solve_implicit(next, par, dt);
        double diff2 = 0.0;
        for (int q = 0; q < 8; ++q)
            for (std::size_t i = 0; i < next.f[q].coeff.size(); ++i)
                diff2 += std::norm(next.f[q].coeff[i] - x.f[q].coeff[i]);
        x = next;
        if (std::sqrt(diff2) <= 1e-12 * ref) return;
    }
    throw ConvergenceError("step_imex: variable-coefficient implicit solve stalled",
                           std::sqrt(spec_norm2(x)));
}

}  // namespace

Tendencies rhs_full(const EpsState& st, const PhysParams& par) {
    par.validate();
    guard_state(st);
    const Grid& g = st.grid();
    Fft& fft = Fft::get(g.n());

    const SpectralScalar sp = fft.forward(st.p);
    const SpectralVector su = fft.forward(st.u);
    const SpectralVector sH = fft.forward(st.H);
    const SpectralScalar sth = fft.forward(st.theta);

    VectorField gp(g), gt(g), cH(g), dPsi(g), lapH(g);
    grad_spec(sp, gp);
    grad_spec(sth, gt);
    curl_spec(sH, cH);

    // Jacobian J[i] = grad u_i.
    std::array<VectorField, 3> J{VectorField(g), VectorField(g), VectorField(g)};
    for (int i = 0; i < 3; ++i) grad_spec(su[i], J[i]);

    // div Psi(u) and Lap H from the spectral state.
    {
        const double k0 = g.k0();
        SpectralVector sv(g), sl(g);
        for_modes(g, [&](std::size_t i, int mx, int my, int mz) {
            const int half = g.n() / 2;
            if (std::abs(mx) == half || std::abs(my) == half || mz == half) return;
            const double K = k0 * k0 * (double(mx) * mx + double(my) * my + double(mz) * mz);
            const double kx = k0 * mx, ky = k0 * my, kz = k0 * mz;
            const std::complex<double> kdotu =
                kx * su[0].coeff[i] + ky * su[1].coeff[i] + kz * su[2].coeff[i];
            sv[0].coeff[i] = -par.mu * K * su[0].coeff[i] - (par.mu + par.lambda) * kx * kdotu;
            sv[1].coeff[i] = -par.mu * K * su[1].coeff[i] - (par.mu + par.lambda) * ky * kdotu;
            sv[2].coeff[i] = -par.mu * K * su[2].coeff[i] - (par.mu + par.lambda) * kz * kdotu;
            for (int c = 0; c < 3; ++c) sl[c].coeff[i] = -K * sH[c].coeff[i];
        });
        for (int c = 0; c < 3; ++c) {
            fft.inverse(sv[c].coeff.data(), dPsi[c].values.data());
            fft.inverse(sl[c].coeff.data(), lapH[c].values.data());
        }
    }

    ScalarField divu(g);
    for (std::size_t i = 0; i < divu.values.size(); ++i)
        divu.values[i] = J[0][0].values[i] + J[1][1].values[i] + J[2][2].values[i];

    const Coefficients co = make_coefficients(st, par);

    const ScalarField adv_p = dot(st.u, gp);
    const ScalarField adv_t = dot(st.u, gt);
    VectorField adv_u(g);
    for (int i = 0; i < 3; ++i) adv_u[i] = dot(st.u, J[i]);

    const ScalarField div_ab_gt = div(multiply(co.ab, gt));
    const ScalarField theta_diff = multiply(co.a, div(multiply(co.b, gt)));

    // Joule + viscous heating: nu |curl H|^2 + 2 mu |D(u)|^2 + lambda (div u)^2.
    ScalarField heat_raw(g);
    for (std::size_t i = 0; i < heat_raw.values.size(); ++i) {
        const double cx = cH[0].values[i], cy = cH[1].values[i], cz = cH[2].values[i];
        double d2 = 0.0;
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) {
                const double drc = 0.5 * (J[r][c].values[i] + J[c][r].values[i]);
                d2 += drc * drc;
            }
        const double dv = divu.values[i];
        heat_raw.values[i] =
            par.nu * (cx * cx + cy * cy + cz * cz) + 2.0 * par.mu * d2 + par.lambda * dv * dv;
    }
    const ScalarField heat = multiply(co.a, dealias(heat_raw));

    const VectorField b_gp = multiply(co.b, gp);
    const VectorField lorentz_visc = multiply(co.ab, add(cross(cH, st.H), dPsi));
    const ScalarField p_cross = multiply(co.ab, dot(gp, gt));
    const VectorField induction = curl(cross(st.u, st.H));

    Tendencies out(g);
    const double inv_eps = 1.0 / par.eps;
    for (std::size_t i = 0; i < out.dp.values.size(); ++i) {
        out.dp.values[i] = -adv_p.values[i] - inv_eps * (2.0 * divu.values[i] -
                                                         par.kappa * div_ab_gt.values[i]) +
                           par.eps * heat.values[i] + par.kappa * p_cross.values[i];
        out.dtheta.values[i] = -adv_t.values[i] - divu.values[i] +
                               par.eps * par.eps * heat.values[i] +
                               par.kappa * theta_diff.values[i];
        for (int c = 0; c < 3; ++c) {
            out.du[c].values[i] = -adv_u[c].values[i] - inv_eps * b_gp[c].values[i] +
                                  lorentz_visc[c].values[i];
            out.dH[c].values[i] = induction[c].values[i] + par.nu * lapH[c].values[i];
        }
    }
    require_finite(out.dp, "tendency dp");
    require_finite(out.du, "tendency du");
    require_finite(out.dH, "tendency dH");
    require_finite(out.dtheta, "tendency dtheta");
    return out;
}

double cfl_dt(const EpsState& st, const PhysParams& par, double safety) {
    require_finite(st.u, "cfl_dt u");
    require_finite(st.H, "cfl_dt H");
    const double umax = linf_norm(st.u);
    const double hmax = linf_norm(st.H);
    const double thmax = linf_norm(st.theta);
    const double speed = std::max(umax + hmax * std::exp(0.5 * thmax), kCflFloor);
    return safety * st.grid().dx() / speed;
}

ScalarField constraint_field(const EpsState& st, const PhysParams& par) {
    ScalarField ab(st.grid());
    for (std::size_t i = 0; i < ab.values.size(); ++i)
        ab.values[i] = std::exp(st.theta.values[i] - par.eps * st.p.values[i]);
    const VectorField flux = multiply(dealias(ab), grad(st.theta));
    ScalarField r = div(st.u);
    for (std::size_t i = 0; i < r.values.size(); ++i) r.values[i] *= 2.0;
    axpy_inplace(r, -par.kappa, div(flux));
    return r;
}

double constraint_residual(const EpsState& st, const PhysParams& par) {
    return l2_norm(constraint_field(st, par));
}

double div_h_residual(const EpsState& st) {
    return l2_norm(div(st.H)) / std::max(1.0, sobolev_norm(st.H, 1.0));
}

double reconstructed_total_energy(const EpsState& st, const PhysParams& par) {
    double acc = 0.0;
    const double e2 = par.eps * par.eps;
    for (std::size_t i = 0; i < st.p.values.size(); ++i) {
        const double ep = par.eps * st.p.values[i];
        const double th = st.theta.values[i];
        const double u2 = st.u[0].values[i] * st.u[0].values[i] +
                          st.u[1].values[i] * st.u[1].values[i] +
                          st.u[2].values[i] * st.u[2].values[i];
        const double h2 = st.H[0].values[i] * st.H[0].values[i] +
                          st.H[1].values[i] * st.H[1].values[i] +
                          st.H[2].values[i] * st.H[2].values[i];
        acc += std::exp(ep) + e2 * (0.5 * std::exp(ep - th) * u2 + 0.5 * h2);
    }
    return acc * st.grid().cell_volume();
}

EpsState make_initial_data(const Grid& grid, const InitialDataSpec& spec,
                           const PhysParams& par, std::uint64_t seed) {
    par.validate();
    if (spec.band < 1 || spec.band > grid.dealias_cutoff())
        throw ContractViolation("make_initial_data: band limit exceeds dealias cutoff");
    if (!(spec.L0 > 0.0)) throw ContractViolation("make_initial_data: L0 must be positive");
    const double s = spec.norm_s;
    const double eps_n = spec.norm_eps > 0.0 ? spec.norm_eps : par.eps;

    EpsState st(grid);
    st.p = random_band_limited(grid, spec.band, mix_seed(seed, 1));
    st.u = random_band_limited_vector(grid, spec.band, mix_seed(seed, 2));
    st.H = leray_project(random_band_limited_vector(grid, spec.band, mix_seed(seed, 3)));

    // Localized temperature perturbation, scaled to contribute L0/2 to the
    // weighted part of the composite norm (measured at eps_n).
    const double radius = spec.theta_radius > 0.0 ? spec.theta_radius : 0.25 * grid.length();
    ScalarField dev = dealias(central_bump(grid, radius, 1.0));
    const double ctheta =
        sobolev_norm(dev, s + 1.0) + eps_n * sobolev_norm(dev, s + 2.0);
    dev = scale(dev, 0.5 * spec.L0 / ctheta);

    // Scale the random fields so the full composite norm at eps_n hits L0.
    auto weighted_part = [&](double eps) {
        double low = sobolev_norm(st.p, s) + sobolev_norm(st.u, s) + sobolev_norm(st.H, s);
        double high = eps * (sobolev_norm(st.p, s + 1.0) + eps * sobolev_norm(st.p, s + 2.0));
        high += eps * (sobolev_norm(st.u, s + 1.0) + eps * sobolev_norm(st.u, s + 2.0));
        high += eps * (sobolev_norm(st.H, s + 1.0) + eps * sobolev_norm(st.H, s + 2.0));
        return low + high;
    };
    const double t = 0.5 * spec.L0 / weighted_part(eps_n);
    st.p = scale(st.p, t);
    st.u = scale(st.u, t);
    st.H = scale(st.H, t);

    st.theta = ScalarField(grid);
    for (std::size_t i = 0; i < st.theta.values.size(); ++i)
        st.theta.values[i] = par.theta_bar + dev.values[i];

    if (spec.mode == InitialDataSpec::Mode::well_prepared) {
        st.p = scale(st.p, par.eps);
        // One elliptic solve: u <- u - grad(phi), 2 Lap phi = div(2u - kappa ab grad theta).
        ScalarField ab(grid);
        for (std::size_t i = 0; i < ab.values.size(); ++i)
            ab.values[i] = std::exp(st.theta.values[i] - par.eps * st.p.values[i]);
        const VectorField flux = multiply(dealias(ab), grad(st.theta));
        ScalarField r = div(st.u);
        for (std::size_t i = 0; i < r.values.size(); ++i) r.values[i] *= 2.0;
        axpy_inplace(r, -par.kappa, div(flux));
        const ScalarField phi = scale(inv_laplacian(r), 0.5);
        axpy_inplace(st.u, -1.0, grad(phi));
    }
    st.time = 0.0;
    return st;
}

struct ImexStepper::Impl {
    Grid grid;
    PhysParams params;
    TimeScheme scheme;
    std::optional<ScalarField> sigma;
    // BDF2 history
    bool have_history = false;
    double prev_dt = 0.0;
    std::unique_ptr<SpecState> prev_x;
    std::unique_ptr<SpecState> prev_n;

    Impl(const Grid& g, const PhysParams& p, TimeScheme s) : grid(g), params(p), scheme(s) {
        params.validate();
    }
};

ImexStepper::ImexStepper(const Grid& grid, const PhysParams& params, TimeScheme scheme)
    : impl_(std::make_unique<Impl>(grid, params, scheme)) {}

ImexStepper::~ImexStepper() = default;

void ImexStepper::set_sponge(const ScalarField& sigma) { impl_->sigma = sigma; }

void ImexStepper::reset() { impl_->have_history = false; }

EpsState ImexStepper::step(const EpsState& state, double dt) {
    if (!(dt > 0.0)) throw ContractViolation("ImexStepper::step: dt must be positive");
    const PhysParams& par = impl_->params;
    const Grid& g = impl_->grid;
    if (!(state.grid() == g)) throw ContractViolation("ImexStepper::step: grid mismatch");

    const Tendencies f =
        rhs_with_sponge(state, par, impl_->sigma ? &*impl_->sigma : nullptr);
    const Coefficients co = make_coefficients(state, par);
    const SingularDelta delta(state, par, co);
    SpecState x = to_spectral(state);
    SpecState n = to_spectral(f);
    {
        // N = F - L_var X with L_var = L_frozen - Delta; no 1/eps term
        // survives in N (they cancel against the matching terms of F).
        SpecState lx(g), dx(g);
        apply_implicit_operator(x, par, lx);
        delta.apply(x, dx);
        for (int q = 0; q < 8; ++q)
            for (std::size_t i = 0; i < n.f[q].coeff.size(); ++i)
                n.f[q].coeff[i] -= lx.f[q].coeff[i] - dx.f[q].coeff[i];
    }

    SpecState rhs(g);
    double dt_eff = dt;
    if (impl_->scheme == TimeScheme::imexbdf2 && impl_->have_history) {
        const double rho = dt / impl_->prev_dt;
        const double gamma = (1.0 + rho) / (1.0 + 2.0 * rho);
        const double c_x0 = gamma * (1.0 + rho);
        const double c_x1 = -gamma * rho * rho / (1.0 + rho);
        const double c_n0 = gamma * dt * (1.0 + rho);
        const double c_n1 = -gamma * dt * rho;
        for (int q = 0; q < 8; ++q)
            for (std::size_t i = 0; i < rhs.f[q].coeff.size(); ++i)
                rhs.f[q].coeff[i] = c_x0 * x.f[q].coeff[i] +
                                    c_x1 * impl_->prev_x->f[q].coeff[i] +
                                    c_n0 * n.f[q].coeff[i] +
                                    c_n1 * impl_->prev_n->f[q].coeff[i];
        dt_eff = gamma * dt;
    } else {
        for (int q = 0; q < 8; ++q)
            for (std::size_t i = 0; i < rhs.f[q].coeff.size(); ++i)
                rhs.f[q].coeff[i] = x.f[q].coeff[i] + dt * n.f[q].coeff[i];
    }
    for (int q = 0; q < 8; ++q) dealias_inplace(rhs.f[q]);
    solve_implicit_variable(rhs, delta, par, dt_eff);

    {
        SpectralVector h(g);
        for (int c = 0; c < 3; ++c) h[c].coeff = rhs.f[4 + c].coeff;
        leray_project_spec(h);
        for (int c = 0; c < 3; ++c) rhs.f[4 + c].coeff = h[c].coeff;
    }

    if (impl_->scheme == TimeScheme::imexbdf2) {
        impl_->prev_x = std::make_unique<SpecState>(std::move(x));
        impl_->prev_n = std::make_unique<SpecState>(std::move(n));
        impl_->prev_dt = dt;
        impl_->have_history = true;
    }
    EpsState out = to_physical(rhs, state.time + dt);
    require_finite(out.p, "stepped p");
    require_finite(out.theta, "stepped theta");
    return out;
}

EpsState step_imex(const EpsState& state, double dt, const PhysParams& params) {
    ImexStepper stepper(state.grid(), params, TimeScheme::imex1);
    return stepper.step(state, dt);
}

}  // namespace machlim
