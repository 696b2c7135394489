// SPDX-License-Identifier: Apache-2.0
#include "norms.hpp"

#include <cmath>

#include "ops.hpp"

namespace machlim {

namespace {

// Sum w(iz) * (1+|k|^2)^s * |k|^{2*gradpow} * |c|^2 over the r2c half grid.
// Entries with 0 < iz < n/2 stand for a Hermitian pair and count twice.
double spectral_sum(const SpectralScalar& f, double s, int gradpow) {
    const Grid& g = f.grid;
    const double k0sq = g.k0() * g.k0();
    const int half = g.n() / 2;
    double acc = 0.0;
    for_modes(g, [&](std::size_t i, int mx, int my, int mz) {
        const double k2 = k0sq * (double(mx) * mx + double(my) * my + double(mz) * mz);
        double w = (mz == 0 || mz == half) ? 1.0 : 2.0;
        double term = std::norm(f.coeff[i]) * std::pow(1.0 + k2, s);
        if (gradpow == 1) term *= k2;
        acc += w * term;
    });
    const double n3 = static_cast<double>(g.size());
    const double L3 = g.length() * g.length() * g.length();
    return acc * L3 / (n3 * n3);
}

}  // namespace

double sobolev_norm(const SpectralScalar& f, double s) {
    return std::sqrt(spectral_sum(f, s, 0));
}

double sobolev_norm(const ScalarField& f, double s) {
    return sobolev_norm(Fft::get(f.grid.n()).forward(f), s);
}

double sobolev_norm(const VectorField& v, double s) {
    double acc = 0.0;
    for (int c = 0; c < 3; ++c) {
        const double nc = sobolev_norm(v[c], s);
        acc += nc * nc;
    }
    return std::sqrt(acc);
}

double grad_sobolev_norm(const ScalarField& f, double s) {
    return std::sqrt(spectral_sum(Fft::get(f.grid.n()).forward(f), s, 1));
}

double grad_sobolev_norm(const VectorField& v, double s) {
    double acc = 0.0;
    for (int c = 0; c < 3; ++c) {
        const double nc = grad_sobolev_norm(v[c], s);
        acc += nc * nc;
    }
    return std::sqrt(acc);
}

double weighted_norm(const ScalarField& f, double sigma, double eta) {
    if (sigma < 1.0 || eta < 0.0)
        throw ContractViolation("weighted_norm: require sigma >= 1 and eta >= 0");
    return sobolev_norm(f, sigma - 1.0) + eta * sobolev_norm(f, sigma);
}

double weighted_norm(const VectorField& v, double sigma, double eta) {
    if (sigma < 1.0 || eta < 0.0)
        throw ContractViolation("weighted_norm: require sigma >= 1 and eta >= 0");
    return sobolev_norm(v, sigma - 1.0) + eta * sobolev_norm(v, sigma);
}

namespace {

// One spectral pass per field giving the squared H^sigma norms at
// sigma = s, s+1, s+2 and their |k|^2-weighted (gradient) variants, with a
// single pow() per mode.
struct FieldSums {
    double plain[3] = {0.0, 0.0, 0.0};
    double grad[3] = {0.0, 0.0, 0.0};
};

FieldSums field_sums(const SpectralScalar& f, double s) {
    const Grid& g = f.grid;
    const double k0sq = g.k0() * g.k0();
    const int half = g.n() / 2;
    FieldSums out;
    for_modes(g, [&](std::size_t i, int mx, int my, int mz) {
        const double k2 = k0sq * (double(mx) * mx + double(my) * my + double(mz) * mz);
        const double w = (mz == 0 || mz == half) ? 1.0 : 2.0;
        const double c2 = w * std::norm(f.coeff[i]);
        if (c2 == 0.0) return;
        const double base = 1.0 + k2;
        double p = std::pow(base, s);
        for (int j = 0; j < 3; ++j) {
            out.plain[j] += c2 * p;
            out.grad[j] += c2 * p * k2;
            p *= base;
        }
    });
    const double n3 = static_cast<double>(g.size());
    const double scale = g.length() * g.length() * g.length() / (n3 * n3);
    for (int j = 0; j < 3; ++j) {
        out.plain[j] *= scale;
        out.grad[j] *= scale;
    }
    return out;
}

FieldSums field_sums(const ScalarField& f, double s) {
    return field_sums(Fft::get(f.grid.n()).forward(f), s);
}

FieldSums field_sums(const VectorField& v, double s) {
    FieldSums out;
    for (int c = 0; c < 3; ++c) {
        const FieldSums fc = field_sums(v[c], s);
        for (int j = 0; j < 3; ++j) {
            out.plain[j] += fc.plain[j];
            out.grad[j] += fc.grad[j];
        }
    }
    return out;
}

struct TripleSample {
    double inst;
    double grad_integrand;
};

TripleSample triple_sample(const EpsState& st, double theta_bar, double s, double eps) {
    ScalarField dev(st.grid());
    for (std::size_t i = 0; i < dev.values.size(); ++i)
        dev.values[i] = st.theta.values[i] - theta_bar;
    const FieldSums p = field_sums(st.p, s);
    const FieldSums u = field_sums(st.u, s);
    const FieldSums H = field_sums(st.H, s);
    const FieldSums th = field_sums(dev, s);

    auto nrm = [](double x) { return std::sqrt(x); };
    double low = nrm(p.plain[0]) + nrm(u.plain[0]) + nrm(H.plain[0]);
    double high = 0.0;
    for (const FieldSums* f : {&p, &u, &H})
        high += eps * (nrm(f->plain[1]) + eps * nrm(f->plain[2]));
    high += nrm(th.plain[1]) + eps * nrm(th.plain[2]);

    double glow = nrm(p.grad[0]) + nrm(u.grad[0]) + nrm(H.grad[0]);
    double ghigh = 0.0;
    for (const FieldSums* f : {&u, &H})
        ghigh += eps * (nrm(f->grad[1]) + eps * nrm(f->grad[2]));
    ghigh += nrm(th.grad[1]) + eps * nrm(th.grad[2]);  // grad theta == grad dev

    return TripleSample{low + high, glow * glow + ghigh * ghigh};
}

}  // namespace

double TripleNormAccumulator::instantaneous(const EpsState& st, double theta_bar,
                                            double s, double eps) {
    return triple_sample(st, theta_bar, s, eps).inst;
}

double TripleNormAccumulator::grad_integrand(const EpsState& st, double theta_bar) const {
    return triple_sample(st, theta_bar, s_, eps_).grad_integrand;
}

void TripleNormAccumulator::init(const EpsState& state, double theta_bar) {
    const TripleSample smp = triple_sample(state, theta_bar, s_, eps_);
    sup_ = smp.inst;
    last_grad_ = smp.grad_integrand;
    int_ = 0.0;
    t_ = state.time;
    initialized_ = true;
}

void TripleNormAccumulator::add(const EpsState& state, double theta_bar, double dt) {
    if (!initialized_) throw ContractViolation("TripleNormAccumulator: init() first");
    if (!(dt > 0.0)) throw ContractViolation("TripleNormAccumulator: dt must be positive");
    if (state.time < t_ + 0.5 * dt)
        throw ContractViolation("TripleNormAccumulator: time regression");
    int_ += dt * last_grad_;
    const TripleSample smp = triple_sample(state, theta_bar, s_, eps_);
    if (smp.inst > sup_) sup_ = smp.inst;
    last_grad_ = smp.grad_integrand;
    t_ += dt;
}

double TripleNormAccumulator::value() const { return sup_ + std::sqrt(int_); }

}  // namespace machlim
