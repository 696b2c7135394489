// SPDX-License-Identifier: Apache-2.0
#include "ops.hpp"

#include <cmath>
#include <cstdlib>

namespace machlim {

namespace {

constexpr std::complex<double> kI{0.0, 1.0};

// Nyquist modes carry no sign information; every operator drops them.
inline bool resolved(const Grid& g, int mx, int my, int mz) {
    const int ny = g.n() / 2;
    return std::abs(mx) != ny && std::abs(my) != ny && mz != ny;
}

}  // namespace

void grad_spec(const SpectralScalar& f, VectorField& out) {
    const Grid& g = f.grid;
    const double k0 = g.k0();
    SpectralVector gs(g);
    for_modes(g, [&](std::size_t i, int mx, int my, int mz) {
        if (!resolved(g, mx, my, mz)) return;
        const std::complex<double> c = kI * f.coeff[i];
        gs[0].coeff[i] = k0 * mx * c;
        gs[1].coeff[i] = k0 * my * c;
        gs[2].coeff[i] = k0 * mz * c;
    });
    Fft& fft = Fft::get(g.n());
    for (int c = 0; c < 3; ++c) fft.inverse(gs[c].coeff.data(), out[c].values.data());
}

void div_spec(const SpectralVector& v, ScalarField& out) {
    const Grid& g = v.grid();
    const double k0 = g.k0();
    SpectralScalar ds(g);
    for_modes(g, [&](std::size_t i, int mx, int my, int mz) {
        if (!resolved(g, mx, my, mz)) return;
        ds.coeff[i] = kI * k0 *
                      (double(mx) * v[0].coeff[i] + double(my) * v[1].coeff[i] +
                       double(mz) * v[2].coeff[i]);
    });
    Fft::get(g.n()).inverse(ds.coeff.data(), out.values.data());
}

void curl_spec(const SpectralVector& v, VectorField& out) {
    const Grid& g = v.grid();
    const double k0 = g.k0();
    SpectralVector cs(g);
    for_modes(g, [&](std::size_t i, int mx, int my, int mz) {
        if (!resolved(g, mx, my, mz)) return;
        const std::complex<double> vx = v[0].coeff[i], vy = v[1].coeff[i], vz = v[2].coeff[i];
        cs[0].coeff[i] = kI * k0 * (double(my) * vz - double(mz) * vy);
        cs[1].coeff[i] = kI * k0 * (double(mz) * vx - double(mx) * vz);
        cs[2].coeff[i] = kI * k0 * (double(mx) * vy - double(my) * vx);
    });
    Fft& fft = Fft::get(g.n());
    for (int c = 0; c < 3; ++c) fft.inverse(cs[c].coeff.data(), out[c].values.data());
}

void laplacian_spec(const SpectralScalar& f, ScalarField& out) {
    const Grid& g = f.grid;
    const double k0sq = g.k0() * g.k0();
    SpectralScalar ls(g);
    for_modes(g, [&](std::size_t i, int mx, int my, int mz) {
        if (!resolved(g, mx, my, mz)) return;
        const double k2 = k0sq * (double(mx) * mx + double(my) * my + double(mz) * mz);
        ls.coeff[i] = -k2 * f.coeff[i];
    });
    Fft::get(g.n()).inverse(ls.coeff.data(), out.values.data());
}

ScalarField div(const VectorField& v) {
    ScalarField out(v.grid());
    div_spec(Fft::get(v.grid().n()).forward(v), out);
    return out;
}

VectorField grad(const ScalarField& f) {
    VectorField out(f.grid);
    grad_spec(Fft::get(f.grid.n()).forward(f), out);
    return out;
}

VectorField curl(const VectorField& v) {
    VectorField out(v.grid());
    curl_spec(Fft::get(v.grid().n()).forward(v), out);
    return out;
}

ScalarField laplacian(const ScalarField& f) {
    ScalarField out(f.grid);
    laplacian_spec(Fft::get(f.grid.n()).forward(f), out);
    return out;
}

VectorField laplacian(const VectorField& v) {
    VectorField out(v.grid());
    for (int c = 0; c < 3; ++c) out[c] = laplacian(v[c]);
    return out;
}

FieldVariant diff_op(DiffKind kind, const FieldVariant& f) {
    if (const auto* s = std::get_if<ScalarField>(&f)) {
        require_finite(*s, "diff_op input");
        switch (kind) {
            case DiffKind::grad: return grad(*s);
            case DiffKind::laplacian: return laplacian(*s);
            default: throw ContractViolation("diff_op: div/curl require a vector field");
        }
    }
    const auto& v = std::get<VectorField>(f);
    require_finite(v, "diff_op input");
    switch (kind) {
        case DiffKind::div: return div(v);
        case DiffKind::curl: return curl(v);
        case DiffKind::laplacian: return laplacian(v);
        default: throw ContractViolation("diff_op: grad requires a scalar field");
    }
}

ScalarField inv_laplacian(const ScalarField& f) {
    const Grid& g = f.grid;
    SpectralScalar s = Fft::get(g.n()).forward(f);
    const double k0sq = g.k0() * g.k0();
    for_modes(g, [&](std::size_t i, int mx, int my, int mz) {
        const double k2 = k0sq * (double(mx) * mx + double(my) * my + double(mz) * mz);
        if (k2 == 0.0 || !resolved(g, mx, my, mz))
            s.coeff[i] = 0.0;
        else
            s.coeff[i] /= -k2;
    });
    return Fft::get(g.n()).inverse(s);
}

void dealias_inplace(SpectralScalar& s) {
    const int cut = s.grid.dealias_cutoff();
    for_modes(s.grid, [&](std::size_t i, int mx, int my, int mz) {
        if (std::abs(mx) > cut || std::abs(my) > cut || mz > cut) s.coeff[i] = 0.0;
    });
}

void dealias_inplace(SpectralVector& s) {
    for (int c = 0; c < 3; ++c) dealias_inplace(s[c]);
}

ScalarField dealias(const ScalarField& f) {
    Fft& fft = Fft::get(f.grid.n());
    SpectralScalar s = fft.forward(f);
    // Fields that are already band-limited pass through bitwise (the masked
    // region only holds transform roundoff), which makes dealiasing exactly
    // idempotent.
    const int cut = f.grid.dealias_cutoff();
    double cmax = 0.0, jmax = 0.0;
    for_modes(f.grid, [&](std::size_t i, int mx, int my, int mz) {
        const double a = std::abs(s.coeff[i]);
        cmax = std::max(cmax, a);
        if (std::abs(mx) > cut || std::abs(my) > cut || mz > cut) jmax = std::max(jmax, a);
    });
    if (jmax <= 1e-14 * cmax) return f;
    dealias_inplace(s);
    return fft.inverse(s);
}

VectorField dealias(const VectorField& v) {
    VectorField out(v.grid());
    for (int c = 0; c < 3; ++c) out[c] = dealias(v[c]);
    return out;
}

void leray_project_spec(SpectralVector& v) {
    const Grid& g = v.grid();
    for_modes(g, [&](std::size_t i, int mx, int my, int mz) {
        const double m2 = double(mx) * mx + double(my) * my + double(mz) * mz;
        if (m2 == 0.0 || !resolved(g, mx, my, mz)) return;
        const std::complex<double> kdotv =
            double(mx) * v[0].coeff[i] + double(my) * v[1].coeff[i] + double(mz) * v[2].coeff[i];
        const std::complex<double> c = kdotv / m2;
        v[0].coeff[i] -= double(mx) * c;
        v[1].coeff[i] -= double(my) * c;
        v[2].coeff[i] -= double(mz) * c;
    });
}

VectorField leray_project(const VectorField& v) {
    Fft& fft = Fft::get(v.grid().n());
    SpectralVector s = fft.forward(v);
    leray_project_spec(s);
    return fft.inverse(s);
}

ScalarField multiply(const ScalarField& a, const ScalarField& b) {
    ScalarField out(a.grid);
    for (std::size_t i = 0; i < out.values.size(); ++i)
        out.values[i] = a.values[i] * b.values[i];
    return dealias(out);
}

VectorField multiply(const ScalarField& a, const VectorField& b) {
    VectorField out(a.grid);
    for (int c = 0; c < 3; ++c) out[c] = multiply(a, b[c]);
    return out;
}

ScalarField dot(const VectorField& a, const VectorField& b) {
    ScalarField out(a.grid());
    for (std::size_t i = 0; i < out.values.size(); ++i)
        out.values[i] = a[0].values[i] * b[0].values[i] + a[1].values[i] * b[1].values[i] +
                        a[2].values[i] * b[2].values[i];
    return dealias(out);
}

VectorField cross(const VectorField& a, const VectorField& b) {
    VectorField out(a.grid());
    for (std::size_t i = 0; i < out[0].values.size(); ++i) {
        const double ax = a[0].values[i], ay = a[1].values[i], az = a[2].values[i];
        const double bx = b[0].values[i], by = b[1].values[i], bz = b[2].values[i];
        out[0].values[i] = ay * bz - az * by;
        out[1].values[i] = az * bx - ax * bz;
        out[2].values[i] = ax * by - ay * bx;
    }
    for (int c = 0; c < 3; ++c) out[c] = dealias(out[c]);
    return out;
}

ScalarField add(const ScalarField& a, const ScalarField& b) {
    ScalarField out(a.grid);
    for (std::size_t i = 0; i < out.values.size(); ++i)
        out.values[i] = a.values[i] + b.values[i];
    return out;
}

ScalarField sub(const ScalarField& a, const ScalarField& b) {
    ScalarField out(a.grid);
    for (std::size_t i = 0; i < out.values.size(); ++i)
        out.values[i] = a.values[i] - b.values[i];
    return out;
}

ScalarField scale(const ScalarField& a, double c) {
    ScalarField out(a.grid);
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] = a.values[i] * c;
    return out;
}

VectorField add(const VectorField& a, const VectorField& b) {
    return VectorField(add(a[0], b[0]), add(a[1], b[1]), add(a[2], b[2]));
}

VectorField sub(const VectorField& a, const VectorField& b) {
    return VectorField(sub(a[0], b[0]), sub(a[1], b[1]), sub(a[2], b[2]));
}

VectorField scale(const VectorField& a, double c) {
    return VectorField(scale(a[0], c), scale(a[1], c), scale(a[2], c));
}

void axpy_inplace(ScalarField& y, double alpha, const ScalarField& x) {
    for (std::size_t i = 0; i < y.values.size(); ++i) y.values[i] += alpha * x.values[i];
}

void axpy_inplace(VectorField& y, double alpha, const VectorField& x) {
    for (int c = 0; c < 3; ++c) axpy_inplace(y[c], alpha, x[c]);
}

double integral(const ScalarField& f) {
    double s = 0.0;
    for (double v : f.values) s += v;
    return s * f.grid.cell_volume();
}

double mean(const ScalarField& f) {
    double s = 0.0;
    for (double v : f.values) s += v;
    return s / static_cast<double>(f.values.size());
}

double l2_norm(const ScalarField& f) {
    double s = 0.0;
    for (double v : f.values) s += v * v;
    return std::sqrt(s * f.grid.cell_volume());
}

double l2_norm(const VectorField& v) {
    double s = 0.0;
    for (int c = 0; c < 3; ++c) {
        const double nc = l2_norm(v[c]);
        s += nc * nc;
    }
    return std::sqrt(s);
}

double linf_norm(const ScalarField& f) {
    double m = 0.0;
    for (double v : f.values) m = std::max(m, std::abs(v));
    return m;
}

double linf_norm(const VectorField& v) {
    double m = 0.0;
    for (std::size_t i = 0; i < v[0].values.size(); ++i) {
        const double s = std::sqrt(v[0].values[i] * v[0].values[i] +
                                   v[1].values[i] * v[1].values[i] +
                                   v[2].values[i] * v[2].values[i]);
        m = std::max(m, s);
    }
    return m;
}

bool is_finite(const ScalarField& f) {
    for (double v : f.values)
        if (!std::isfinite(v)) return false;
    return true;
}

bool is_finite(const VectorField& v) {
    return is_finite(v[0]) && is_finite(v[1]) && is_finite(v[2]);
}

void require_finite(const ScalarField& f, const std::string& name) {
    if (!is_finite(f)) throw NumericError("non-finite values in " + name);
}

void require_finite(const VectorField& v, const std::string& name) {
    if (!is_finite(v)) throw NumericError("non-finite values in " + name);
}

}  // namespace machlim
