// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <variant>

#include "fft.hpp"
#include "field.hpp"

namespace machlim {

using FieldVariant = std::variant<ScalarField, VectorField>;

enum class DiffKind { grad, div, curl, laplacian };

// Spectral differential operators.  All of them act on the trigonometric
// interpolant and zero the Nyquist plane, so div(curl .) == 0 and
// curl(grad .) == 0 hold exactly (up to rounding).
ScalarField div(const VectorField& v);
VectorField grad(const ScalarField& f);
VectorField curl(const VectorField& v);
ScalarField laplacian(const ScalarField& f);
VectorField laplacian(const VectorField& v);

// Arity-checked dispatcher: grad/laplacian of scalars, div/curl of vectors,
// laplacian of vectors componentwise.  Rejects non-finite input.
FieldVariant diff_op(DiffKind kind, const FieldVariant& f);

// Spectral-domain variants (no forward transform of the argument).
void grad_spec(const SpectralScalar& f, VectorField& out);
void div_spec(const SpectralVector& v, ScalarField& out);
void curl_spec(const SpectralVector& v, VectorField& out);
void laplacian_spec(const SpectralScalar& f, ScalarField& out);

// Zero-mean inverse Laplacian (zero mode and Nyquist plane map to zero).
ScalarField inv_laplacian(const ScalarField& f);

// 2/3-rule truncation: kills every mode with any |m_i| > fraction*(n/2).
void dealias_inplace(SpectralScalar& s);
void dealias_inplace(SpectralVector& s);
ScalarField dealias(const ScalarField& f);
VectorField dealias(const VectorField& v);

// v - grad(invlap(div v)); leaves solenoidal fields untouched.
VectorField leray_project(const VectorField& v);
void leray_project_spec(SpectralVector& v);

// Pointwise products followed by dealiasing.
ScalarField multiply(const ScalarField& a, const ScalarField& b);
VectorField multiply(const ScalarField& a, const VectorField& b);
ScalarField dot(const VectorField& a, const VectorField& b);
VectorField cross(const VectorField& a, const VectorField& b);

// Arithmetic (no dealiasing; these are linear).
ScalarField add(const ScalarField& a, const ScalarField& b);
ScalarField sub(const ScalarField& a, const ScalarField& b);
ScalarField scale(const ScalarField& a, double c);
VectorField add(const VectorField& a, const VectorField& b);
VectorField sub(const VectorField& a, const VectorField& b);
VectorField scale(const VectorField& a, double c);
void axpy_inplace(ScalarField& y, double alpha, const ScalarField& x);
void axpy_inplace(VectorField& y, double alpha, const VectorField& x);

// Quadrature and basic reductions (volume element included).
double mean(const ScalarField& f);
double integral(const ScalarField& f);
double l2_norm(const ScalarField& f);
double l2_norm(const VectorField& v);
double linf_norm(const ScalarField& f);
double linf_norm(const VectorField& v);

bool is_finite(const ScalarField& f);
bool is_finite(const VectorField& v);
void require_finite(const ScalarField& f, const std::string& name);
void require_finite(const VectorField& v, const std::string& name);

// Loop over the r2c half grid handing out (flat index, mx, my, mz);
// mz is the non-negative z mode, 0..n/2.
template <class Fn>
inline void for_modes(const Grid& g, Fn&& fn) {
    const int n = g.n();
    const int nz = n / 2 + 1;
    std::size_t idx = 0;
    for (int ix = 0; ix < n; ++ix) {
        const int mx = ix < n / 2 ? ix : ix - n;
        for (int iy = 0; iy < n; ++iy) {
            const int my = iy < n / 2 ? iy : iy - n;
            for (int iz = 0; iz < nz; ++iz, ++idx) fn(idx, mx, my, iz);
        }
    }
}

}  // namespace machlim
