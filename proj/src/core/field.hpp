// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <complex>
#include <vector>

#include "grid.hpp"

namespace machlim {

// Real scalar field in physical space, row-major (x,y,z) with z contiguous.
struct ScalarField {
    Grid grid;
    std::vector<double> values;

    explicit ScalarField(const Grid& g) : grid(g), values(g.size(), 0.0) {}
    ScalarField(const Grid& g, std::vector<double> v) : grid(g), values(std::move(v)) {
        if (values.size() != grid.size())
            throw ContractViolation("ScalarField: values length must equal n^3");
    }

    double& at(int ix, int iy, int iz) {
        return values[(static_cast<std::size_t>(ix) * grid.n() + iy) * grid.n() + iz];
    }
    double at(int ix, int iy, int iz) const {
        return values[(static_cast<std::size_t>(ix) * grid.n() + iy) * grid.n() + iz];
    }
};

struct VectorField {
    std::array<ScalarField, 3> comp;

    explicit VectorField(const Grid& g) : comp{ScalarField(g), ScalarField(g), ScalarField(g)} {}
    VectorField(ScalarField x, ScalarField y, ScalarField z)
        : comp{std::move(x), std::move(y), std::move(z)} {
        if (!(comp[0].grid == comp[1].grid) || !(comp[0].grid == comp[2].grid))
            throw ContractViolation("VectorField: components must share one grid");
    }

    const Grid& grid() const { return comp[0].grid; }
    ScalarField& operator[](int i) { return comp[i]; }
    const ScalarField& operator[](int i) const { return comp[i]; }
};

// Unnormalized forward coefficients on the r2c half grid
// (index (ix,iy,kz), kz = 0..n/2).  Inverse transforms divide by n^3.
struct SpectralScalar {
    Grid grid;
    std::vector<std::complex<double>> coeff;

    explicit SpectralScalar(const Grid& g) : grid(g), coeff(g.spectral_size(), {0.0, 0.0}) {}
};

struct SpectralVector {
    std::array<SpectralScalar, 3> comp;

    explicit SpectralVector(const Grid& g)
        : comp{SpectralScalar(g), SpectralScalar(g), SpectralScalar(g)} {}

    const Grid& grid() const { return comp[0].grid; }
    SpectralScalar& operator[](int i) { return comp[i]; }
    const SpectralScalar& operator[](int i) const { return comp[i]; }
};

}  // namespace machlim
