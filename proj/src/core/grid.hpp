// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>

#include "errors.hpp"

namespace machlim {

// Periodic box [0,L)^3 sampled on n points per axis.
//
// Mode indices m run over the symmetric range (-n/2, n/2); the Nyquist plane
// m = -n/2 is treated as unresolved and is zeroed by every differential
// operator.  Wavenumber of mode m is (2*pi/L)*m, identical on all axes.
class Grid {
public:
    Grid(int n_per_axis, double box_length, double dealias_fraction = 2.0 / 3.0)
        : n_(n_per_axis), L_(box_length), dealias_fraction_(dealias_fraction) {
        if (n_ < 8 || (n_ & (n_ - 1)) != 0)
            throw ContractViolation("Grid: n_per_axis must be a power of two >= 8");
        if (!(L_ > 0.0))
            throw ContractViolation("Grid: box_length must be positive");
        if (!(dealias_fraction_ > 0.0) || dealias_fraction_ > 1.0)
            throw ContractViolation("Grid: dealias_fraction must lie in (0,1]");
    }

    int n() const { return n_; }
    double length() const { return L_; }
    double dealias_fraction() const { return dealias_fraction_; }

    std::size_t size() const { return static_cast<std::size_t>(n_) * n_ * n_; }
    // r2c layout: full n along x and y, n/2+1 along z (contiguous axis).
    std::size_t spectral_size() const {
        return static_cast<std::size_t>(n_) * n_ * (n_ / 2 + 1);
    }

    double dx() const { return L_ / n_; }
    double cell_volume() const { return dx() * dx() * dx(); }
    double k0() const { return 2.0 * M_PI / L_; }

    // Signed mode index for axis positions 0..n-1 (full axes).
    int mode(int i) const { return i < n_ / 2 ? i : i - n_; }

    // Largest retained |m| under the dealias rule: floor(fraction * n/2).
    int dealias_cutoff() const {
        return static_cast<int>(std::floor(dealias_fraction_ * (n_ / 2)));
    }

    double coord(int i) const { return dx() * i; }

    bool operator==(const Grid& o) const {
        return n_ == o.n_ && L_ == o.L_ && dealias_fraction_ == o.dealias_fraction_;
    }

private:
    int n_;
    double L_;
    double dealias_fraction_;
};

}  // namespace machlim
