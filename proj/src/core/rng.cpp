// SPDX-License-Identifier: Apache-2.0
#include "rng.hpp"

#include <cmath>
#include <random>

#include "fft.hpp"
#include "ops.hpp"

namespace machlim {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

namespace {

// Box-Muller on top of mt19937_64 keeps the draw sequence explicit
// (std::normal_distribution is implementation-defined).
class Gauss {
public:
    explicit Gauss(std::uint64_t seed) : eng_(seed) {}

    double operator()() {
        if (have_) {
            have_ = false;
            return spare_;
        }
        double u1 = uniform(), u2 = uniform();
        while (u1 <= 1e-300) u1 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * M_PI * u2;
        spare_ = r * std::sin(a);
        have_ = true;
        return r * std::cos(a);
    }

private:
    double uniform() { return (eng_() >> 11) * 0x1.0p-53; }
    std::mt19937_64 eng_;
    bool have_ = false;
    double spare_ = 0.0;
};

}  // namespace

ScalarField random_band_limited(const Grid& grid, int band, std::uint64_t seed) {
    if (band < 1 || band > grid.dealias_cutoff())
        throw ContractViolation("random_band_limited: band must be in [1, dealias cutoff]");
    const int n = grid.n();
    const int nz = n / 2 + 1;
    SpectralScalar s(grid);
    Gauss gauss(seed);
    auto idx = [&](int mx, int my, int mz) {
        const int ix = mx >= 0 ? mx : mx + n;
        const int iy = my >= 0 ? my : my + n;
        return (static_cast<std::size_t>(ix) * n + iy) * nz + mz;
    };
    // Fixed draw order; for mz = 0 only the lexicographically positive half is
    // drawn and the Hermitian partner is assigned, so c2r sees exact symmetry.
    for (int mx = -band; mx <= band; ++mx)
        for (int my = -band; my <= band; ++my)
            for (int mz = 0; mz <= band; ++mz) {
                if (mx == 0 && my == 0 && mz == 0) continue;
                const double m2 = double(mx) * mx + double(my) * my + double(mz) * mz;
                const double amp = 1.0 / (1.0 + m2);
                if (mz == 0) {
                    if (my < 0 || (my == 0 && mx < 0)) continue;
                    const std::complex<double> c(amp * gauss(), amp * gauss());
                    s.coeff[idx(mx, my, 0)] = c;
                    s.coeff[idx(-mx, -my, 0)] = std::conj(c);
                } else {
                    s.coeff[idx(mx, my, mz)] = {amp * gauss(), amp * gauss()};
                }
            }
    ScalarField f = Fft::get(n).inverse(s);
    const double nrm = l2_norm(f);
    return scale(f, 1.0 / nrm);
}

VectorField random_band_limited_vector(const Grid& grid, int band, std::uint64_t seed) {
    return VectorField(random_band_limited(grid, band, mix_seed(seed, 11)),
                       random_band_limited(grid, band, mix_seed(seed, 12)),
                       random_band_limited(grid, band, mix_seed(seed, 13)));
}

}  // namespace machlim
