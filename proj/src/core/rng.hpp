// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

#include "field.hpp"

namespace machlim {

// Derive independent substream seeds from one master seed.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);

// Zero-mean random field with Gaussian coefficients on |m_i| <= band and a
// mild 1/(1+|m|^2) spectral profile, scaled to unit L2 norm.  Same
// (grid, band, seed) always reproduces the same bits.
ScalarField random_band_limited(const Grid& grid, int band, std::uint64_t seed);
VectorField random_band_limited_vector(const Grid& grid, int band, std::uint64_t seed);

}  // namespace machlim
