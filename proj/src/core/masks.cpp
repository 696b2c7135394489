// SPDX-License-Identifier: Apache-2.0
#include "masks.hpp"

#include <cmath>

namespace machlim {

double smooth_step(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / t);
    const double b = std::exp(-1.0 / (1.0 - t));
    return a / (a + b);
}

double bump_profile(double r) {
    const double r2 = r * r;
    if (r2 >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - r2));
}

ScalarField radial_distance(const Grid& grid) {
    ScalarField out(grid);
    const double c = 0.5 * grid.length();
    for (int ix = 0; ix < grid.n(); ++ix)
        for (int iy = 0; iy < grid.n(); ++iy)
            for (int iz = 0; iz < grid.n(); ++iz) {
                const double dx = grid.coord(ix) - c;
                const double dy = grid.coord(iy) - c;
                const double dz = grid.coord(iz) - c;
                out.at(ix, iy, iz) = std::sqrt(dx * dx + dy * dy + dz * dz);
            }
    return out;
}

ScalarField ball_mask(const Grid& grid, double radius) {
    ScalarField r = radial_distance(grid);
    ScalarField out(grid);
    for (std::size_t i = 0; i < out.values.size(); ++i)
        out.values[i] = 1.0 - smooth_step((r.values[i] - 0.8 * radius) / (0.2 * radius));
    return out;
}

ScalarField central_bump(const Grid& grid, double radius, double amplitude) {
    ScalarField r = radial_distance(grid);
    ScalarField out(grid);
    for (std::size_t i = 0; i < out.values.size(); ++i)
        out.values[i] = amplitude * bump_profile(r.values[i] / radius);
    return out;
}

void SpongeProfile::validate(double box_length) const {
    if (strength < 0.0) throw ContractViolation("SpongeProfile: strength must be >= 0");
    if (strength == 0.0) return;
    if (!(0.0 < inner_radius && inner_radius < outer_radius &&
          outer_radius <= 0.5 * box_length))
        throw ContractViolation("SpongeProfile: need 0 < inner < outer <= L/2");
}

ScalarField sponge_sigma(const Grid& grid, const SpongeProfile& sponge) {
    sponge.validate(grid.length());
    ScalarField out(grid);
    if (sponge.strength == 0.0) return out;
    ScalarField r = radial_distance(grid);
    const double w = sponge.outer_radius - sponge.inner_radius;
    for (std::size_t i = 0; i < out.values.size(); ++i)
        out.values[i] =
            sponge.strength * smooth_step((r.values[i] - sponge.inner_radius) / w);
    return out;
}

}  // namespace machlim
