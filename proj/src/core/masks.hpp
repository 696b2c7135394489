// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "field.hpp"

namespace machlim {

// C-infinity ramp: 0 for t <= 0, 1 for t >= 1.
double smooth_step(double t);

// C-infinity bump, 1 at r = 0, support r < 1.
double bump_profile(double r);

// Distance from the box center (no periodic wrap; callers keep radii < L/2).
ScalarField radial_distance(const Grid& grid);

// Smooth indicator of the ball of given radius around the box center:
// 1 inside 0.8*radius, smooth falloff to 0 at radius.
ScalarField ball_mask(const Grid& grid, double radius);

// amplitude * bump(|x - center| / radius).
ScalarField central_bump(const Grid& grid, double radius, double amplitude);

struct SpongeProfile {
    double inner_radius = 0.0;
    double outer_radius = 0.0;
    double strength = 0.0;

    void validate(double box_length) const;
};

// Damping coefficient sigma(x): 0 inside inner_radius, ramping smoothly to
// `strength` at outer_radius and held there beyond.
ScalarField sponge_sigma(const Grid& grid, const SpongeProfile& sponge);

}  // namespace machlim
