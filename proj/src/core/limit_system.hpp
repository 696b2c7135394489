// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>

#include "eps_state.hpp"

namespace machlim {

// || div(2w - kappa e^vartheta grad vartheta) ||_{L2}.
double limit_constraint_residual(const LimitState& state, const PhysParams& params);

// Restores the velocity constraint by gradient correction: w <- w - grad(phi)
// with 2 Lap phi = div(2w - kappa e^vartheta grad vartheta), repeated until
// the residual is below 1e-10 * max(1, ||w||_{H1}) (at most 200 sweeps).
// vartheta is untouched.
LimitState enforce_constraint(const LimitState& state, const PhysParams& params);

// Solves div(c grad pi) = div g for zero-mean pi by Richardson iteration
// preconditioned with the constant-coefficient spectral inverse.
ScalarField solve_weighted_poisson(const ScalarField& c, const ScalarField& div_g,
                                   double rel_tol = 1e-10, int max_iter = 200);

// Limit-system tendencies.  The momentum tendency is
//   F - e^vartheta grad pi,  F = -(w.grad)w + e^vartheta [(curl h) x h + div Phi(w)],
// with pi chosen so the tendency is compatible with the time-differentiated
// constraint.  The recovered pi (zero-mean) is returned through *pi_out.
LimitTendencies rhs_limit(const LimitState& state, const PhysParams& params,
                          ScalarField* pi_out = nullptr);

// IMEX step (frozen-coefficient diffusion implicit, advection/Lorentz
// explicit) followed by a Leray projection of h and constraint enforcement;
// the state's pi field carries the multiplier recovered during the step.
LimitState step_limit(const LimitState& state, double dt, const PhysParams& params);

double cfl_dt(const LimitState& state, const PhysParams& params, double safety = 0.4);

// Limit initial data obtained from rescaled-system data: w = constraint
// projection of u (with vartheta = theta), h = Leray projection of H.
LimitState project_to_limit(const EpsState& state, const PhysParams& params);

}  // namespace machlim
