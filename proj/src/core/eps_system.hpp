// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <memory>
#include <optional>

#include "eps_state.hpp"
#include "masks.hpp"

namespace machlim {

// Full right-hand side of the rescaled system, with the singular 1/eps
// divergence and pressure-gradient terms, Lorentz force, induction term and
// Joule/viscous heating.  Products are dealiased (2/3 rule).  Throws
// NumericError when exp(theta) would overflow (|theta|_inf > 20) or a field
// goes non-finite.
Tendencies rhs_full(const EpsState& state, const PhysParams& params);

// Advective/Alfven time-step bound: safety * dx / max(|u|_inf +
// |H|_inf * e^{theta_max/2}, floor).  Deliberately independent of eps; the
// singular terms are integrated implicitly.
double cfl_dt(const EpsState& state, const PhysParams& params, double safety = 0.4);

struct InitialDataSpec {
    enum class Mode { well_prepared, ill_prepared };
    Mode mode = Mode::well_prepared;
    double L0 = 1.0;        // target composite data norm
    int band = 4;           // |m| band limit of the random (p,u,H)
    double theta_radius = 0.0;  // bump support radius; 0 -> L/4
    double norm_s = 4.0;    // Sobolev index s of the composite norm
    double norm_eps = 0.0;  // eps used for normalization; 0 -> params.eps
};

// Random band-limited data scaled so the composite norm
//   ||(p,u,H)||_{H^s} + ||(eps p, eps u, eps H, theta-theta_bar)||_{H^{s+2}_eps}
// hits L0 (theta bump contributes L0/2, the random fields the rest).
// Well-prepared mode then rescales p by eps and corrects u through one
// elliptic solve so div(2u - kappa e^{-eps p + theta} grad theta) vanishes.
EpsState make_initial_data(const Grid& grid, const InitialDataSpec& spec,
                           const PhysParams& params, std::uint64_t seed);

// Acoustic compatibility constraint div(2u - kappa e^{-eps p + theta} grad theta)
// as a field, and its L2 norm.
ScalarField constraint_field(const EpsState& state, const PhysParams& params);
double constraint_residual(const EpsState& state, const PhysParams& params);

// || div H ||_{L2} / max(1, ||H||_{H1}).
double div_h_residual(const EpsState& state);

// Total energy of the reconstructed physical fields,
//   integral of e^{eps p} + eps^2 (e^{eps p - theta} |u|^2 / 2 + |H|^2 / 2),
// conserved by the continuous system on the periodic box.
double reconstructed_total_energy(const EpsState& state, const PhysParams& params);

enum class TimeScheme { imex1, imexbdf2 };

// IMEX stepping.  Implicit part: the singular operator
//   (1/eps) div(2u - kappa e^{theta - eps p} grad theta),
//   (1/eps) e^{theta} grad p
// with coefficients lagged to the step start, plus the constant-coefficient
// diffusion (frozen at theta_bar).  The per-wavenumber constant-coefficient
// solve acts as the exact preconditioner of a Richardson iteration for the
// variable-coefficient correction, so no 1/eps term is ever explicit.
// Explicit part: advection, Lorentz force, induction nonlinearity, heating,
// and the variable-coefficient remainder of the diffusion.  H is
// Leray-projected after each step.  A stepper instance is single-owner;
// states are immutable snapshots.
class ImexStepper {
public:
    ImexStepper(const Grid& grid, const PhysParams& params,
                TimeScheme scheme = TimeScheme::imex1);
    ~ImexStepper();

    // Optional sponge damping of the acoustic components (p and the
    // curl-free part of u), used by the ill-prepared sweep mode.
    void set_sponge(const ScalarField& sigma);

    EpsState step(const EpsState& state, double dt);

    // Forget BDF2 history (e.g. after externally modifying the state).
    void reset();

    ImexStepper(const ImexStepper&) = delete;
    ImexStepper& operator=(const ImexStepper&) = delete;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// One first-order IMEX step (stateless convenience wrapper).
EpsState step_imex(const EpsState& state, double dt, const PhysParams& params);

}  // namespace machlim
