// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "eps_state.hpp"
#include "field.hpp"

namespace machlim {

// H^s norm of the trigonometric interpolant:
//   ( sum_k (1+|k|^2)^s |f_hat(k)|^2 )^{1/2}
// with k = (2*pi/L) m and Parseval scaling so s = 0 is the L2 norm with
// volume element.  Fractional s is fine (spectral multiplier).
double sobolev_norm(const ScalarField& f, double s);
double sobolev_norm(const VectorField& v, double s);
double sobolev_norm(const SpectralScalar& f, double s);

// ||grad f||_{H^s} computed as a |k|^2-weighted spectral sum.
double grad_sobolev_norm(const ScalarField& f, double s);
double grad_sobolev_norm(const VectorField& v, double s);

// The eta-weighted norm ||f||_{H^sigma_eta} = ||f||_{H^{sigma-1}} + eta ||f||_{H^sigma}.
double weighted_norm(const ScalarField& f, double sigma, double eta);
double weighted_norm(const VectorField& v, double sigma, double eta);

// Composite trajectory norm: running sup of
//   ||(p,u,H)||_{H^s} + ||(eps p, eps u, eps H, theta - theta_bar)||_{H^{s+2}_eps}
// plus the square root of the time integral of
//   ||grad(p,u,H)||^2_{H^s} + ||grad(eps u, eps H, theta)||^2_{H^{s+2}_eps},
// accumulated with the left-endpoint rule.  Group norms sum the member norms.
class TripleNormAccumulator {
public:
    TripleNormAccumulator(double s, double eps) : s_(s), eps_(eps) {}

    // Register the initial state (defines t and the first quadrature node).
    void init(const EpsState& state, double theta_bar);

    // Advance by dt to `state` (whose time must equal t + dt).
    void add(const EpsState& state, double theta_bar, double dt);

    double value() const;
    double sup_part() const { return sup_; }
    double int_part() const { return int_; }
    double t() const { return t_; }

    // Instantaneous two-term norm (also used by diagnostics).
    static double instantaneous(const EpsState& state, double theta_bar, double s,
                                double eps);

private:
    double grad_integrand(const EpsState& state, double theta_bar) const;

    double s_;
    double eps_;
    double sup_ = 0.0;
    double int_ = 0.0;
    double t_ = 0.0;
    double last_grad_ = 0.0;
    bool initialized_ = false;
};

}  // namespace machlim
