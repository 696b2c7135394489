// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "field.hpp"

namespace machlim {

// Physical parameters of the rescaled system.  All coefficients are the
// barred O(1) constants; eps is the Mach number.
struct PhysParams {
    double eps = 0.1;
    double mu = 0.05;
    double lambda = 0.0;
    double nu = 0.05;
    double kappa = 0.05;
    double theta_bar = 0.5;

    // Returns human-readable violations ("mu > 0", ...); empty when valid.
    std::vector<std::string> violations() const {
        std::vector<std::string> v;
        if (!(eps > 0.0 && eps <= 1.0)) v.push_back("0 < eps <= 1");
        if (!(mu > 0.0)) v.push_back("mu > 0");
        if (!(nu > 0.0)) v.push_back("nu > 0");
        if (!(kappa > 0.0)) v.push_back("kappa > 0");
        if (!(2.0 * mu + 3.0 * lambda > 0.0)) v.push_back("2*mu + 3*lambda > 0");
        if (!(theta_bar > 0.0)) v.push_back("theta_bar > 0");
        return v;
    }

    void validate() const {
        auto v = violations();
        if (!v.empty()) {
            std::string msg = "PhysParams: violated constraint(s):";
            for (const auto& s : v) msg += " \"" + s + "\"";
            throw ContractViolation(msg);
        }
    }

    bool operator==(const PhysParams&) const = default;
};

// Unknowns of the rescaled system: log-pressure p, velocity u, magnetic
// field H (kept solenoidal by projection), log-temperature theta.
struct EpsState {
    ScalarField p;
    VectorField u;
    VectorField H;
    ScalarField theta;
    double time = 0.0;

    explicit EpsState(const Grid& g) : p(g), u(g), H(g), theta(g) {}
    const Grid& grid() const { return p.grid; }
};

struct Tendencies {
    ScalarField dp;
    VectorField du;
    VectorField dH;
    ScalarField dtheta;

    explicit Tendencies(const Grid& g) : dp(g), du(g), dH(g), dtheta(g) {}
};

// Limit-system unknowns: velocity w, magnetic field h, log-temperature
// vartheta, multiplier pi (zero-mean gauge).
struct LimitState {
    VectorField w;
    VectorField h;
    ScalarField vartheta;
    ScalarField pi;
    double time = 0.0;

    explicit LimitState(const Grid& g) : w(g), h(g), vartheta(g), pi(g) {}
    const Grid& grid() const { return vartheta.grid; }
};

struct LimitTendencies {
    VectorField dw;
    VectorField dh;
    ScalarField dvartheta;

    explicit LimitTendencies(const Grid& g) : dw(g), dh(g), dvartheta(g) {}
};

}  // namespace machlim
