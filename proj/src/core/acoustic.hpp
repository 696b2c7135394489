// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <vector>

#include "field.hpp"
#include "masks.hpp"

namespace machlim {

// State of the singular wave equation
//   eps^2 d_t(a d_t v) - div(b grad v) = c
// with coefficients a, b frozen in time within a run.
struct WaveState {
    ScalarField v;
    ScalarField vt;
    ScalarField a_coef;
    ScalarField b_coef;
    double eps = 1.0;
    double time = 0.0;

    WaveState(ScalarField v_, ScalarField vt_, ScalarField a_, ScalarField b_, double eps_);
    const Grid& grid() const { return v.grid; }
};

// Stability bound of the explicit scheme: safety * eps * dx / sqrt(max b / min a).
double wave_cfl_dt(const WaveState& state, double safety = 0.4);

// One step of damped velocity-Verlet (explicit, the default) or trapezoidal
// (implicit = true; preconditioned Richardson solve).  The sponge damping
// -sigma(x) vt ramps from 0 at inner_radius to `strength` at outer_radius.
// Explicit mode rejects dt above the stability bound.
WaveState step_wave(const WaveState& state, double dt, const ScalarField* forcing,
                    const SpongeProfile& sponge, bool implicit = false);

// integral of (eps^2 a vt^2 + b |grad v|^2).
double wave_total_energy(const WaveState& state);

// Smooth-cutoff probe of the ball |x - center| <= radius; the mask is built
// once and reused for every sample.
class LocalEnergyProbe {
public:
    LocalEnergyProbe(const Grid& grid, double radius);

    double radius() const { return radius_; }
    // integral of the mask itself (the value returned for v == 1).
    double mask_volume() const { return mask_volume_; }
    double operator()(const ScalarField& v) const;

private:
    ScalarField mask_;
    double radius_;
    double mask_volume_;
};

double local_energy(const WaveState& state, double radius);

struct AcousticOptions {
    std::vector<double> eps_list{0.4, 0.2, 0.1, 0.05};
    enum class Profile { uniform, bump } profile = Profile::bump;
    bool sponge_on = true;
    double T = 4.0;
    int n = 64;
    double L = 2.0 * M_PI;
    double safety = 0.4;
    bool implicit = false;
    double sponge_strength = 0.0;  // 0 -> matched to the run's wave speed
    double probe_radius = 0.0;     // 0 -> L/8
    int samples = 160;
};

struct AcousticSample {
    double t;
    double local_energy;
    double total_energy;
};

struct AcousticRun {
    double eps;
    std::vector<AcousticSample> series;
    double time_avg_local_energy;
};

// Fixed localized pulse, one run per eps; the decay diagnostic is the
// time-averaged local energy (1/T) int local_energy dt.
std::vector<AcousticRun> run_acoustic_sweep(const AcousticOptions& options);

}  // namespace machlim
