// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstddef>

#include "field.hpp"

namespace machlim {

// Thread-local FFTW transforms for one grid size.  Plans are created with
// FFTW_ESTIMATE so the chosen algorithm (and therefore floating-point
// rounding) is identical from run to run; plan creation is serialized behind
// a global mutex because the FFTW planner is not thread-safe.
//
// Convention: forward is the raw FFTW sum, inverse applies the 1/n^3 factor.
class Fft {
public:
    // Borrow the calling thread's transform context for this grid size.
    static Fft& get(int n);

    void forward(const double* in, std::complex<double>* out);
    void inverse(const std::complex<double>* in, double* out);

    SpectralScalar forward(const ScalarField& f);
    ScalarField inverse(const SpectralScalar& s);
    SpectralVector forward(const VectorField& v);
    VectorField inverse(const SpectralVector& s);

    Fft(const Fft&) = delete;
    Fft& operator=(const Fft&) = delete;

private:
    explicit Fft(int n);
    ~Fft();

    struct Impl;
    Impl* impl_;
    friend struct FftCache;
};

}  // namespace machlim
