// SPDX-License-Identifier: Apache-2.0
#include "fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <memory>
#include <mutex>

namespace machlim {

namespace {
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

struct Fft::Impl {
    int n;
    std::size_t nreal, ncplx;
    double* rbuf;
    fftw_complex* cbuf;
    fftw_plan plan_r2c;
    fftw_plan plan_c2r;
};

Fft::Fft(int n) : impl_(new Impl) {
    impl_->n = n;
    impl_->nreal = static_cast<std::size_t>(n) * n * n;
    impl_->ncplx = static_cast<std::size_t>(n) * n * (n / 2 + 1);
    impl_->rbuf = fftw_alloc_real(impl_->nreal);
    impl_->cbuf = fftw_alloc_complex(impl_->ncplx);
    std::lock_guard<std::mutex> lock(planner_mutex());
    impl_->plan_r2c = fftw_plan_dft_r2c_3d(n, n, n, impl_->rbuf, impl_->cbuf, FFTW_ESTIMATE);
    impl_->plan_c2r = fftw_plan_dft_c2r_3d(n, n, n, impl_->cbuf, impl_->rbuf, FFTW_ESTIMATE);
}

Fft::~Fft() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(impl_->plan_r2c);
    fftw_destroy_plan(impl_->plan_c2r);
    fftw_free(impl_->rbuf);
    fftw_free(impl_->cbuf);
    delete impl_;
}

struct FftCache {
    std::map<int, std::unique_ptr<Fft, void (*)(Fft*)>> by_n;

    Fft& get(int n) {
        auto it = by_n.find(n);
        if (it == by_n.end()) {
            auto del = [](Fft* p) { delete p; };
            it = by_n.emplace(n, std::unique_ptr<Fft, void (*)(Fft*)>(new Fft(n), del)).first;
        }
        return *it->second;
    }
};

Fft& Fft::get(int n) {
    thread_local FftCache cache;
    return cache.get(n);
}

void Fft::forward(const double* in, std::complex<double>* out) {
    std::memcpy(impl_->rbuf, in, impl_->nreal * sizeof(double));
    fftw_execute(impl_->plan_r2c);
    std::memcpy(out, impl_->cbuf, impl_->ncplx * sizeof(fftw_complex));
}

void Fft::inverse(const std::complex<double>* in, double* out) {
    std::memcpy(impl_->cbuf, in, impl_->ncplx * sizeof(fftw_complex));
    fftw_execute(impl_->plan_c2r);
    const double scale = 1.0 / static_cast<double>(impl_->nreal);
    for (std::size_t i = 0; i < impl_->nreal; ++i) out[i] = impl_->rbuf[i] * scale;
}

SpectralScalar Fft::forward(const ScalarField& f) {
    SpectralScalar s(f.grid);
    forward(f.values.data(), s.coeff.data());
    return s;
}

ScalarField Fft::inverse(const SpectralScalar& s) {
    ScalarField f(s.grid);
    inverse(s.coeff.data(), f.values.data());
    return f;
}

SpectralVector Fft::forward(const VectorField& v) {
    SpectralVector s(v.grid());
    for (int c = 0; c < 3; ++c) forward(v[c].values.data(), s[c].coeff.data());
    return s;
}

VectorField Fft::inverse(const SpectralVector& s) {
    VectorField v(s.grid());
    for (int c = 0; c < 3; ++c) inverse(s[c].coeff.data(), v[c].values.data());
    return v;
}

}  // namespace machlim
