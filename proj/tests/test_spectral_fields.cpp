// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "norms.hpp"
#include "ops.hpp"
#include "rng.hpp"

using namespace machlim;

namespace {

ScalarField from_function(const Grid& g, double (*f)(double, double, double)) {
    ScalarField out(g);
    for (int ix = 0; ix < g.n(); ++ix)
        for (int iy = 0; iy < g.n(); ++iy)
            for (int iz = 0; iz < g.n(); ++iz)
                out.at(ix, iy, iz) = f(g.coord(ix), g.coord(iy), g.coord(iz));
    return out;
}

// 4th-order centered first derivative along one axis, periodic.
ScalarField fd4_derivative(const ScalarField& f, int axis) {
    const Grid& g = f.grid;
    const int n = g.n();
    const double h = g.dx();
    ScalarField out(g);
    auto wrap = [n](int i) { return (i % n + n) % n; };
    for (int ix = 0; ix < n; ++ix)
        for (int iy = 0; iy < n; ++iy)
            for (int iz = 0; iz < n; ++iz) {
                auto sample = [&](int off) {
                    int jx = ix, jy = iy, jz = iz;
                    if (axis == 0) jx = wrap(ix + off);
                    if (axis == 1) jy = wrap(iy + off);
                    if (axis == 2) jz = wrap(iz + off);
                    return f.at(jx, jy, jz);
                };
                out.at(ix, iy, iz) =
                    (8.0 * (sample(1) - sample(-1)) - (sample(2) - sample(-2))) / (12.0 * h);
            }
    return out;
}

}  // namespace

TEST_CASE("grad of a resolved mode is the analytic derivative") {
    const Grid g(32, 2.0 * M_PI);
    ScalarField f = from_function(g, [](double x, double, double) { return std::sin(x); });
    const VectorField gf = grad(f);
    double err = 0.0;
    for (int ix = 0; ix < g.n(); ++ix)
        for (int iy = 0; iy < g.n(); iy += 5)
            for (int iz = 0; iz < g.n(); iz += 7) {
                err = std::max(err, std::abs(gf[0].at(ix, iy, iz) - std::cos(g.coord(ix))));
                err = std::max(err, std::abs(gf[1].at(ix, iy, iz)));
                err = std::max(err, std::abs(gf[2].at(ix, iy, iz)));
            }
    CHECK(err < 1e-13);
}

TEST_CASE("div of curl and curl of grad vanish on random band-limited fields") {
    const Grid g(32, 2.0 * M_PI);
    for (int trial = 0; trial < 20; ++trial) {
        const VectorField v = random_band_limited_vector(g, 9, 1000 + trial);
        const ScalarField f = random_band_limited(g, 9, 2000 + trial);
        CHECK(l2_norm(div(curl(v))) <= 1e-12 * std::max(1.0, l2_norm(v)));
        CHECK(l2_norm(curl(grad(f))) <= 1e-12 * std::max(1.0, l2_norm(f)));
    }
}

TEST_CASE("grad agrees with a 4th-order finite-difference oracle on 128^3") {
    const Grid g(128, 2.0 * M_PI);
    const ScalarField f = random_band_limited(g, 1, 77);
    const VectorField gf = grad(f);
    double ref = 0.0;
    for (int axis = 0; axis < 3; ++axis) ref = std::max(ref, linf_norm(gf[axis]));
    double err = 0.0;
    for (int axis = 0; axis < 3; ++axis) {
        const ScalarField fd = fd4_derivative(f, axis);
        for (std::size_t i = 0; i < fd.values.size(); ++i)
            err = std::max(err, std::abs(fd.values[i] - gf[axis].values[i]));
    }
    CHECK(err / ref <= 1e-6);
}

TEST_CASE("dealias keeps resolved content, kills the band edge, and is idempotent") {
    const Grid g(32, 2.0 * M_PI);  // cutoff floor(2/3 * 16) = 10

    SUBCASE("modes at |m| <= n/4 pass through") {
        const ScalarField f = random_band_limited(g, 8, 5);
        const ScalarField d = dealias(f);
        double err = 0.0;
        for (std::size_t i = 0; i < f.values.size(); ++i)
            err = std::max(err, std::abs(f.values[i] - d.values[i]));
        CHECK(err < 1e-14);
    }

    SUBCASE("pure mode at m = n/2 - 1 is zeroed") {
        ScalarField f = from_function(g, [](double x, double, double) {
            return std::cos(15.0 * x);
        });
        CHECK(linf_norm(dealias(f)) < 1e-14);
    }

    SUBCASE("idempotence is exact") {
        const ScalarField f = random_band_limited(g, 10, 6);
        const ScalarField d1 = dealias(f);
        const ScalarField d2 = dealias(d1);
        for (std::size_t i = 0; i < d1.values.size(); ++i)
            CHECK(d1.values[i] == d2.values[i]);
    }
}

TEST_CASE("leray projection annihilates gradients and fixes solenoidal fields") {
    const Grid g(32, 2.0 * M_PI);

    SUBCASE("pure gradient maps to zero") {
        const ScalarField f = random_band_limited(g, 6, 11);
        CHECK(l2_norm(leray_project(grad(f))) < 1e-12);
    }

    SUBCASE("curl fields are fixed points") {
        const VectorField a = random_band_limited_vector(g, 6, 12);
        const VectorField v = curl(a);
        CHECK(l2_norm(sub(leray_project(v), v)) <= 1e-12 * l2_norm(v));
    }

    SUBCASE("(sin y, 0, 0) + grad(cos x) projects to (sin y, 0, 0)") {
        VectorField v(g);
        for (int ix = 0; ix < g.n(); ++ix)
            for (int iy = 0; iy < g.n(); ++iy)
                for (int iz = 0; iz < g.n(); ++iz)
                    v[0].at(ix, iy, iz) = std::sin(g.coord(iy));
        const ScalarField cx =
            from_function(g, [](double x, double, double) { return std::cos(x); });
        const VectorField p = leray_project(add(v, grad(cx)));
        CHECK(l2_norm(sub(p, v)) < 1e-12);
    }

    SUBCASE("projection is idempotent") {
        const VectorField v = random_band_limited_vector(g, 8, 13);
        const VectorField p1 = leray_project(v);
        const VectorField p2 = leray_project(p1);
        CHECK(l2_norm(sub(p2, p1)) <= 1e-13 * std::max(1.0, l2_norm(p1)));
    }
}

TEST_CASE("diff_op is linear to machine precision") {
    const Grid g(32, 2.0 * M_PI);
    const ScalarField f = random_band_limited(g, 7, 21);
    const ScalarField h = random_band_limited(g, 7, 22);
    const double a = 1.7, b = -0.4;
    ScalarField combo(g);
    for (std::size_t i = 0; i < combo.values.size(); ++i)
        combo.values[i] = a * f.values[i] + b * h.values[i];
    const VectorField lhs = grad(combo);
    VectorField rhs = scale(grad(f), a);
    axpy_inplace(rhs, b, grad(h));
    CHECK(l2_norm(sub(lhs, rhs)) <= 1e-13 * std::max(1.0, l2_norm(lhs)));
}

TEST_CASE("spectral accuracy: derivative error collapses when n doubles") {
    auto max_err = [](int n) {
        const Grid g(n, 2.0 * M_PI);
        ScalarField f(g);
        for (int ix = 0; ix < n; ++ix)
            for (int iy = 0; iy < n; ++iy)
                for (int iz = 0; iz < n; ++iz)
                    f.at(ix, iy, iz) = std::exp(std::sin(g.coord(ix)));
        const VectorField gf = grad(f);
        double err = 0.0;
        for (int ix = 0; ix < n; ++ix) {
            const double x = g.coord(ix);
            const double exact = std::cos(x) * std::exp(std::sin(x));
            err = std::max(err, std::abs(gf[0].at(ix, 0, 0) - exact));
        }
        return err;
    };
    const double e16 = max_err(16);
    const double e32 = max_err(32);
    CHECK(e32 / e16 <= 1e-4);
}

TEST_CASE("diff_op rejects arity mismatches and non-finite input") {
    const Grid g(8, 1.0);
    ScalarField f(g);
    VectorField v(g);
    CHECK_THROWS_AS(diff_op(DiffKind::grad, FieldVariant(v)), ContractViolation);
    CHECK_THROWS_AS(diff_op(DiffKind::div, FieldVariant(f)), ContractViolation);
    CHECK_THROWS_AS(diff_op(DiffKind::curl, FieldVariant(f)), ContractViolation);
    f.values[3] = std::nan("");
    CHECK_THROWS_AS(diff_op(DiffKind::grad, FieldVariant(f)), NumericError);
}

TEST_CASE("vector laplacian acts componentwise") {
    const Grid g(16, 2.0 * M_PI);
    const VectorField v = random_band_limited_vector(g, 4, 31);
    const VectorField lv = laplacian(v);
    for (int c = 0; c < 3; ++c)
        CHECK(l2_norm(sub(lv[c], laplacian(v[c]))) < 1e-14);
}
