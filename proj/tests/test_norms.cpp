// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <random>

#include "eps_system.hpp"
#include "norms.hpp"
#include "ops.hpp"
#include "rng.hpp"

using namespace machlim;

TEST_CASE("H^0 equals the L2 norm and the zero field has norm 0") {
    const Grid g(32, 2.0 * M_PI);
    CHECK(sobolev_norm(ScalarField(g), 2.5) == 0.0);
    const ScalarField f = random_band_limited(g, 6, 3);
    CHECK(sobolev_norm(f, 0.0) == doctest::Approx(l2_norm(f)).epsilon(1e-13));
}

TEST_CASE("single mode H^s norm has the closed form A (1+|k0|^2)^{s/2}") {
    const Grid g(32, 2.0 * M_PI);
    ScalarField f(g);
    // mode k0 = (2,0,0) with k = 2, L2 amplitude computed afterwards
    for (int ix = 0; ix < g.n(); ++ix)
        for (int iy = 0; iy < g.n(); ++iy)
            for (int iz = 0; iz < g.n(); ++iz)
                f.at(ix, iy, iz) = 0.3 * std::cos(2.0 * g.coord(ix));
    const double A = l2_norm(f);
    const double k2 = 4.0;
    for (double s : {0.5, 1.0, 2.0, 4.0})
        CHECK(sobolev_norm(f, s) == doctest::Approx(A * std::pow(1.0 + k2, s / 2.0)));
}

TEST_CASE("||f||_{H^1}^2 = ||f||^2 + ||grad f||^2") {
    const Grid g(32, 2.0 * M_PI);
    const ScalarField f = random_band_limited(g, 8, 17);
    const double h1 = sobolev_norm(f, 1.0);
    const double rhs = std::sqrt(std::pow(l2_norm(f), 2) + std::pow(l2_norm(grad(f)), 2));
    CHECK(h1 == doctest::Approx(rhs).epsilon(1e-12));
}

TEST_CASE("sobolev norm is nondecreasing in s") {
    const Grid g(16, 2.0 * M_PI);
    const ScalarField f = random_band_limited(g, 4, 23);
    double prev = sobolev_norm(f, 0.0);
    for (double s = 0.5; s <= 5.0; s += 0.5) {
        const double cur = sobolev_norm(f, s);
        CHECK(cur >= prev);
        prev = cur;
    }
}

TEST_CASE("weighted norm matches its definition and is monotone in eta") {
    const Grid g(16, 2.0 * M_PI);
    const ScalarField f = random_band_limited(g, 4, 29);

    SUBCASE("eta = 0 reduces to H^{sigma-1}") {
        CHECK(weighted_norm(f, 3.0, 0.0) == doctest::Approx(sobolev_norm(f, 2.0)));
    }

    SUBCASE("single mode closed form at eta = 1") {
        ScalarField m(g);
        for (int ix = 0; ix < g.n(); ++ix)
            for (int iy = 0; iy < g.n(); ++iy)
                for (int iz = 0; iz < g.n(); ++iz)
                    m.at(ix, iy, iz) = std::sin(3.0 * g.coord(iz));
        const double A = l2_norm(m);
        const double k2 = 9.0;
        const double sigma = 2.5;
        const double expect = A * (std::pow(1.0 + k2, (sigma - 1.0) / 2.0) +
                                   std::pow(1.0 + k2, sigma / 2.0));
        CHECK(weighted_norm(m, sigma, 1.0) == doctest::Approx(expect));
    }

    SUBCASE("monotone in eta") {
        std::mt19937_64 eng(5);
        for (int trial = 0; trial < 10; ++trial) {
            const double e1 = (eng() >> 11) * 0x1.0p-53;
            const double e2 = e1 + (eng() >> 11) * 0x1.0p-53;
            CHECK(weighted_norm(f, 2.0, e2) >= weighted_norm(f, 2.0, e1));
        }
    }

    SUBCASE("sigma < 1 or eta < 0 are rejected") {
        CHECK_THROWS_AS(weighted_norm(f, 0.5, 1.0), ContractViolation);
        CHECK_THROWS_AS(weighted_norm(f, 2.0, -0.1), ContractViolation);
    }
}

TEST_CASE("triple norm accumulator") {
    const Grid g(16, 2.0 * M_PI);
    PhysParams par;
    par.eps = 0.2;

    SUBCASE("zero trajectory accumulates zero") {
        EpsState zero(g);  // theta = 0 everywhere; compare against theta_bar = 0 deviation
        TripleNormAccumulator acc(4.0, par.eps);
        acc.init(zero, 0.0);
        zero.time += 0.1;
        acc.add(zero, 0.0, 0.1);
        CHECK(acc.value() == 0.0);
    }

    SUBCASE("equilibrium trajectory accumulates zero") {
        EpsState eq(g);
        for (auto& v : eq.theta.values) v = par.theta_bar;
        TripleNormAccumulator acc(4.0, par.eps);
        acc.init(eq, par.theta_bar);
        eq.time += 0.05;
        acc.add(eq, par.theta_bar, 0.05);
        CHECK(acc.value() == 0.0);
    }

    SUBCASE("single step reproduces the hand-computed formula") {
        InitialDataSpec spec;
        spec.mode = InitialDataSpec::Mode::ill_prepared;
        EpsState s0 = make_initial_data(g, spec, par, 77);
        EpsState s1 = make_initial_data(g, spec, par, 78);
        s1.time = 0.1;

        TripleNormAccumulator acc(4.0, par.eps);
        acc.init(s0, par.theta_bar);
        acc.add(s1, par.theta_bar, 0.1);

        const double i0 = TripleNormAccumulator::instantaneous(s0, par.theta_bar, 4.0, par.eps);
        const double i1 = TripleNormAccumulator::instantaneous(s1, par.theta_bar, 4.0, par.eps);
        // int part uses the left endpoint: dt * grad_integrand(s0)
        TripleNormAccumulator probe(4.0, par.eps);
        probe.init(s0, par.theta_bar);
        EpsState s0b = s0;
        s0b.time = 0.1;
        probe.add(s0b, par.theta_bar, 0.1);
        const double grad0 = probe.int_part() / 0.1;
        CHECK(acc.sup_part() == doctest::Approx(std::max(i0, i1)).epsilon(1e-13));
        CHECK(acc.value() ==
              doctest::Approx(std::max(i0, i1) + std::sqrt(0.1 * grad0)).epsilon(1e-12));
    }

    SUBCASE("value is nondecreasing along a trajectory") {
        InitialDataSpec spec;
        EpsState s = make_initial_data(g, spec, par, 5);
        TripleNormAccumulator acc(4.0, par.eps);
        acc.init(s, par.theta_bar);
        double prev = acc.value();
        for (int i = 0; i < 5; ++i) {
            s = step_imex(s, 0.01, par);
            acc.add(s, par.theta_bar, 0.01);
            CHECK(acc.value() >= prev);
            prev = acc.value();
        }
    }

    SUBCASE("time regression is rejected") {
        EpsState s(g);
        TripleNormAccumulator acc(4.0, par.eps);
        acc.init(s, 0.0);
        EpsState back = s;
        back.time = -1.0;
        CHECK_THROWS_AS(acc.add(back, 0.0, 0.5), ContractViolation);
    }
}
