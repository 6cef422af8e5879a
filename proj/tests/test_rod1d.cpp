#include "junction/rod1d.hpp"

#include <doctest.h>

#include <cmath>

using namespace junction;

TEST_CASE("hash profile endpoint values") {
    SUBCASE("constant source") {
        auto u = solve_hash(1.0, 1.0, M_PI, [](double) { return 1.0; });
        CHECK(u.value(0.0) == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(u.value(1.0) == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(u.derivative(0.0) == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("zero source") {
        auto u = solve_hash(1.0, 1.0, M_PI, [](double) { return 0.0; });
        CHECK(u.value(0.37) == 0.0);
    }
    SUBCASE("linear source, gamma 2") {
        auto u = solve_hash(1.0, 2.0, 1.0, [](double z) { return z; });
        CHECK(u.value(0.0) == doctest::Approx(1.0 / 12.0).epsilon(1e-12));
    }
}

TEST_CASE("alpha1 assembly adds the linear tail") {
    auto hash = solve_hash(1.0, 1.0, M_PI, [](double) { return 0.0; });

    SUBCASE("A = 0 keeps the hash part") {
        auto u = assemble_U0_alpha1(hash, 0.0);
        CHECK(u.value(0.5) == 0.0);
    }
    SUBCASE("A = -pi gives -(1 - z) and the matching end flux") {
        auto u = assemble_U0_alpha1(hash, -M_PI);
        CHECK(u.value(0.0) == doctest::Approx(-1.0));
        CHECK(u.value(0.25) == doctest::Approx(-0.75));
        CHECK(u.end_flux() == doctest::Approx(-M_PI).epsilon(1e-12));
    }
    SUBCASE("combined with a constant source") {
        auto h2 = solve_hash(1.0, 1.0, M_PI, [](double) { return 1.0; });
        auto u = assemble_U0_alpha1(h2, M_PI);
        CHECK(u.value(0.0) == doctest::Approx(1.5).epsilon(1e-12));
    }
}

TEST_CASE("flux identity holds to closed-form precision") {
    for (double A : {-2.0, 0.3, 7.5}) {
        auto hash = solve_hash(1.3, 2.2, 0.8, [](double z) { return std::sin(3.0 * z); });
        auto u = assemble_U0_alpha1(hash, A);
        CHECK(std::abs(u.end_flux() - A) < 1e-12);
    }
}

TEST_CASE("dirichlet-ends profiles") {
    SUBCASE("harmonic: linear interpolant") {
        auto u = solve_dirichlet_ends(2.0, 1.0, 1.0, [](double) { return 0.0; }, 3.0);
        CHECK(u.value(0.0) == doctest::Approx(3.0));
        CHECK(u.value(1.0) == doctest::Approx(1.5));
        CHECK(u.value(2.0) == doctest::Approx(0.0));
    }
    SUBCASE("unit source, zero ends: z(1-z)/2") {
        auto u = solve_dirichlet_ends(1.0, 1.0, 1.0, [](double) { return 1.0; }, 0.0);
        CHECK(u.value(0.5) == doctest::Approx(0.125).epsilon(1e-12));
        CHECK(u.value(0.25) == doctest::Approx(0.25 * 0.75 / 2.0).epsilon(1e-12));
    }
}

TEST_CASE("alpha0 profile carries the symbolic constant") {
    auto hash = solve_dirichlet_ends(1.0, 1.0, M_PI, [](double) { return 0.0; }, 0.0);

    SUBCASE("A0 = 0, a0 = 0 keeps the hash") {
        auto u = assemble_U0_alpha0(0.0, 0.0, 1.0, M_PI, 1.0, std::log(0.1), hash);
        CHECK(u.value(0.5) == 0.0);
    }
    SUBCASE("known A0 contributes the linear ramp") {
        auto u = assemble_U0_alpha0(1.0, 0.0, 1.0, M_PI, 1.0, std::log(0.1), hash);
        CHECK(u.value(0.0) == doctest::Approx(1.0));
        CHECK(u.value(0.5) == doctest::Approx(0.5));
    }
    SUBCASE("ln h ramp: a0 gamma |w| ln h / (2 pi l)") {
        auto u = assemble_U0_alpha0(0.0, 1.0, 1.0, M_PI, 1.0, -1.0, hash);
        CHECK(u.value(0.0) == doctest::Approx(-0.5).epsilon(1e-12));
    }
    SUBCASE("unknown A0 blocks evaluation until resolved") {
        auto u = assemble_U0_alpha0(std::nullopt, 1.0, 1.0, M_PI, 1.0, -1.0, hash);
        CHECK(u.needs_A0());
        CHECK_THROWS_AS(u.value(0.0), std::logic_error);
        auto v = u.resolved(2.0);
        CHECK(v.value(0.0) == doctest::Approx(1.5).epsilon(1e-12));
    }
}

TEST_CASE("profiles are linear in the data") {
    auto f1 = [](double z) { return std::cos(z); };
    auto f2 = [](double z) { return z * z - 0.3; };
    const double a = 1.7, b = -0.6;
    auto u1 = solve_hash(1.0, 1.5, 2.0, f1);
    auto u2 = solve_hash(1.0, 1.5, 2.0, f2);
    auto u12 = solve_hash(1.0, 1.5, 2.0, [&](double z) { return a * f1(z) + b * f2(z); });
    for (double z : {0.0, 0.3, 0.77, 1.0})
        CHECK(u12.value(z) ==
              doctest::Approx(a * u1.value(z) + b * u2.value(z)).epsilon(1e-12).scale(1.0));
}

TEST_CASE("residual check at quadrature nodes") {
    // -gamma |w| U'' = |w| f pointwise: finite differences of derivative()
    auto f = [](double z) { return std::sin(2.0 * z) + 0.4; };
    const double gamma = 1.3;
    auto u = solve_hash(1.0, gamma, 0.7, f);
    const double dz = 1e-6;
    for (double z : {0.2, 0.5, 0.8}) {
        const double upp = (u.derivative(z + dz) - u.derivative(z - dz)) / (2.0 * dz);
        CHECK(-gamma * upp == doctest::Approx(f(z)).epsilon(1e-5));
    }
}
