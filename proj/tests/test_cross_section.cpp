#include "junction/cross_section.hpp"

#include <doctest.h>

#include <cmath>

using namespace junction;

namespace {

CrossSection square_section(double side) {
    Eigen::MatrixX2d v(4, 2);
    const double s = side / 2.0;
    v << -s, -s, s, -s, s, s, -s, s;
    return CrossSection::polygon(v, 1.0, 1.0);
}

CrossSection scalene_triangle() {
    Eigen::MatrixX2d v(3, 2);
    v << -0.8, -0.5, 1.1, -0.4, -0.2, 0.9;
    return CrossSection::polygon(v, 1.0, 1.0);
}

}  // namespace

TEST_CASE("disk potential: closed form") {
    auto pot = log_potential(CrossSection::disk(1.0, 1.0, 1.0));
    CHECK(pot.c_log() == 1.0);
    CHECK(pot.value({1.0, 0.0}) == doctest::Approx(0.0));
    CHECK(pot.value({2.0, 0.0}) == doctest::Approx(-std::log(2.0) / (2.0 * M_PI)));
    CHECK(pot.remainder_value({3.0, 0.4}) == 0.0);

    auto pot2 = log_potential(CrossSection::disk(2.0, 1.0, 1.0));
    CHECK(pot2.c_log() == 2.0);
    CHECK(pot2.value({2.0, 0.0}) == doctest::Approx(0.0));
}

TEST_CASE("square capacity against the conformal-map value") {
    // capacity of a square of side s: s * Gamma(1/4)^2 / (4 pi^(3/2))
    const double oracle = 2.0 * 0.5901702995080481;
    auto pot = log_potential(square_section(2.0));
    CHECK(std::abs(pot.c_log() - oracle) / oracle < 0.01);
}

TEST_CASE("polygon potential vanishes on the boundary") {
    auto pot = log_potential(square_section(2.0));
    // off-collocation boundary points
    for (double x : {-0.63, 0.11, 0.87})
        CHECK(std::abs(pot.value({x, 1.0})) < 2e-3);
}

TEST_CASE("capacity scales linearly for polygons") {
    auto p1 = log_potential(square_section(1.0));
    auto p2 = log_potential(square_section(2.0));
    CHECK(p2.c_log() / p1.c_log() == doctest::Approx(2.0).epsilon(1e-3));
}

TEST_CASE("remainder decays like 1/rho for an off-center section") {
    // square centered at (0.3, 0.2): its far-field dipole is the center, so
    // the remainder is ~ (center . dir)/(2 pi rho)
    Eigen::MatrixX2d v(4, 2);
    v << -0.7, -0.8, 1.3, -0.8, 1.3, 1.2, -0.7, 1.2;
    auto pot = log_potential(CrossSection::polygon(v, 1.0, 1.0));
    const Vec2 dir(0.6, 0.8);
    const double r6 = std::abs(pot.remainder_value(6.0 * dir));
    const double r12 = std::abs(pot.remainder_value(12.0 * dir));
    CHECK(r12 < r6);
    CHECK(r6 / r12 == doctest::Approx(2.0).epsilon(0.2));
    const double predicted = (0.3 * 0.6 + 0.2 * 0.8) / (2.0 * M_PI * 6.0);
    CHECK(r6 == doctest::Approx(predicted).epsilon(0.15));
}

TEST_CASE("flux identity") {
    SUBCASE("disks: exact for any radius") {
        for (double a : {1.0, 0.3}) {
            auto pot = log_potential(CrossSection::disk(a, 1.0, 1.0));
            CHECK(flux_identity_check(pot) == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
    SUBCASE("square: within 1e-3") {
        auto pot = log_potential(square_section(2.0));
        CHECK(std::abs(flux_identity_check(pot) - 1.0) < 1e-3);
    }
    SUBCASE("triangle: within 1e-3") {
        auto pot = log_potential(scalene_triangle());
        CHECK(std::abs(flux_identity_check(pot) - 1.0) < 1e-3);
    }
}

TEST_CASE("semicylinder growth constant") {
    const CrossSection disk = CrossSection::disk(1.0, 1.0, 1.0);

    SUBCASE("matched layer data: C = -A/(gamma |w|)") {
        const double A = -M_PI;
        auto g = [&](double, double) { return A / (2.0 * M_PI); };  // A * dW/dnu on the circle
        auto res = semicylinder_growth(disk, 1.0, g, 1.0);
        CHECK(res.C == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(res.C0 == 0.0);
    }
    SUBCASE("zero data") {
        auto res = semicylinder_growth(disk, 1.0, [](double, double) { return 0.0; }, 0.0);
        CHECK(res.C == 0.0);
    }
    SUBCASE("linearity in the data") {
        auto g1 = [](double arc, double z) { return std::sin(arc) + z; };
        auto g2 = [](double arc, double z) { return std::cos(arc * 0.5) - 0.2 * z * z; };
        const double al = 1.3, be = -0.7;
        auto r1 = semicylinder_growth(disk, 2.0, g1, 2.0);
        auto r2 = semicylinder_growth(disk, 2.0, g2, 2.0);
        auto r12 = semicylinder_growth(
            disk, 2.0, [&](double a, double z) { return al * g1(a, z) + be * g2(a, z); }, 2.0);
        CHECK(r12.C == doctest::Approx(al * r1.C + be * r2.C).epsilon(1e-10));
    }
}

TEST_CASE("compatibility integral vanishes") {
    CHECK(std::abs(compatibility_integral(CrossSection::disk(1.0, 1.0, 1.0), 2.0)) < 1e-3);
    CHECK(std::abs(compatibility_integral(square_section(2.0), 3.0)) < 1e-3);
}

TEST_CASE("junction constant: self-consistent truncation") {
    const CrossSection disk = CrossSection::disk(1.0, 1.0, 1.0);
    QTruncation t16;
    t16.layer_radius = 16.0;
    t16.cylinder_height = 16.0;
    t16.mesh_level = 2;
    auto d16 = junction_constant_q(disk, 1.0, t16);
    CHECK(std::isfinite(d16.q));
    CHECK(d16.indicator < 0.05);
    CHECK(d16.delta == doctest::Approx(3.8317059702).epsilon(1e-9));

    QTruncation t32 = t16;
    t32.layer_radius = 32.0;
    t32.cylinder_height = 32.0;
    auto d32 = junction_constant_q(disk, 1.0, t32);
    // doubling the truncation shrinks the self-consistency indicator
    CHECK(d32.indicator < d16.indicator);
    // the two reported values differ by less than the coarse indicator
    CHECK(std::abs(d32.q - d16.q) <= d16.indicator * 1.05);
}

TEST_CASE("junction constant rejects polygons") {
    CHECK_THROWS_AS((void)junction_constant_q(square_section(2.0), 1.0), std::invalid_argument);
}

TEST_CASE("layer field reproduces the imposed asymptotics") {
    const CrossSection disk = CrossSection::disk(1.0, 1.0, 1.0);
    QTruncation t;
    t.layer_radius = 16.0;
    t.cylinder_height = 16.0;
    t.mesh_level = 2;
    auto data = junction_constant_q(disk, 1.0, t);
    // far in the layer: w ~ -(2 pi)^-1 ln rho
    const double w12 = data.field.value(12.0, 0.5);
    CHECK(std::abs(w12 + std::log(12.0) / (2.0 * M_PI)) < 0.02);
    // beyond truncation the continuation takes over smoothly
    CHECK(data.field.value(20.0, 0.5) ==
          doctest::Approx(-std::log(20.0) / (2.0 * M_PI)).epsilon(1e-12));
    // high in the cylinder: w ~ zeta/(gamma |w|) + q
    const double w_high = data.field.value(0.3, 14.0);
    CHECK(std::abs(w_high - (14.0 / M_PI + data.q)) < 0.02);
    CHECK(data.field.value(0.3, 40.0) ==
          doctest::Approx(40.0 / M_PI + data.q).epsilon(1e-12));
}

TEST_CASE("junction constant: pinned regression value for the unit disk") {
    // Richardson self-oracle over the truncation ladder froze this number;
    // the mesh and truncation here are fixed, so drift means a behavior change.
    const CrossSection disk = CrossSection::disk(1.0, 1.0, 1.0);
    QTruncation t;
    t.layer_radius = 32.0;
    t.cylinder_height = 32.0;
    t.mesh_level = 3;
    auto d = junction_constant_q(disk, 1.0, t);
    CHECK(d.q == doctest::Approx(-0.208234).epsilon(5e-3));
}

TEST_CASE("capacity is monotone in the disk radius") {
    double prev = 0.0;
    for (double a : {0.3, 0.7, 1.4}) {
        auto pot = log_potential(CrossSection::disk(a, 1.0, 1.0));
        CHECK(pot.c_log() > prev);
        prev = pot.c_log();
    }
}
