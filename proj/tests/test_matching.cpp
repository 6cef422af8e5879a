#include "junction/matching.hpp"

#include <doctest.h>

#include <cmath>
#include <array>
#include <random>

using namespace junction;

namespace {

// The mushroom configuration: unit-disk plate with the rod at the center.
MatchingInputs mushroom_inputs(double h, double G11) {
    MatchingInputs in;
    in.G = Eigen::MatrixXd::Constant(1, 1, G11);
    in.c_log = Eigen::VectorXd::Constant(1, 1.0);
    in.gamma = Eigen::VectorXd::Constant(1, 1.0);
    in.area = Eigen::VectorXd::Constant(1, M_PI);
    in.l = Eigen::VectorXd::Constant(1, 1.0);
    in.U_hash0 = Eigen::VectorXd::Zero(1);
    in.U_bot_P = Eigen::VectorXd::Zero(1);
    in.f0_total = M_PI;
    in.ln_h = std::log(h);
    return in;
}

MatchingInputs random_inputs(int J, std::mt19937& rng) {
    std::uniform_real_distribution<double> Gd(-0.05, 0.05);
    std::uniform_real_distribution<double> cd(0.7, 1.4);
    std::uniform_real_distribution<double> gwd(5.0, 50.0);
    std::uniform_real_distribution<double> ld(0.5, 2.0);
    std::uniform_real_distribution<double> vd(-1.0, 1.0);
    MatchingInputs in;
    in.G.resize(J, J);
    for (int i = 0; i < J; ++i)
        for (int k = 0; k <= i; ++k) in.G(i, k) = in.G(k, i) = Gd(rng);
    in.c_log.resize(J);
    in.gamma.resize(J);
    in.area.resize(J);
    in.l.resize(J);
    in.U_hash0.resize(J);
    in.U_bot_P.resize(J);
    for (int j = 0; j < J; ++j) {
        in.c_log[j] = cd(rng);
        const double gw = gwd(rng);  // gamma |w| product kept away from zero
        in.area[j] = 1.0 + vd(rng) * 0.3;
        in.gamma[j] = gw / in.area[j];
        in.l[j] = ld(rng);
        in.U_hash0[j] = vd(rng);
        in.U_bot_P[j] = vd(rng);
    }
    in.f0_total = 2.0 * vd(rng);
    in.ln_h = std::log(1e-6);
    return in;
}

}  // namespace

TEST_CASE("scalar M matches the composed closed form") {
    const double G11 = -3.0 / (8.0 * M_PI);
    auto in = mushroom_inputs(0.01, G11);
    const auto M = assemble_M(in);
    // |ln h|/(2 pi) + G11 - (2 pi)^-1 ln c_log + l/(gamma |w|)
    CHECK(M(0, 0) == doctest::Approx(std::log(100.0) / (2.0 * M_PI) + G11 + 1.0 / M_PI)
                         .epsilon(1e-12));
    CHECK(M(0, 0) == doctest::Approx(0.93188).epsilon(1e-4));
}

TEST_CASE("positive-definiteness threshold h0") {
    // a huge gamma |w| removes the stabilizing rod-conductance term, so the
    // negative Green value drives M indefinite above h0 = exp(2 pi G11)
    const double G11 = -3.0 / (8.0 * M_PI);
    auto in = mushroom_inputs(0.6, G11);
    in.gamma = Eigen::VectorXd::Constant(1, 1e9);
    CHECK_THROWS_AS((void)assemble_M(in), NotPositiveDefinite);
    try {
        (void)assemble_M(in);
    } catch (const NotPositiveDefinite& e) {
        CHECK(e.h0 == doctest::Approx(std::exp(-0.75)).epsilon(1e-6));
    }
    in.ln_h = std::log(0.3);  // below the threshold: fine
    CHECK_NOTHROW((void)assemble_M(in));
}

TEST_CASE("diagonal-free M has eigenvalues |ln h|/(2 pi)") {
    MatchingInputs in;
    const int J = 3;
    in.G = Eigen::MatrixXd::Zero(J, J);
    in.c_log = Eigen::VectorXd::Ones(J);
    in.gamma = Eigen::VectorXd::Constant(J, 1e12);  // kills the (gamma |w|)^-1 term
    in.area = Eigen::VectorXd::Ones(J);
    in.l = Eigen::VectorXd::Ones(J);
    in.U_hash0 = in.U_bot_P = Eigen::VectorXd::Zero(J);
    in.ln_h = std::log(0.01);
    const auto M = assemble_M(in);
    for (int j = 0; j < J; ++j)
        CHECK(M(j, j) == doctest::Approx(std::abs(in.ln_h) / (2.0 * M_PI)).epsilon(1e-10));
}

TEST_CASE("mushroom alpha1 closed forms") {
    const double G11 = -3.0 / (8.0 * M_PI);
    auto in = mushroom_inputs(0.01, G11);
    auto c = solve_alpha1(in);
    CHECK(c.A[0] == doctest::Approx(-M_PI).epsilon(1e-12));
    CHECK(c.A0 == doctest::Approx(assemble_M(in)(0, 0) * M_PI).epsilon(1e-12));
    CHECK(c.A0 == doctest::Approx(2.92759).epsilon(1e-4));
    CHECK(c.m == doctest::Approx(1.0 / assemble_M(in)(0, 0)).epsilon(1e-12));
    // expansion coefficients
    CHECK(c.A0_lead == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(c.A_limit[0] == doctest::Approx(-M_PI).epsilon(1e-12));
}

TEST_CASE("homogeneous data give zero coefficients") {
    auto in = mushroom_inputs(0.01, -3.0 / (8.0 * M_PI));
    in.f0_total = 0.0;
    auto c = solve_alpha1(in);
    CHECK(std::abs(c.A0) < 1e-14);
    CHECK(c.A.cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("constraint sum A_j = -<f>, m > 0, on randomized configurations") {
    std::mt19937 rng(20240817);
    for (int trial = 0; trial < 20; ++trial) {
        const int J = std::array<int, 3>{1, 2, 4}[trial % 3];
        auto in = random_inputs(J, rng);
        auto c = solve_alpha1(in);
        CHECK(std::abs(c.A.sum() + in.f0_total) < 1e-10);
        CHECK(c.m > 0.0);
        // m |ln h| -> 2 pi J within 10% at h = 1e-6
        CHECK(c.m * std::abs(in.ln_h) == doctest::Approx(2.0 * M_PI * J).epsilon(0.10));
    }
}

TEST_CASE("alpha1 coefficient bounds along an h sweep") {
    const double G11 = -3.0 / (8.0 * M_PI);
    double prevA0 = 0.0;
    for (double h : {1e-2, 1e-3, 1e-4, 1e-5, 1e-6}) {
        auto in = mushroom_inputs(h, G11);
        auto c = solve_alpha1(in);
        CHECK(std::abs(c.A0) / std::abs(in.ln_h) < 1.0);   // |A0| = O(|ln h|)
        CHECK(std::abs(c.A[0]) < 4.0);                     // |A_j| bounded
        if (prevA0 != 0.0) CHECK(c.A0 > prevA0);           // grows with |ln h|
        prevA0 = c.A0;
    }
}

TEST_CASE("scale equivariance of the whole solve") {
    std::mt19937 rng(7);
    auto in = random_inputs(2, rng);
    auto c1 = solve_alpha1(in);
    const double s = 3.7;
    auto in2 = in;
    in2.f0_total *= s;
    in2.U_hash0 *= s;
    in2.U_bot_P *= s;
    auto c2 = solve_alpha1(in2);
    CHECK(c2.A0 == doctest::Approx(s * c1.A0).epsilon(1e-12));
    CHECK((c2.A - s * c1.A).cwiseAbs().maxCoeff() < 1e-12);
    auto d1 = solve_alpha0(in);
    auto d2 = solve_alpha0(in2);
    CHECK(d2.a0 == doctest::Approx(s * d1.a0).epsilon(1e-12));
}

TEST_CASE("dirichlet-lateral variant") {
    SUBCASE("matched data give zero") {
        auto in = mushroom_inputs(0.01, 0.0);
        in.U_hash0 = in.U_bot_P = Eigen::VectorXd::Constant(1, 0.6);
        auto c = solve_alpha1_dirichlet(in);
        CHECK(std::abs(c.A[0]) < 1e-14);
    }
    SUBCASE("mushroom scalar value at h = 0.01") {
        auto in = mushroom_inputs(0.01, 0.0);  // Dirichlet Green value at the center is 0
        in.U_hash0[0] = 0.0;
        in.U_bot_P[0] = 0.25;
        auto c = solve_alpha1_dirichlet(in);
        const double MD = std::log(100.0) / (2.0 * M_PI) + 1.0 / M_PI;
        CHECK(MD == doctest::Approx(1.05125).epsilon(1e-4));
        CHECK(c.A[0] == doctest::Approx(-0.25 / MD).epsilon(1e-12));
        CHECK(c.A[0] == doctest::Approx(-0.23781).epsilon(1e-4));
    }
    SUBCASE("|A_1| |ln h| stays bounded along the sweep") {
        std::vector<double> scaled;
        for (double h : {1e-4, 1e-5, 1e-6}) {
            auto in = mushroom_inputs(h, 0.0);
            in.U_bot_P[0] = 0.25;
            auto c = solve_alpha1_dirichlet(in);
            scaled.push_back(std::abs(c.A[0]) * std::abs(in.ln_h));
        }
        const double mean = (scaled[0] + scaled[1] + scaled[2]) / 3.0;
        for (double s : scaled) CHECK(std::abs(s - mean) / mean < 0.2);
    }
}

TEST_CASE("alpha0 closed forms") {
    SUBCASE("mushroom a0 = 1") {
        auto in = mushroom_inputs(0.05, -3.0 / (8.0 * M_PI));
        auto c = solve_alpha0(in);
        CHECK(c.a0 == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(!c.A0_known);
        CHECK(c.A[0] == doctest::Approx(-M_PI).epsilon(1e-12));
    }
    SUBCASE("zero source zeroes everything") {
        auto in = mushroom_inputs(0.05, 0.0);
        in.f0_total = 0.0;
        auto c = solve_alpha0(in);
        CHECK(c.a0 == 0.0);
        CHECK(c.A.cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("two dissimilar rods") {
        MatchingInputs in;
        in.G = Eigen::MatrixXd::Zero(2, 2);
        in.c_log = Eigen::VectorXd::Ones(2);
        in.gamma.resize(2);
        in.gamma << 1.0, 2.0;
        in.area = Eigen::VectorXd::Constant(2, M_PI);
        in.l.resize(2);
        in.l << 1.0, 2.0;
        in.U_hash0 = in.U_bot_P = Eigen::VectorXd::Zero(2);
        in.f0_total = 3.0;
        in.ln_h = std::log(0.05);
        auto c = solve_alpha0(in);
        // conductances: pi and pi  =>  a0 = <f>/(2 pi)
        CHECK(c.a0 == doctest::Approx(3.0 / (2.0 * M_PI)).epsilon(1e-12));
        CHECK(c.A[1] == doctest::Approx(-c.a0 * M_PI).epsilon(1e-12));
        CHECK(c.A.sum() == doctest::Approx(-in.f0_total).epsilon(1e-12));
    }
}

TEST_CASE("alpha0 junction constants b and the rod Dirichlet data") {
    auto in = mushroom_inputs(std::exp(-1.0), -3.0 / (8.0 * M_PI));
    auto c = solve_alpha0(in);
    // b_1 = U_bot + A_1 G_11 + a0 gamma |w| ln h / (2 pi l)
    const double expected_b =
        0.0 + c.A[0] * (-3.0 / (8.0 * M_PI)) + c.a0 * M_PI * (-1.0) / (2.0 * M_PI);
    CHECK(c.b[0] == doctest::Approx(expected_b).epsilon(1e-12));
    // rod Dirichlet datum adds the junction constant term a0 gamma |w| q
    Eigen::VectorXd q = Eigen::VectorXd::Constant(1, -0.2);
    const auto data = alpha0_rod_dirichlet_data(in, c, q);
    CHECK(data[0] == doctest::Approx(c.A[0] * (-3.0 / (8.0 * M_PI)) +
                                     c.a0 * M_PI * (-0.2))
                         .epsilon(1e-12));
}
