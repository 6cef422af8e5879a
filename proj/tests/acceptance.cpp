// Acceptance suite: one verdict line per criterion, exercised end to end at
// desk scale. Run via ctest or directly; the binary fails if any criterion
// fails.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "junction/experiments.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <random>

using namespace junction;

namespace {

void verdict(int criterion, bool ok, const std::string& what) {
    std::printf("[criterion %2d] %s - %s\n", criterion, ok ? "PASS" : "FAIL", what.c_str());
    std::fflush(stdout);
    CHECK_MESSAGE(ok, "criterion ", criterion, ": ", what);
}

ExperimentPlan base_plan(double rod_radius, double gamma, int alpha, LateralBc bc) {
    ExperimentPlan plan;
    Eigen::MatrixX2d anchors(1, 2);
    anchors << 0.0, 0.0;
    plan.config.plate = PlateDomain::disk(1.0, anchors, bc);
    plan.config.rods = {CrossSection::disk(rod_radius, gamma, 1.0)};
    plan.config.alpha = alpha;
    plan.h_list = {0.05, 0.025, 0.0125};
    plan.config.h = 0.05;
    plan.sources.f0_radial = [](double) { return 1.0; };
    plan.sources.f0 = [](const Vec2&) { return 1.0; };
    plan.sources.f0_is_radial = true;
    plan.sources.fj = {[](double) { return 0.0; }};
    plan.out_dir = "acceptance_artifacts";
    return plan;
}

MatchingInputs random_inputs(int J, std::mt19937& rng) {
    std::uniform_real_distribution<double> Gd(-0.03, 0.03);
    std::uniform_real_distribution<double> cd(0.7, 1.4);
    std::uniform_real_distribution<double> gwd(12.0, 60.0);
    std::uniform_real_distribution<double> ld(0.6, 1.2);
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
        const double gw = gwd(rng);
        in.area[j] = 1.0 + 0.3 * vd(rng);
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

TEST_CASE("criterion 1: Green-matrix symmetry with two anchors") {
    Eigen::MatrixX2d anchors(2, 2);
    anchors << -0.4, 0.0, 0.4, 0.0;
    const PlateDomain plate = PlateDomain::disk(1.0, anchors);
    std::vector<double> defects;
    for (double size : {0.06, 0.03}) {
        auto mesh = std::make_shared<TriMesh>(mesh_plate(plate, size, true));
        auto green = green_functions(mesh, anchors, GreenBc::neumann_mean_zero,
                                     plate.default_cutoff_radius());
        defects.push_back(std::abs(green.Gmatrix(0, 1) - green.Gmatrix(1, 0)));
    }
    verdict(1, defects[1] < 1e-3 && defects[1] < defects[0],
            "|G12 - G21| = " + format_double(defects[1]) +
                " < 1e-3 at size 0.03, decreasing from " + format_double(defects[0]));
}

TEST_CASE("criterion 2: Green diagonal against the radial oracle") {
    Eigen::MatrixX2d anchors(1, 2);
    anchors << 0.0, 0.0;
    auto mesh =
        std::make_shared<TriMesh>(mesh_plate(PlateDomain::disk(1.0, anchors), 0.03, true));
    auto green = green_functions(mesh, anchors, GreenBc::neumann_mean_zero, 0.5);
    const double err = std::abs(green.Gmatrix(0, 0) - (-3.0 / (8.0 * M_PI)));
    verdict(2, err < 2e-3, "G11 = " + format_double(green.Gmatrix(0, 0)) +
                               " within 2e-3 of -3/(8 pi) (err " + format_double(err) + ")");
}

TEST_CASE("criterion 3: logarithmic capacity and the flux identity") {
    bool ok = true;
    std::string msg;
    for (double a : {1.0, 0.3, 2.0}) {
        auto pot = log_potential(CrossSection::disk(a, 1.0, 1.0));
        ok = ok && pot.c_log() == a;
        ok = ok && std::abs(flux_identity_check(pot) - 1.0) < 1e-3;
    }
    Eigen::MatrixX2d sq(4, 2);
    sq << -1, -1, 1, -1, 1, 1, -1, 1;
    auto square = log_potential(CrossSection::polygon(sq, 1.0, 1.0));
    const double oracle = 2.0 * 0.5901702995080481;  // side * Gamma(1/4)^2/(4 pi^(3/2))
    ok = ok && std::abs(square.c_log() - oracle) / oracle < 0.01;
    ok = ok && std::abs(flux_identity_check(square) - 1.0) < 1e-3;
    Eigen::MatrixX2d tri(3, 2);
    tri << -0.8, -0.5, 1.1, -0.4, -0.2, 0.9;
    auto triangle = log_potential(CrossSection::polygon(tri, 1.0, 1.0));
    ok = ok && std::abs(flux_identity_check(triangle) - 1.0) < 1e-3;
    verdict(3, ok, "disk c_log exact, square c_log = " + format_double(square.c_log()) +
                       " within 1% of " + format_double(oracle) + ", all fluxes = 1 +- 1e-3");
}

TEST_CASE("criterion 4: matching constraint on randomized configurations") {
    std::mt19937 rng(20240817);
    bool constraint_ok = true, m_ok = true, limit_ok = true;
    double worst_limit = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const int J = std::array<int, 3>{1, 2, 4}[trial % 3];
        auto in = random_inputs(J, rng);
        auto c = solve_alpha1(in);
        constraint_ok = constraint_ok && std::abs(c.A.sum() + in.f0_total) < 1e-10;
        m_ok = m_ok && c.m > 0.0;
        const double rel = std::abs(c.m * std::abs(in.ln_h) - 2.0 * M_PI * J) / (2.0 * M_PI * J);
        worst_limit = std::max(worst_limit, rel);
        limit_ok = limit_ok && rel < 0.10;
    }
    verdict(4, constraint_ok && m_ok && limit_ok,
            "sum A_j = -<f0> to 1e-10, m > 0, m|ln h| within 10% of 2 pi J at h = 1e-6 "
            "(worst " +
                format_double(worst_limit) + ") on 20 random configs");
}

TEST_CASE("criterion 5: J = 1 closed forms") {
    // scalar identities through the FE pipeline
    Eigen::MatrixX2d anchors(1, 2);
    anchors << 0.0, 0.0;
    auto mesh = std::make_shared<TriMesh>(mesh_disk_structured(1.0, 40, 2.0));
    auto green = green_functions(mesh, anchors, GreenBc::neumann_mean_zero, 0.5);
    auto f0 = [](const Vec2&) { return 1.0; };
    auto u_perp = solve_neumann_mean_zero(mesh, f0);

    MatchingInputs in;
    in.G = green.Gmatrix;
    in.c_log = Eigen::VectorXd::Constant(1, 1.0);
    in.gamma = Eigen::VectorXd::Constant(1, 1.0);
    in.area = Eigen::VectorXd::Constant(1, M_PI);
    in.l = Eigen::VectorXd::Constant(1, 1.0);
    in.U_hash0 = Eigen::VectorXd::Zero(1);
    in.U_bot_P = Eigen::VectorXd::Constant(1, evaluate(u_perp, {0.0, 0.0}));
    in.f0_total = integrate(*mesh, f0, true);
    in.ln_h = std::log(0.01);
    auto c = solve_alpha1(in);

    const bool a1_ok = std::abs(c.A[0] + in.f0_total) < 1e-10;
    // A0 = M <f0> + U_hash(0) - U_perp(P) for J = 1
    const double scalar_A0 =
        assemble_M(in)(0, 0) * in.f0_total + in.U_hash0[0] - in.U_bot_P[0];
    const bool a0_ok = std::abs(c.A0 - scalar_A0) < 1e-10;
    const auto anchor_val = plate_anchor_value(u_perp, green, 0, f0);
    const bool quad_ok = std::abs(anchor_val.by_green_quadrature) < 1e-4;
    verdict(5, a1_ok && a0_ok && quad_ok,
            "A1 = -<f0> to 1e-10, A0 matches the scalar formula, |int G1 f0| = " +
                format_double(std::abs(anchor_val.by_green_quadrature)) + " < 1e-4");
}

TEST_CASE("criterion 6: high-contrast convergence (rod and plate rates)") {
    ExperimentPlan plan = base_plan(0.4, 20.0, 1, LateralBc::neumann);
    plan.experiment = "converge-alpha1";
    plan.mesh.axisym_level = 6;
    plan.targets = {{"rod_slope_min", 0.8}, {"plate_slope_min", 0.75}};
    auto res = run(plan);
    verdict(6, res.pass, res.lines.empty() ? "converge-alpha1" : res.lines.front());
}

TEST_CASE("criterion 7: high-contrast corollary limits") {
    ExperimentPlan plan = base_plan(0.4, 20.0, 1, LateralBc::neumann);
    plan.experiment = "corollary-limits";
    plan.mesh.axisym_level = 5;
    plan.targets = {{"plate_gap_max", 0.2}};
    auto res = run(plan);
    verdict(7, res.pass, res.lines.empty() ? "corollary-limits" : res.lines.front());
}

TEST_CASE("criterion 8: low-contrast convergence") {
    ExperimentPlan plan = base_plan(1.0, 1.0, 0, LateralBc::neumann);
    plan.experiment = "converge-alpha0";
    plan.mesh.axisym_level = 6;
    plan.truncation.layer_radius = 16.0;
    plan.truncation.cylinder_height = 16.0;
    plan.truncation.mesh_level = 3;
    plan.targets = {{"rod_slope_min", 0.75}, {"m4_rate_min", 0.35}};
    auto res = run(plan);
    std::string note;
    for (const auto& l : res.lines)
        if (l.find("rod slope") != std::string::npos) note = l;
    verdict(8, res.pass, note.empty() ? "converge-alpha0" : note);
}

TEST_CASE("criterion 9: lateral-Dirichlet variants") {
    ExperimentPlan plan0 = base_plan(1.0, 1.0, 0, LateralBc::dirichlet);
    plan0.experiment = "converge-dirichlet";
    plan0.mesh.axisym_level = 6;
    plan0.targets = {{"slope_min", 1.25}};
    auto res0 = run(plan0);

    ExperimentPlan plan1 = base_plan(1.0, 1.0, 1, LateralBc::dirichlet);
    plan1.experiment = "converge-dirichlet";
    plan1.h_list = {1e-4, 1e-5, 1e-6};
    plan1.targets = {{"drift_max", 0.2}};
    auto res1 = run(plan1);

    verdict(9, res0.pass && res1.pass,
            (res0.lines.empty() ? std::string("alpha0") : res0.lines.front()) + "; " +
                (res1.lines.empty() ? std::string("alpha1") : res1.lines.front()));
}

TEST_CASE("criterion 10: compatibility of the junction-problem data") {
    const CrossSection disk = CrossSection::disk(1.0, 1.0, 1.0);
    const double v1 = compatibility_integral(disk, disk.layer_radius());
    Eigen::MatrixX2d sq(4, 2);
    sq << -1, -1, 1, -1, 1, 1, -1, 1;
    const CrossSection square = CrossSection::polygon(sq, 1.0, 1.0);
    const double v2 = compatibility_integral(square, square.layer_radius());
    verdict(10, std::abs(v1) < 1e-3 && std::abs(v2) < 1e-3,
            "commutator integrals sum to " + format_double(v1) + " (disk), " +
                format_double(v2) + " (square); both within 1e-3 of 0");
}

TEST_CASE("criterion 11: FEM self-checks") {
    // planar MMS: unit disk, f = 1 against (1 - r^2)/4
    Eigen::MatrixX2d anchors(1, 2);
    anchors << 0.0, 0.0;
    std::vector<std::pair<double, double>> l2s;
    for (double size : {0.16, 0.08, 0.04}) {
        auto mesh =
            std::make_shared<TriMesh>(mesh_plate(PlateDomain::disk(1.0, anchors), size, false));
        auto u = solve_dirichlet(mesh, [](const Vec2&) { return 1.0; });
        FieldSampler s(u);
        const double e2 = integrate(
            *mesh,
            [&](const Vec2& p) {
                return std::pow(s.value(p) - (1.0 - p.squaredNorm()) / 4.0, 2);
            },
            true);
        l2s.emplace_back(size, std::sqrt(e2));
    }
    const double disk_order = fit_rate(l2s).slope;

    // meridian MMS: u = ln r on an annulus
    std::vector<std::pair<double, double>> axi;
    for (int n : {8, 16, 32}) {
        auto am = axisym_rect_mesh(1.0, 2.0, 0.0, 1.0, n, n);
        AxisymBc bc;
        bc.dirichlet[AxisymFace::inner_wall] = [](double, double) { return 0.0; };
        bc.dirichlet[AxisymFace::outer] = [](double, double) { return std::log(2.0); };
        auto u = axisym_solve(am, [](double, double) { return 1.0; },
                              [](double, double) { return 0.0; }, bc);
        FieldSampler s(u);
        const double e2 = axisym_integrate(am, [&](double r, double z) {
            return std::pow(s.value({r, z}) - std::log(r), 2);
        });
        axi.emplace_back(1.0 / n, std::sqrt(e2));
    }
    const double axi_order = fit_rate(axi).slope;

    // zero data gives zero everywhere
    auto mesh0 =
        std::make_shared<TriMesh>(mesh_plate(PlateDomain::disk(1.0, anchors), 0.15, false));
    auto uz1 = solve_dirichlet(mesh0, [](const Vec2&) { return 0.0; });
    auto uz2 = solve_neumann_mean_zero(mesh0, [](const Vec2&) { return 0.0; });
    ReferenceCase rc;
    rc.h = 0.05;
    rc.alpha = 1;
    rc.gamma = 1.0;
    rc.a = 0.5;
    rc.l = 1.0;
    rc.R_plate = 1.0;
    rc.f0 = [](double) { return 0.0; };
    rc.f1 = [](double) { return 0.0; };
    AxisymMeshControls mc;
    mc.level = 2;
    auto uz3 = solve_reference(rc, mc);
    const double zmax = std::max({uz1.values.cwiseAbs().maxCoeff(),
                                  uz2.values.cwiseAbs().maxCoeff(),
                                  uz3.u.values.cwiseAbs().maxCoeff()});

    const bool ok = std::abs(disk_order - 2.0) < 0.25 && std::abs(axi_order - 2.0) < 0.25 &&
                    zmax < 1e-12;
    verdict(11, ok, "disk MMS L2 order " + format_double(disk_order) + ", meridian MMS order " +
                        format_double(axi_order) + ", zero data max " + format_double(zmax));
}
