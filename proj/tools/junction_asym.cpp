// Command-line front end: asymptotic approximations of the Poisson problem on
// a thin plate/rod junction, the meridian reference solver, and the named
// verification experiments.

#include "junction/experiments.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

using namespace junction;

namespace {

int report(const ExperimentResult& res) {
    for (const std::string& line : res.lines) std::cout << "[" << res.experiment << "] " << line << "\n";
    for (const std::string& a : res.artifacts) std::cout << "[" << res.experiment << "] wrote " << a << "\n";
    std::cout << "[" << res.experiment << "] " << (res.pass ? "PASS" : "FAIL") << "\n";
    return res.pass ? 0 : 1;
}

ExperimentPlan plan_for(const std::string& config_path, const std::string& out_dir,
                        const std::string& experiment = "") {
    ExperimentPlan plan = load_plan(config_path);
    if (!out_dir.empty()) plan.out_dir = out_dir;
    if (!experiment.empty()) plan.experiment = experiment;
    return plan;
}

int run_green(const std::string& config_path, const std::string& out_dir) {
    ExperimentPlan plan = plan_for(config_path, out_dir, "green-symmetry");
    Pipeline p = build_pipeline(plan);
    std::filesystem::create_directories(plan.out_dir);
    {
        std::ofstream os(plan.out_dir + "/green_matrix.csv");
        write_provenance(os, plan);
        write_green_csv(os, p.green);
    }
    for (int j = 0; j < p.green.count(); ++j) {
        std::ofstream os(plan.out_dir + "/green_regular_" + std::to_string(j + 1) + ".csv");
        write_provenance(os, plan);
        write_field_csv(os, p.green.regular_parts[j]);
    }
    write_mesh_file(plan.out_dir + "/plate_mesh.txt", *p.plate_mesh);
    std::cout << "green: wrote matrix, regular parts and mesh to " << plan.out_dir << "\n";
    std::cout << "G matrix:\n" << p.green.Gmatrix << "\n";
    return 0;
}

int run_reference_cmd(double h, int alpha, double gamma, double a, double l, double R_plate,
                      int mesh_level, bool lateral_dirichlet, const std::string& out_dir) {
    ReferenceCase rc;
    rc.h = h;
    rc.alpha = alpha;
    rc.gamma = gamma;
    rc.a = a;
    rc.l = l;
    rc.R_plate = R_plate;
    rc.lateral = lateral_dirichlet ? LateralBc::dirichlet : LateralBc::neumann;
    rc.f0 = [](double) { return 1.0; };
    rc.f1 = [](double) { return 0.0; };
    AxisymMeshControls mc;
    mc.level = mesh_level;
    auto sol = solve_reference(rc, mc);
    std::filesystem::create_directories(out_dir);
    std::ofstream os(out_dir + "/reference.csv");
    write_reference_csv(os, sol);
    auto parts = restrict_to_parts(sol);
    std::cout << "reference: energy=" << format_double(sol.energy) << " dofs=" << sol.dofs
              << " seconds=" << format_double(sol.seconds)
              << " plate_energy=" << format_double(parts.plate_energy)
              << " rod_energy=" << format_double(parts.rod_energy) << "\n";
    std::cout << "reference: wrote " << out_dir << "/reference.csv\n";
    return 0;
}

AsymptoticSolution build_composite(const ExperimentPlan& plan) {
    if (!radial_path_available(plan))
        throw std::runtime_error(
            "asym/errors: the sampling front end supports the radial configuration (disk "
            "plate, one centered disk rod)");
    ExperimentPlan p = plan;
    if (p.config.h <= 0.0) throw std::runtime_error("asym: config needs h");
    RadialPlateOracle oracle = radial_plate_oracle(p.config.plate.radius, p.sources.f0_radial,
                                                   p.config.plate.lateral_bc);
    const CrossSection& s = p.config.rods[0];
    std::vector<LogPotential> pots{log_potential(s)};
    std::vector<RodProfile> hash{solve_hash(s.length, s.gamma, s.area(), p.sources.fj[0])};
    MatchingInputs in;
    in.G = Eigen::MatrixXd::Constant(1, 1, oracle.G11);
    in.c_log = Eigen::VectorXd::Constant(1, pots[0].c_log());
    in.gamma = Eigen::VectorXd::Constant(1, s.gamma);
    in.area = Eigen::VectorXd::Constant(1, s.area());
    in.l = Eigen::VectorXd::Constant(1, s.length);
    in.U_hash0 = Eigen::VectorXd::Constant(1, hash[0].value(0.0));
    in.U_bot_P = Eigen::VectorXd::Constant(1, oracle.particular_at_center);
    in.f0_total =
        2.0 * M_PI * gauss_integrate([&](double r) { return p.sources.f0_radial(r) * r; }, 0.0,
                                     p.config.plate.radius, 32);
    in.ln_h = std::log(p.config.h);
    if (p.config.alpha == 1) {
        if (p.config.plate.lateral_bc == LateralBc::dirichlet) {
            auto c = solve_alpha1_dirichlet(in);
            return build_dirichlet_alpha1(p.config, c, {oracle.green}, oracle.particular, hash,
                                          pots);
        }
        auto c = solve_alpha1(in);
        return build_alpha1(p.config, c, {oracle.green}, oracle.particular, hash, pots);
    }
    if (p.config.plate.lateral_bc == LateralBc::dirichlet) {
        std::vector<RodProfile> rods{solve_dirichlet_ends(s.length, s.gamma, s.area(),
                                                          p.sources.fj[0],
                                                          oracle.particular_at_center)};
        return build_dirichlet_alpha0(p.config, oracle.particular, rods);
    }
    auto c = solve_alpha0(in);
    QTruncation qt = plan.truncation;
    auto layer = junction_constant_q(s, s.gamma, qt);
    return build_alpha0(p.config, c, {layer.field});
}

int run_asym(const std::string& config_path, const std::string& out_dir) {
    ExperimentPlan plan = plan_for(config_path, out_dir);
    auto asym = build_composite(plan);
    std::filesystem::create_directories(plan.out_dir);
    std::ofstream os(plan.out_dir + "/asym_samples.csv");
    write_provenance(os, plan);
    os << "x,y,z,value,part\n";
    const double R = plan.config.plate.radius;
    const double h = plan.config.h;
    const int n = 41;
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            const Vec2 y(-R + 2.0 * R * i / (n - 1), -R + 2.0 * R * k / (n - 1));
            if (y.norm() >= R) continue;
            os << format_double(y.x()) << ',' << format_double(y.y()) << ','
               << format_double(h / 2) << ',' << format_double(asym.plate_value(y, h / 2))
               << ",plate\n";
        }
    const double l = plan.config.rods[0].length;
    for (int i = 0; i <= 80; ++i) {
        const double z = l * i / 80.0;
        os << "0,0," << format_double(z) << ','
           << format_double(asym.rod_value[0]({0.0, 0.0}, z)) << ",rod_1\n";
    }
    std::cout << "asym: wrote " << plan.out_dir << "/asym_samples.csv\n";
    return 0;
}

int run_errors(const std::string& config_path, const std::string& out_dir) {
    ExperimentPlan plan = plan_for(config_path, out_dir);
    auto asym = build_composite(plan);
    AxisymMeshControls mc;
    mc.level = plan.mesh.axisym_level;
    mc.far_size = plan.mesh.far_size;
    ReferenceCase rc;
    rc.h = plan.config.h;
    rc.alpha = plan.config.alpha;
    rc.gamma = plan.config.rods[0].gamma;
    rc.a = plan.config.rods[0].radius;
    rc.l = plan.config.rods[0].length;
    rc.R_plate = plan.config.plate.radius;
    rc.lateral = plan.config.plate.lateral_bc;
    rc.f0 = plan.sources.f0_radial;
    rc.f1 = plan.sources.fj[0];
    auto sol = solve_reference(rc, mc);
    auto rep = error_norms(asym, sol);
    std::filesystem::create_directories(plan.out_dir);
    std::ofstream os(plan.out_dir + "/errors.csv");
    write_provenance(os, plan);
    write_error_csv_header(os);
    write_error_csv_row(os, rep);
    std::cout << "errors: h=" << format_double(rep.h)
              << " plate_combined=" << format_double(rep.plate_combined)
              << " rod_h1_scaled=" << format_double(rep.rod_h1_scaled) << "\n";
    std::cout << "errors: wrote " << plan.out_dir << "/errors.csv\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Matched-asymptotic toolkit for thin plate/rod junction Poisson problems"};
    app.require_subcommand(1);

    std::string config_path, out_dir, experiment;

    auto add_common = [&](CLI::App* sub, bool need_config = true) {
        if (need_config)
            sub->add_option("--config", config_path, "JSON configuration file")->required();
        sub->add_option("--out", out_dir, "output directory");
    };

    auto* green = app.add_subcommand("green", "Green functions and matrix of the plate");
    add_common(green);
    auto* capacity = app.add_subcommand("capacity", "section capacities, flux checks, junction constants");
    add_common(capacity);
    auto* match = app.add_subcommand("match", "matching coefficients over h");
    add_common(match);
    auto* asym = app.add_subcommand("asym", "sample the composite approximation");
    add_common(asym);
    auto* errors = app.add_subcommand("errors", "error norms against the reference solve");
    add_common(errors);
    auto* converge = app.add_subcommand("converge", "run the experiment named in the config");
    add_common(converge);
    converge->add_option("--experiment", experiment, "override the experiment name");
    auto* all = app.add_subcommand("all", "green + capacity + match + converge");
    add_common(all);

    auto* reference = app.add_subcommand("reference", "meridian reference solve");
    reference->set_help_flag("--help", "print help");  // frees -h for the thickness flag
    double h = 0.05, gamma = 1.0, a = 1.0, l = 1.0, R_plate = 1.0;
    int alpha = 1, mesh_level = 4;
    bool lateral_dirichlet = false;
    reference->add_option("--h,-h", h, "plate thickness")->required();
    reference->add_option("--alpha", alpha, "contrast exponent (0 or 1)");
    reference->add_option("--gamma", gamma, "rod coefficient");
    reference->add_option("--a", a, "rod section radius (stretched)");
    reference->add_option("--l", l, "rod length");
    reference->add_option("--R-plate", R_plate, "plate radius");
    reference->add_option("--mesh-level", mesh_level, "mesh refinement level");
    reference->add_flag("--lateral-dirichlet", lateral_dirichlet, "pin the plate edge");
    reference->add_option("--out", out_dir, "output directory");

    CLI11_PARSE(app, argc, argv);
    if (out_dir.empty()) out_dir = ".";

    try {
        if (green->parsed()) return run_green(config_path, out_dir);
        if (capacity->parsed()) return report(run(plan_for(config_path, out_dir, "capacity")));
        if (match->parsed()) return report(run(plan_for(config_path, out_dir, "match-sweep")));
        if (asym->parsed()) return run_asym(config_path, out_dir);
        if (errors->parsed()) return run_errors(config_path, out_dir);
        if (converge->parsed()) return report(run(plan_for(config_path, out_dir, experiment)));
        if (reference->parsed())
            return run_reference_cmd(h, alpha, gamma, a, l, R_plate, mesh_level,
                                     lateral_dirichlet, out_dir);
        if (all->parsed()) {
            int rc = run_green(config_path, out_dir);
            rc |= report(run(plan_for(config_path, out_dir, "capacity")));
            rc |= report(run(plan_for(config_path, out_dir, "match-sweep")));
            ExperimentPlan plan = plan_for(config_path, out_dir);
            if (!plan.experiment.empty()) rc |= report(run(plan));
            return rc;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
