#include "junction/config_io.hpp"

#include "junction/numeric.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace junction {

namespace {

using nlohmann::json;

Eigen::MatrixX2d parse_points(const json& j, const char* what) {
    if (!j.is_array()) throw std::runtime_error(std::string("config: ") + what + " must be an array");
    Eigen::MatrixX2d m(j.size(), 2);
    for (size_t i = 0; i < j.size(); ++i) {
        m(static_cast<Eigen::Index>(i), 0) = j[i].at(0).get<double>();
        m(static_cast<Eigen::Index>(i), 1) = j[i].at(1).get<double>();
    }
    return m;
}

RadialFn parse_line_source(const json& j, const char* what) {
    const std::string type = j.value("type", "constant");
    if (type == "constant") {
        const double v = j.value("value", 0.0);
        return [v](double) { return v; };
    }
    if (type == "poly") {
        // c0 + c1 t + c2 t^2 + ...
        std::vector<double> c = j.at("coeffs").get<std::vector<double>>();
        return [c](double t) {
            double acc = 0.0;
            for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * t + *it;
            return acc;
        };
    }
    throw std::runtime_error(std::string("config: unknown source type for ") + what);
}

}  // namespace

ExperimentPlan parse_plan(const std::string& text) {
    const json j = json::parse(text);
    ExperimentPlan plan;
    plan.config_hash = fnv1a(text);
    plan.experiment = j.value("experiment", "");
    plan.out_dir = j.value("out", ".");

    const json& jp = j.at("plate");
    const std::string pkind = jp.value("kind", "disk");
    Eigen::MatrixX2d anchors = parse_points(jp.at("anchors"), "plate.anchors");
    if (pkind == "disk") {
        plan.config.plate = PlateDomain::disk(jp.at("radius").get<double>(), anchors);
    } else if (pkind == "polygon") {
        plan.config.plate =
            PlateDomain::polygon(parse_points(jp.at("vertices"), "plate.vertices"), anchors);
    } else {
        throw std::runtime_error("config: plate.kind must be disk or polygon");
    }
    plan.config.plate.cutoff_radius = jp.value("cutoff_radius", 0.0);
    const std::string bc = jp.value("lateral_bc", "neumann");
    if (bc == "neumann") {
        plan.config.plate.lateral_bc = LateralBc::neumann;
    } else if (bc == "dirichlet") {
        plan.config.plate.lateral_bc = LateralBc::dirichlet;
    } else {
        throw std::runtime_error("config: plate.lateral_bc must be neumann or dirichlet");
    }

    for (const json& jr : j.at("rods")) {
        const std::string kind = jr.value("kind", "disk");
        const double gamma = jr.at("gamma").get<double>();
        const double length = jr.at("length").get<double>();
        if (kind == "disk") {
            plan.config.rods.push_back(
                CrossSection::disk(jr.at("radius").get<double>(), gamma, length));
        } else if (kind == "polygon") {
            plan.config.rods.push_back(CrossSection::polygon(
                parse_points(jr.at("vertices"), "rod.vertices"), gamma, length));
        } else {
            throw std::runtime_error("config: rod.kind must be disk or polygon");
        }
    }

    plan.config.alpha = j.value("alpha", 1);
    plan.config.h = j.value("h", 0.0);
    plan.config.h0 = j.value("h0", 0.0);
    if (j.contains("h_sweep")) plan.h_list = j.at("h_sweep").get<std::vector<double>>();
    if (plan.config.h == 0.0 && !plan.h_list.empty()) plan.config.h = plan.h_list.front();
    for (size_t i = 0; i + 1 < plan.h_list.size(); ++i)
        if (plan.h_list[i + 1] >= plan.h_list[i])
            throw std::runtime_error("config: h_sweep must be strictly decreasing");

    if (j.contains("sources")) {
        const json& js = j.at("sources");
        if (js.contains("f0")) {
            plan.sources.f0_radial = parse_line_source(js.at("f0"), "f0");
        } else {
            plan.sources.f0_radial = [](double) { return 0.0; };
        }
        auto fr = plan.sources.f0_radial;
        plan.sources.f0 = [fr](const Vec2& y) { return fr(y.norm()); };
        if (js.contains("fj")) {
            for (const json& jf : js.at("fj"))
                plan.sources.fj.push_back(parse_line_source(jf, "fj"));
        }
    } else {
        plan.sources.f0_radial = [](double) { return 0.0; };
        plan.sources.f0 = [](const Vec2&) { return 0.0; };
    }
    while (plan.sources.fj.size() < plan.config.rods.size())
        plan.sources.fj.push_back([](double) { return 0.0; });

    if (j.contains("mesh")) {
        const json& jm = j.at("mesh");
        plan.mesh.plate_size = jm.value("plate_size", plan.mesh.plate_size);
        plan.mesh.grade = jm.value("grade", plan.mesh.grade);
        plan.mesh.axisym_level = jm.value("axisym_level", plan.mesh.axisym_level);
        plan.mesh.far_size = jm.value("far_size", plan.mesh.far_size);
    }
    if (j.contains("truncation")) {
        const json& jt = j.at("truncation");
        plan.truncation.layer_radius = jt.value("layer_radius", plan.truncation.layer_radius);
        plan.truncation.cylinder_height =
            jt.value("cylinder_height", plan.truncation.cylinder_height);
        plan.truncation.mesh_level = jt.value("mesh_level", plan.truncation.mesh_level);
    }
    if (j.contains("targets"))
        for (auto& [key, val] : j.at("targets").items())
            plan.targets[key] = val.get<double>();
    return plan;
}

ExperimentPlan load_plan(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("config: cannot open " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_plan(ss.str());
}

}  // namespace junction
