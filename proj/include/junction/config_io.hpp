#pragma once

#include "junction/cross_section.hpp"
#include "junction/geometry.hpp"
#include "junction/poisson2d.hpp"
#include "junction/reference.hpp"

#include <map>
#include <string>
#include <vector>

namespace junction {

/// Separable sources of the reduced problems: an averaged plate source f0
/// (radial for disk plates) and one averaged axial source per rod.
struct SourceSpec {
    ScalarFn f0;                    // on the plate, as a function of y
    RadialFn f0_radial;             // same, as a function of r (radial configs)
    bool f0_is_radial = true;
    std::vector<RadialFn> fj;       // one per rod, functions of z
};

struct MeshSettings {
    double plate_size = 0.03;
    bool grade = true;
    int axisym_level = 5;
    double far_size = 0.04;
};

struct ExperimentPlan {
    std::string experiment;         // green-symmetry | capacity | match-sweep |
                                    // converge-alpha1 | converge-alpha0 |
                                    // converge-dirichlet | corollary-limits
    JunctionConfig config;
    SourceSpec sources;
    std::vector<double> h_list;
    MeshSettings mesh;
    QTruncation truncation;
    std::map<std::string, double> targets;   // every pass/fail threshold
    std::string out_dir = ".";
    std::uint64_t config_hash = 0;
};

/// Parse the documented JSON schema; throws std::runtime_error with the
/// offending key on malformed input.
ExperimentPlan load_plan(const std::string& path);
ExperimentPlan parse_plan(const std::string& json_text);

}  // namespace junction
