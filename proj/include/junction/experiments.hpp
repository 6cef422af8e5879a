#pragma once

#include "junction/composite.hpp"
#include "junction/config_io.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace junction {

/// Matched pair of radial closed forms for a disk plate with one centered
/// anchor: the mean-zero Neumann (or Dirichlet) Green function and the
/// particular solution driven by a radial source. Keeps the convergence
/// experiments free of FE-surrogate gradients.
struct RadialPlateOracle {
    ScalarField2d green;
    ScalarField2d particular;   // U_perp (Neumann) or U_hash (Dirichlet)
    double G11 = 0.0;
    double particular_at_center = 0.0;
};

RadialPlateOracle radial_plate_oracle(double R_plate, const RadialFn& f0, LateralBc bc);

/// True when the plan admits the radial closed forms (disk plate, single
/// centered rod, radial sources).
bool radial_path_available(const ExperimentPlan& plan);

/// FE ingredients shared by the experiments: plate mesh, Green data,
/// particular plate solution, matching inputs, rod profiles, potentials.
struct Pipeline {
    std::shared_ptr<TriMesh> plate_mesh;
    GreenData green;
    FeField plate_particular;       // U_perp or the Dirichlet plate solution
    MatchingInputs inputs;          // ln_h unset (filled per h)
    std::vector<RodProfile> hash_profiles;
    std::vector<LogPotential> potentials;
};

Pipeline build_pipeline(const ExperimentPlan& plan);

/// One experiment outcome: named checks with pass/fail plus artifact files.
struct ExperimentResult {
    std::string experiment;
    bool pass = true;
    std::vector<std::string> lines;           // one line per reported check
    std::vector<std::string> artifacts;       // files written under out_dir

    void note(const std::string& line) { lines.push_back(line); }
    void check(const std::string& what, bool ok);
};

ExperimentResult run(const ExperimentPlan& plan);

/// Rows of error reports over an h sweep plus fitted slopes per column.
struct ConvergenceReport {
    std::vector<ErrorReport> rows;
    std::map<std::string, RateFit> slopes;
};

void write_provenance(std::ostream& os, const ExperimentPlan& plan);

}  // namespace junction
