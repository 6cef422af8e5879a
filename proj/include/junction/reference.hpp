#pragma once

#include "junction/axisym.hpp"
#include "junction/geometry.hpp"

#include <functional>
#include <memory>

namespace junction {

using RadialFn = std::function<double(double)>;

/// One axisymmetric junction case: circular plate of radius R_plate and
/// thickness h with a single centered disk rod (section radius a before
/// scaling, length l), coefficient gamma h^-alpha in the rod.
struct ReferenceCase {
    double h = 0.05;
    int alpha = 1;
    double gamma = 1.0;
    double a = 1.0;         // rod section radius in stretched coordinates
    double l = 1.0;
    double R_plate = 1.0;
    LateralBc lateral = LateralBc::neumann;
    RadialFn f0;            // averaged plate source, radial: f0(r)
    RadialFn f1;            // averaged rod source, axial: f1(z)
};

struct ReferenceSolution {
    AxisymMesh mesh;
    FeField u;
    ReferenceCase config;
    double energy = 0.0;
    int dofs = 0;
    double seconds = 0.0;
};

/// Full FE solve of the junction problem in meridian coordinates. The single
/// weak form over the union carries the transmission conditions implicitly;
/// only the rod top (and optionally the lateral edge) is pinned.
ReferenceSolution solve_reference(const ReferenceCase& rc, const AxisymMeshControls& controls);

/// Restrictions of the solution to the perforated plate (r > a h) and to the
/// rod (r < a h, including the socket), plus the split of the energy.
struct ReferenceParts {
    double plate_energy = 0.0;      // Dirichlet energy of the plate part
    double rod_energy = 0.0;        // unweighted Dirichlet energy of the rod part
    double total_bilinear = 0.0;    // plate + gamma h^-alpha rod
};

ReferenceParts restrict_to_parts(const ReferenceSolution& sol);

/// Average of u over the plate region (volume-weighted), a corollary metric.
double plate_average(const ReferenceSolution& sol);

/// Cross-section averages of u along the rod at the given z stations.
Eigen::VectorXd rod_profile_average(const ReferenceSolution& sol, const Eigen::VectorXd& z);

void write_reference_csv(std::ostream& os, const ReferenceSolution& sol);

}  // namespace junction
