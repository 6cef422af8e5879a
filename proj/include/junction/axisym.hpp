#pragma once

#include "junction/mesh2d.hpp"
#include "junction/poisson2d.hpp"

#include <Eigen/Dense>

#include <functional>
#include <map>
#include <memory>

namespace junction {

/// Faces of the L-shaped meridian domain
///   (0,0)-(r_out,0)-(r_out,z_mid)-(r_in,z_mid)-(r_in,z_top)-(0,z_top)
/// i.e. a wide low block (plate/layer) with a tall narrow block (rod/cylinder)
/// on the axis, re-entrant corner at (r_in, z_mid).
enum class AxisymFace { bottom, outer, mid_top, inner_wall, top, axis };

struct AxisymMesh {
    std::shared_ptr<TriMesh> tri;              // nodes store (r, z)
    std::vector<AxisymFace> face;              // parallel to tri->boundary
    double r_in = 0.0, r_out = 1.0, z_mid = 0.0, z_top = 1.0;

    bool in_rod(double r, double z) const { return r <= r_in + 1e-14 && z >= 0.0; }
};

struct AxisymMeshControls {
    int level = 1;            // each level halves every target spacing
    double far_size = 0.05;   // spacing cap away from the corner (absolute)
    int corner_rings = 6;     // geometric rings toward the re-entrant corner
    double corner_ratio = 0.6;
    double growth = 1.35;     // expansion ratio beyond the rings
    int min_across = 4;       // minimum intervals across thin directions
};

/// Structured graded meridian mesh of the L-shaped domain.
AxisymMesh axisym_lshape_mesh(double r_in, double r_out, double z_mid, double z_top,
                              const AxisymMeshControls& controls);

/// Tensor mesh of the rectangle (r0,r1) x (z0,z1); faces reuse the L-shape
/// names (outer = r1, inner_wall = r0, bottom = z0, top = z1).
AxisymMesh axisym_rect_mesh(double r0, double r1, double z0, double z1, int nr, int nz);

using MeridianFn = std::function<double(double r, double z)>;

struct AxisymBc {
    std::map<AxisymFace, MeridianFn> dirichlet;  // prescribed values
    std::map<AxisymFace, MeridianFn> flux;       // kappa du/dn data (MMS and
                                                 // artificial truncation faces)
};

struct AxisymSolveInfo {
    double energy = 0.0;    // u^T K u
    int dofs = 0;
    double seconds = 0.0;
    double residual = 0.0;
};

/// P1 solve of -div(kappa grad u) = f with the 2 pi r volume element.
/// kappa is sampled at element centroids (piecewise-constant coefficients).
FeField axisym_solve(const AxisymMesh& mesh, const MeridianFn& kappa, const MeridianFn& source,
                     const AxisymBc& bc, AxisymSolveInfo* info = nullptr);

/// Integral of fn over the meridian domain with the 2 pi r element.
double axisym_integrate(const AxisymMesh& mesh, const MeridianFn& fn, bool high_order = true);

/// Mean of a P1 field over a horizontal cross-section of the rod block,
/// weighted by 2 pi r (used to read off far-field constants).
double rod_section_mean(const AxisymMesh& mesh, const FeField& u, double z);

}  // namespace junction
