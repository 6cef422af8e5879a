#pragma once

#include "junction/numeric.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace junction {

enum class SectionKind { disk, polygon };
enum class LateralBc { neumann, dirichlet };

/// Rod cross-section in stretched coordinates, together with its material data.
/// The section must contain the origin; disks are centered at it.
struct CrossSection {
    SectionKind kind = SectionKind::disk;
    double radius = 1.0;            // disk only
    Eigen::MatrixX2d vertices;      // polygon only, positively oriented
    double gamma = 1.0;             // material coefficient
    double length = 1.0;            // rod length l_j

    static CrossSection disk(double radius, double gamma, double length);
    static CrossSection polygon(Eigen::MatrixX2d vertices, double gamma, double length);

    double area() const;
    /// Radius of the smallest origin-centered disk containing the section.
    double circumradius() const;
    /// Truncation radius for exterior boundary-layer solves (twice the circumradius).
    double layer_radius() const;
};

/// The plate footprint with its anchor points P^j.
struct PlateDomain {
    SectionKind kind = SectionKind::disk;
    double radius = 1.0;
    Eigen::MatrixX2d vertices;
    Eigen::MatrixX2d anchors;       // J x 2
    double cutoff_radius = 0.0;     // R0; 0 requests the default
    LateralBc lateral_bc = LateralBc::neumann;

    static PlateDomain disk(double radius, Eigen::MatrixX2d anchors,
                            LateralBc bc = LateralBc::neumann);
    static PlateDomain polygon(Eigen::MatrixX2d vertices, Eigen::MatrixX2d anchors,
                               LateralBc bc = LateralBc::neumann);

    int anchor_count() const { return static_cast<int>(anchors.rows()); }
    double area() const;
    bool contains(const Vec2& p) const;
    /// Distance from an interior point to the domain boundary.
    double boundary_distance(const Vec2& p) const;
    /// R0 = half of min(distance of anchors to the boundary, half the minimal
    /// inter-anchor distance); used by cutoffs and Green-function splitting.
    double default_cutoff_radius() const;
    double effective_cutoff_radius() const;
};

struct JunctionConfig {
    PlateDomain plate;
    std::vector<CrossSection> rods;
    int alpha = 1;                  // 0 or 1
    double h = 0.1;
    double h0 = 0.0;                // 0 requests the geometric bound

    int rod_count() const { return static_cast<int>(rods.size()); }
    /// Largest h at which all scaled sections stay inside the plate and apart
    /// from each other. The alpha=1 matrix condition can clip this further.
    double geometric_h0() const;
};

struct ConfigViolation {
    std::string invariant;
    int index = -1;  // rod/anchor index, -1 for plate-level problems

    std::string message() const;
};

/// Empty iff the configuration satisfies every structural invariant.
std::vector<ConfigViolation> validate_config(const JunctionConfig& cfg);

// Polygon helpers shared with the mesher and the layer-potential solver.
double polygon_area(const Eigen::MatrixX2d& v);
bool polygon_contains(const Eigen::MatrixX2d& v, const Vec2& p);
double polygon_boundary_distance(const Eigen::MatrixX2d& v, const Vec2& p);

}  // namespace junction
