#pragma once

#include "junction/geometry.hpp"
#include "junction/numeric.hpp"

#include <Eigen/Dense>

#include <iosfwd>
#include <string>
#include <vector>

namespace junction {

enum class BoundaryTag { outer, hole, artificial };

struct BoundaryEdge {
    int a = 0;
    int b = 0;
    BoundaryTag tag = BoundaryTag::outer;
    int hole_index = -1;  // which hole loop, -1 otherwise
};

/// Conforming triangulation with tagged boundary loops.
struct TriMesh {
    Eigen::MatrixX2d vertices;
    Eigen::MatrixX3i triangles;
    std::vector<BoundaryEdge> boundary;

    int vertex_count() const { return static_cast<int>(vertices.rows()); }
    int triangle_count() const { return static_cast<int>(triangles.rows()); }

    Vec2 vertex(int i) const { return vertices.row(i).transpose(); }
    double triangle_area(int t) const;
    double total_area() const;
    Vec2 centroid(int t) const;
    /// Gradients of the three nodal hat functions on triangle t (columns).
    Eigen::Matrix2d jacobian(int t) const;
};

/// Mesh the plate footprint. Boundary vertices lie exactly on the domain
/// boundary (disks are polygonalized at the target size). With grading on,
/// rings of vertices shrink geometrically (factor 0.7) toward each anchor,
/// down to target_size/16.
TriMesh mesh_plate(const PlateDomain& domain, double target_size, bool grade_near_anchors);

/// Same, with the scaled rod sections removed; hole loop j is tagged hole_j.
TriMesh mesh_plate_perforated(const PlateDomain& domain, const std::vector<CrossSection>& rods,
                              double h, double target_size, bool grade_near_anchors = false);

/// Polar structured disk mesh (ring i carries 6i vertices). The construction
/// is invariant under the half-turn y -> -y, which symmetry tests rely on.
/// grading_exponent > 1 pulls the rings toward the center (r_i ~ (i/n)^p)
/// while keeping the cell aspect ratio bounded.
TriMesh mesh_disk_structured(double radius, int rings, double grading_exponent = 1.0);

/// Uniform-grid point locator with barycentric output.
class TriLocator {
public:
    explicit TriLocator(const TriMesh& mesh);

    /// Triangle containing p, or -1. bary receives the barycentric coordinates.
    int find(const Vec2& p, Eigen::Vector3d* bary = nullptr) const;
    /// Nearest triangle with clamped barycentrics; never fails on finite input.
    int find_clamped(const Vec2& p, Eigen::Vector3d* bary = nullptr) const;

private:
    const TriMesh* mesh_;
    Vec2 lo_, hi_;
    double cell_ = 1.0;
    int nx_ = 1, ny_ = 1;
    std::vector<std::vector<int>> buckets_;

    int cell_index(const Vec2& p) const;
};

/// Plain-text mesh exchange format: counts, coordinates, triangles, tagged edges.
void write_mesh(std::ostream& os, const TriMesh& mesh);
void write_mesh_file(const std::string& path, const TriMesh& mesh);

}  // namespace junction
