#pragma once

#include "junction/mesh2d.hpp"
#include "junction/numeric.hpp"

#include <Eigen/Dense>

#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <vector>

namespace junction {

using ScalarFn = std::function<double(const Vec2&)>;

/// Piecewise-linear scalar field on a triangulation.
struct FeField {
    std::shared_ptr<const TriMesh> mesh;
    Eigen::VectorXd values;
};

/// Cached point-evaluation of an FeField (value + elementwise gradient).
class FieldSampler {
public:
    explicit FieldSampler(FeField field);

    double value(const Vec2& p) const;
    Vec2 gradient(const Vec2& p) const;
    const FeField& field() const { return field_; }

private:
    FeField field_;
    std::shared_ptr<TriLocator> locator_;
};

struct NeumannReport {
    double subtracted_mean = 0.0;   // |w0|^-1 <f>_0 removed from the source
    double residual = 0.0;          // relative algebraic residual
};

/// Pure-Neumann Poisson solve with the mean-zero constraint appended as a
/// single Lagrange-multiplier row. Incompatible data are projected onto the
/// compatible subspace first and the subtracted mean is reported.
FeField solve_neumann_mean_zero(std::shared_ptr<const TriMesh> mesh, const ScalarFn& source,
                                const ScalarFn* boundary_flux = nullptr,
                                NeumannReport* report = nullptr);

/// Homogeneous Dirichlet Poisson solve (every tagged boundary vertex pinned).
FeField solve_dirichlet(std::shared_ptr<const TriMesh> mesh, const ScalarFn& source);

enum class GreenBc { neumann_mean_zero, dirichlet };

/// Green functions split as G_j = chi_j(r_j) (2pi)^-1 ln(1/r_j) + g_j with the
/// smooth remainder g_j solved by FEM, plus the matrix of regular values.
struct GreenData {
    std::vector<FeField> regular_parts;
    Eigen::MatrixXd Gmatrix;
    GreenBc bc = GreenBc::neumann_mean_zero;
    Eigen::MatrixX2d anchors;
    double cutoff_radius = 0.0;

    int count() const { return static_cast<int>(regular_parts.size()); }
    /// chi(r) used for the logarithmic splitting (1 on [0,R0/2], 0 beyond R0).
    RadialCutoff cutoff() const { return {0.5 * cutoff_radius, cutoff_radius}; }
};

GreenData green_functions(std::shared_ptr<const TriMesh> mesh, const Eigen::MatrixX2d& anchors,
                          GreenBc bc, double cutoff_radius);

/// Value and gradient of the full Green function G_j at a point.
double green_value(const GreenData& g, const std::vector<FieldSampler>& samplers, int j,
                   const Vec2& p);
Vec2 green_gradient(const GreenData& g, const std::vector<FieldSampler>& samplers, int j,
                    const Vec2& p);

/// Barycentric interpolation; throws if the point is outside the mesh.
double evaluate(const FeField& field, const Vec2& p);

/// Quadrature of fn over the mesh (3-point rule by default).
double integrate(const TriMesh& mesh, const ScalarFn& fn, bool high_order = false);

/// Both routes to U_perp(P^j): direct interpolation and the Green quadrature.
struct AnchorValue {
    double by_interpolation = 0.0;
    double by_green_quadrature = 0.0;
};

AnchorValue plate_anchor_value(const FeField& u_perp, const GreenData& green, int j,
                               const ScalarFn& source);

/// CSV export: vertex index, x, y, value.
void write_field_csv(std::ostream& os, const FeField& field);
void write_green_csv(std::ostream& os, const GreenData& green);

}  // namespace junction
