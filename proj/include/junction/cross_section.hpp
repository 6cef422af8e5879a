#pragma once

#include "junction/axisym.hpp"
#include "junction/geometry.hpp"

#include <Eigen/Dense>

#include <functional>
#include <memory>
#include <vector>

namespace junction {

/// Exterior logarithmic potential of a section: harmonic outside, zero on the
/// boundary, -(2 pi)^-1 ln(rho) + (2 pi)^-1 ln(c_log) + O(1/rho) far away.
class LogPotential {
public:
    enum class Kind { analytic_disk, numeric };

    static LogPotential disk(double radius);
    static LogPotential single_layer(const CrossSection& section, int panels_per_edge = 24);

    Kind kind() const { return kind_; }
    double c_log() const { return c_log_; }
    double value(const Vec2& eta) const;
    Vec2 gradient(const Vec2& eta) const;
    /// Far-field remainder W + (2pi)^-1 ln(rho / c_log); identically 0 for disks.
    double remainder_value(const Vec2& eta) const;
    Vec2 remainder_gradient(const Vec2& eta) const;
    double enclosing_radius() const { return enclosing_radius_; }

private:
    Kind kind_ = Kind::analytic_disk;
    double c_log_ = 1.0;
    double radius_ = 1.0;       // disks
    double enclosing_radius_ = 1.0;
    double far_constant_ = 0.0; // (2 pi)^-1 ln c_log
    struct Panel {
        Vec2 a, b, mid, tangent, normal;
        double len = 0.0;
        double sigma = 0.0;
    };
    std::vector<Panel> panels_;
};

LogPotential log_potential(const CrossSection& section);

/// Total flux of the potential through a contour enclosing the section,
/// oriented toward the section. Equals 1 in the continuum.
double flux_identity_check(const LogPotential& pot);

struct SemicylinderGrowth {
    double C = 0.0;
    double C0 = 0.0;  // pinned to zero by the matching normalization
};

/// Growth constant of the Neumann semi-cylinder problem with wall flux data
/// g(arc, zeta) supported in zeta < zeta_max:
///   C = -(gamma |w|)^-1 int_0^inf int_bnd g ds dzeta.
SemicylinderGrowth semicylinder_growth(const CrossSection& section, double gamma,
                                       const std::function<double(double, double)>& g,
                                       double zeta_max);

struct QTruncation {
    double layer_radius = 16.0;   // rho truncation of the layer
    double cylinder_height = 16.0;
    int mesh_level = 2;
};

/// The special junction solution w(rho, zeta) of the layer/semi-cylinder
/// union, normalized to -(2 pi)^-1 ln rho + o(1) in the layer; linear growth
/// zeta/(gamma |w|) + q in the cylinder.
class LayerField {
public:
    LayerField() = default;
    LayerField(AxisymMesh mesh, FeField w, double q, double gamma, double area);

    double q() const { return q_; }
    /// w at stretched coordinates; continues with the asymptotic forms beyond
    /// the truncated domain.
    double value(double rho, double zeta) const;
    Vec2 gradient(double rho, double zeta) const;

private:
    AxisymMesh mesh_;
    std::shared_ptr<FieldSampler> sampler_;
    double q_ = 0.0;
    double gamma_ = 1.0;
    double area_ = 1.0;
};

struct BoundaryLayerData {
    double q = 0.0;
    double c_log = 1.0;
    double delta = 1.0;           // modal decay rate used to size the truncation
    double layer_radius = 0.0;    // truncation actually used
    double cylinder_height = 0.0;
    double indicator = 0.0;       // |q(R,Z) - q(R/2,Z/2)|
    LayerField field;
};

/// Disk sections only: meridian solve of the junction problem on a truncated
/// domain. Polygon sections are rejected (no axisymmetric reduction).
BoundaryLayerData junction_constant_q(const CrossSection& section, double gamma,
                                      const QTruncation& trunc = {});

/// Discrete version of the two commutator integrals whose sum certifies the
/// solvability of the junction problem; the exact value is 0.
double compatibility_integral(const CrossSection& section, double cut_radius);

}  // namespace junction
