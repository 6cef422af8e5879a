#pragma once

#include "junction/cross_section.hpp"
#include "junction/geometry.hpp"
#include "junction/matching.hpp"
#include "junction/poisson2d.hpp"
#include "junction/reference.hpp"
#include "junction/rod1d.hpp"

#include <functional>
#include <memory>
#include <vector>

namespace junction {

/// A scalar field of the plate variable with an analytic or FE-backed gradient.
struct ScalarField2d {
    std::function<double(const Vec2&)> value;
    std::function<Vec2(const Vec2&)> grad;

    static ScalarField2d zero();
    static ScalarField2d from_field(FeField f);
    static ScalarField2d from_green(const GreenData& g, int j);
};

/// Evaluable composite approximation on the physical junction. Plate and rod
/// evaluators take physical coordinates; rod evaluators are per rod.
struct AsymptoticSolution {
    Regime regime = Regime::alpha1;
    double h = 0.0;
    Eigen::MatrixX2d anchors;
    Eigen::VectorXd rod_lengths;
    Eigen::VectorXd A;  // singular-part coefficients (zero for plain alpha0 plates)

    std::function<double(const Vec2& y, double z)> plate_value;
    std::function<Vec2(const Vec2& y, double z)> plate_grad_y;
    std::function<double(const Vec2& y, double z)> plate_dz;
    std::vector<std::function<double(const Vec2& y, double z)>> rod_value;
    std::vector<std::function<Vec2(const Vec2& y, double z)>> rod_grad_y;
    std::vector<std::function<double(const Vec2& y, double z)>> rod_dz;
};

/// High-contrast composite: plate U_perp + A0 + sum A_j G_j + cutoff layer
/// remainders (identically zero for disk sections); rods U_hash + linear tail.
AsymptoticSolution build_alpha1(const JunctionConfig& cfg, const MatchingCoefficients& coeffs,
                                const std::vector<ScalarField2d>& green,
                                const ScalarField2d& u_perp,
                                const std::vector<RodProfile>& hash_profiles,
                                const std::vector<LogPotential>& potentials);

/// Low-contrast composite: plate h^-1 a0 + cutoff layer fields; rods
/// h^-1 a0 (1 - z/l) + cutoff layer fields.
AsymptoticSolution build_alpha0(const JunctionConfig& cfg, const MatchingCoefficients& coeffs,
                                const std::vector<LayerField>& layers);

/// Lateral-Dirichlet variants: alpha=1 swaps U_perp + A0 for the Dirichlet
/// plate solution (A0 absent); alpha=0 keeps only the averaged limit parts.
AsymptoticSolution build_dirichlet_alpha1(const JunctionConfig& cfg,
                                          const MatchingCoefficients& coeffs,
                                          const std::vector<ScalarField2d>& green,
                                          const ScalarField2d& u0_hash,
                                          const std::vector<RodProfile>& hash_profiles,
                                          const std::vector<LogPotential>& potentials);
AsymptoticSolution build_dirichlet_alpha0(const JunctionConfig& cfg,
                                          const ScalarField2d& u0_hash,
                                          const std::vector<RodProfile>& dirichlet_profiles);

/// Weighted error norms of a composite against the meridian reference solve.
struct ErrorReport {
    double h = 0.0;
    double plate_h1_semi = 0.0;        // || grad(u - model) || over the plate
    double plate_weighted = 0.0;       // weight 1/(r (1+|ln r|)), r = min(1, r_j)
    double plate_weighted_scaled = 0.0;  // (1+|ln h|)^-1 plate_weighted
    double plate_combined = 0.0;       // plate_h1_semi + plate_weighted_scaled
    double rod_h1 = 0.0;               // full H1 norm of the rod mismatch
    double rod_h1_scaled = 0.0;        // h^-1/2 rod_h1 (alpha=1); grad part (alpha=0)
    double rod_weighted = 0.0;         // weight (l - z)^-1
    double ref_plate_h1 = 0.0;         // reference norms for relative reporting
    double ref_rod_h1 = 0.0;
};

ErrorReport error_norms(const AsymptoticSolution& asym, const ReferenceSolution& ref);

/// Radial weighted plate norm with the exact log-substituted quadrature:
/// || fn(r) / (r (1+|ln r|)) ||_{L2(plate of thickness h)}, disk plate.
double plate_weighted_norm_radial(const RadialFn& fn, double R_plate, double h);

/// Coefficient of the logarithmic singularity at anchor j read off as the
/// inward flux of the composite plate field across a circle of radius rho.
double log_singularity_flux(const AsymptoticSolution& asym, int j, double rho);

/// Corollary metrics against the reference solve.
double corollary_rod_trace_h1(const ReferenceSolution& sol, const LineFn& limit,
                              const LineFn& limit_dz);
double corollary_plate_scaled_h1(const ReferenceSolution& sol, double a0);

void write_error_csv_header(std::ostream& os);
void write_error_csv_row(std::ostream& os, const ErrorReport& r);

}  // namespace junction
