#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace junction {

using Vec2 = Eigen::Vector2d;

/// Gauss-Legendre rule on [-1, 1]; nodes/weights computed once and cached.
struct GaussRule {
    Eigen::VectorXd nodes;
    Eigen::VectorXd weights;
};

const GaussRule& gauss_legendre(int n);

/// Integrate f over [a, b] with an n-point Gauss rule.
double gauss_integrate(const std::function<double(double)>& f, double a, double b, int n = 16);

/// Integrate f over [a, b] split into `panels` equal Gauss panels.
double panel_integrate(const std::function<double(double)>& f, double a, double b,
                       int panels, int points_per_panel = 8);

/// Quadrature rule on the reference triangle (barycentric points + weights summing to 1).
struct TriangleRule {
    Eigen::MatrixX3d barycentric;
    Eigen::VectorXd weights;
};

const TriangleRule& triangle_rule_midpoint3();  // degree 2
const TriangleRule& triangle_rule_7point();     // degree 5

/// C^2 quintic step: 0 at t<=0, 1 at t>=1, first and second derivatives vanish at both ends.
double quintic_step(double t);
double quintic_step_d1(double t);
double quintic_step_d2(double t);

/// Radial plateau cutoff: 1 for r <= r_on, 0 for r >= r_off, quintic blend between.
struct RadialCutoff {
    double r_on = 0.0;
    double r_off = 1.0;

    double value(double r) const;
    double d1(double r) const;
    double d2(double r) const;
};

/// Least-squares fit of log(err) against log(h).
struct RateFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;  // RMS residual of the fit in log space
    bool exact = false;     // set when some error vanished identically
};

RateFit fit_rate(const std::vector<std::pair<double, double>>& h_err);

/// FNV-1a over a byte string; used for provenance headers.
std::uint64_t fnv1a(const std::string& bytes);

/// Shortest decimal form that round-trips a double; keeps CSV output reproducible.
std::string format_double(double v);

}  // namespace junction
