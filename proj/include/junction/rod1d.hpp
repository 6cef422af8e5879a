#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

namespace junction {

using LineFn = std::function<double(double)>;

/// Panelwise-Gauss cumulative integrals of a smooth function on [0, l]:
/// T1(z) = int_0^z f, Tt(z) = int_0^z t f(t) dt. Evaluation at arbitrary z
/// finishes the open panel with a fresh Gauss rule, so no grid error enters.
class CumulativeIntegrals {
public:
    CumulativeIntegrals() = default;
    CumulativeIntegrals(LineFn f, double l, int panels = 64);

    double T1(double z) const;
    double Tt(double z) const;
    double f(double z) const { return f_(z); }
    bool empty() const { return !f_; }

private:
    LineFn f_;
    double l_ = 0.0;
    double dz_ = 0.0;
    std::vector<double> prefix1_, prefixt_;  // per-panel prefix sums
};

/// One-dimensional rod profile: a linear tail c (1 - z/l) plus a particular
/// part driven by the averaged source. The particular part carries either a
/// free (Neumann) or pinned (Dirichlet) left end; the right end is always 0.
class RodProfile {
public:
    enum class ParticularKind { none, neumann_left, pinned_ends };

    RodProfile() = default;

    double length() const { return l_; }
    double gamma() const { return gamma_; }
    double section_area() const { return area_; }
    double linear_coefficient() const { return c_lin_; }

    /// True when the profile still contains the undetermined constant of the
    /// low-contrast regime; value() throws until it is resolved.
    bool needs_A0() const { return needs_A0_; }
    RodProfile resolved(double A0) const;

    double value(double z) const;
    double derivative(double z) const;
    /// End flux -gamma |w| U'(0).
    double end_flux() const;

    friend RodProfile solve_hash(double l, double gamma, double section_area, const LineFn& f);
    friend RodProfile assemble_U0_alpha1(const RodProfile& hash, double A);
    friend RodProfile solve_dirichlet_ends(double l, double gamma, double section_area,
                                           const LineFn& f, double left_value);
    friend RodProfile assemble_U0_alpha0(std::optional<double> A0, double a0, double gamma,
                                         double section_area, double l, double ln_h,
                                         const RodProfile& hash_dirichlet);

private:
    double l_ = 1.0;
    double gamma_ = 1.0;
    double area_ = 1.0;
    double c_lin_ = 0.0;  // coefficient of (1 - z/l)
    ParticularKind kind_ = ParticularKind::none;
    std::shared_ptr<const CumulativeIntegrals> quad_;
    bool needs_A0_ = false;

    double particular(double z) const;
    double particular_derivative(double z) const;
};

/// Averaged rod problem with a free left end: -gamma |w| U'' = |w| f on (0,l),
/// U'(0) = 0, U(l) = 0.
RodProfile solve_hash(double l, double gamma, double section_area, const LineFn& f);

/// Adds the linear tail A (gamma |w|)^-1 (l - z), so -gamma |w| U'(0) = A.
RodProfile assemble_U0_alpha1(const RodProfile& hash, double A);

/// Two-point Dirichlet problem: U(0) = left_value, U(l) = 0.
RodProfile solve_dirichlet_ends(double l, double gamma, double section_area, const LineFn& f,
                                double left_value);

/// Low-contrast profile (A0 + a0 gamma |w| ln h / (2 pi l)) (1 - z/l) + U_hash;
/// A0 may be left unknown, in which case the profile must be resolved before
/// evaluation.
RodProfile assemble_U0_alpha0(std::optional<double> A0, double a0, double gamma,
                              double section_area, double l, double ln_h,
                              const RodProfile& hash_dirichlet);

}  // namespace junction
