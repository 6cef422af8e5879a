#include "junction/rod1d.hpp"

#include "junction/numeric.hpp"

#include <cmath>
#include <stdexcept>

namespace junction {

CumulativeIntegrals::CumulativeIntegrals(LineFn f, double l, int panels)
    : f_(std::move(f)), l_(l), dz_(l / panels) {
    prefix1_.assign(panels + 1, 0.0);
    prefixt_.assign(panels + 1, 0.0);
    for (int p = 0; p < panels; ++p) {
        const double a = p * dz_, b = (p + 1) * dz_;
        prefix1_[p + 1] = prefix1_[p] + gauss_integrate(f_, a, b, 12);
        prefixt_[p + 1] =
            prefixt_[p] + gauss_integrate([this](double t) { return t * f_(t); }, a, b, 12);
    }
}

double CumulativeIntegrals::T1(double z) const {
    z = std::clamp(z, 0.0, l_);
    const int p = std::min(static_cast<int>(z / dz_), static_cast<int>(prefix1_.size()) - 2);
    return prefix1_[p] + gauss_integrate(f_, p * dz_, z, 12);
}

double CumulativeIntegrals::Tt(double z) const {
    z = std::clamp(z, 0.0, l_);
    const int p = std::min(static_cast<int>(z / dz_), static_cast<int>(prefixt_.size()) - 2);
    return prefixt_[p] + gauss_integrate([this](double t) { return t * f_(t); }, p * dz_, z, 12);
}

double RodProfile::particular(double z) const {
    if (kind_ == ParticularKind::none || !quad_) return 0.0;
    const double T1l = quad_->T1(l_);
    const double Ttl = quad_->Tt(l_);
    if (kind_ == ParticularKind::neumann_left) {
        // U(z) = gamma^-1 [ (l-z) T1(z) + l (T1(l)-T1(z)) - Tt(l) + Tt(z) ]
        return ((l_ - z) * quad_->T1(z) + l_ * (T1l - quad_->T1(z)) - Ttl + quad_->Tt(z)) / gamma_;
    }
    // pinned ends: U(z) = gamma^-1 [ z/l (l T1(l) - Tt(l)) - (z T1(z) - Tt(z)) ]
    return (z / l_ * (l_ * T1l - Ttl) - (z * quad_->T1(z) - quad_->Tt(z))) / gamma_;
}

double RodProfile::particular_derivative(double z) const {
    if (kind_ == ParticularKind::none || !quad_) return 0.0;
    if (kind_ == ParticularKind::neumann_left) return -quad_->T1(z) / gamma_;
    return ((l_ * quad_->T1(l_) - quad_->Tt(l_)) / l_ - quad_->T1(z)) / gamma_;
}

double RodProfile::value(double z) const {
    if (needs_A0_)
        throw std::logic_error("RodProfile: A0 is undetermined; call resolved(A0) first");
    return c_lin_ * (1.0 - z / l_) + particular(z);
}

double RodProfile::derivative(double z) const {
    if (needs_A0_)
        throw std::logic_error("RodProfile: A0 is undetermined; call resolved(A0) first");
    return -c_lin_ / l_ + particular_derivative(z);
}

double RodProfile::end_flux() const { return -gamma_ * area_ * derivative(0.0); }

RodProfile RodProfile::resolved(double A0) const {
    RodProfile out = *this;
    if (!needs_A0_) throw std::logic_error("RodProfile: profile carries no free A0");
    out.c_lin_ += A0;
    out.needs_A0_ = false;
    return out;
}

RodProfile solve_hash(double l, double gamma, double section_area, const LineFn& f) {
    if (!(l > 0.0) || !(gamma > 0.0)) throw std::invalid_argument("solve_hash: bad rod data");
    RodProfile p;
    p.l_ = l;
    p.gamma_ = gamma;
    p.area_ = section_area;
    p.kind_ = RodProfile::ParticularKind::neumann_left;
    p.quad_ = std::make_shared<CumulativeIntegrals>(f, l);
    return p;
}

RodProfile assemble_U0_alpha1(const RodProfile& hash, double A) {
    RodProfile out = hash;
    out.c_lin_ += A * out.l_ / (out.gamma_ * out.area_);
    return out;
}

RodProfile solve_dirichlet_ends(double l, double gamma, double section_area, const LineFn& f,
                                double left_value) {
    if (!(l > 0.0) || !(gamma > 0.0))
        throw std::invalid_argument("solve_dirichlet_ends: bad rod data");
    RodProfile p;
    p.l_ = l;
    p.gamma_ = gamma;
    p.area_ = section_area;
    p.c_lin_ = left_value;
    p.kind_ = RodProfile::ParticularKind::pinned_ends;
    p.quad_ = std::make_shared<CumulativeIntegrals>(f, l);
    return p;
}

RodProfile assemble_U0_alpha0(std::optional<double> A0, double a0, double gamma,
                              double section_area, double l, double ln_h,
                              const RodProfile& hash_dirichlet) {
    RodProfile out = hash_dirichlet;
    out.c_lin_ += a0 * gamma * section_area * ln_h / (2.0 * M_PI * l);
    if (A0) {
        out.c_lin_ += *A0;
    } else {
        out.needs_A0_ = true;
    }
    return out;
}

}  // namespace junction
