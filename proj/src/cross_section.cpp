#include "junction/cross_section.hpp"

#include "junction/numeric.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace junction {

namespace {

constexpr double kInv2Pi = 1.0 / (2.0 * M_PI);
// first positive zero of J0' (radial Neumann mode of the disk)
constexpr double kBesselJ1FirstZero = 3.8317059702075125;

/// Antiderivative of ln sqrt(u^2 + d^2) in u; integrable at u = d = 0.
double log_antiderivative(double u, double d) {
    if (d == 0.0) return u == 0.0 ? 0.0 : u * std::log(std::abs(u)) - u;
    return 0.5 * u * std::log(u * u + d * d) - u + d * std::atan(u / d);
}

}  // namespace

LogPotential LogPotential::disk(double radius) {
    if (!(radius > 0.0)) throw std::invalid_argument("LogPotential: radius must be positive");
    LogPotential p;
    p.kind_ = Kind::analytic_disk;
    p.radius_ = radius;
    p.c_log_ = radius;
    p.enclosing_radius_ = radius;
    p.far_constant_ = kInv2Pi * std::log(radius);
    return p;
}

LogPotential LogPotential::single_layer(const CrossSection& section, int panels_per_edge) {
    if (section.kind != SectionKind::polygon)
        throw std::invalid_argument("LogPotential::single_layer expects a polygon");
    if (polygon_area(section.vertices) <= 0.0)
        throw std::invalid_argument("LogPotential: polygon must be positively oriented");
    LogPotential p;
    p.kind_ = Kind::numeric;
    p.enclosing_radius_ = section.circumradius();

    // Panels graded geometrically toward both corners of every edge; the
    // density is corner-singular and the grading keeps the collocation honest.
    const Eigen::MatrixX2d& v = section.vertices;
    const int nv = static_cast<int>(v.rows());
    const int half = std::max(2, panels_per_edge / 2);
    const double ratio = 0.78;
    std::vector<double> ticks;  // subdivision of [0, 1/2], finest first
    {
        std::vector<double> sizes(half);
        double s = 1.0;
        for (int i = 0; i < half; ++i) {
            sizes[i] = s;
            s /= ratio;
        }
        double sum = 0.0;
        for (double x : sizes) sum += x;
        double acc = 0.0;
        ticks.push_back(0.0);
        for (int i = 0; i < half; ++i) {
            acc += sizes[i] / sum * 0.5;
            ticks.push_back(acc);
        }
        ticks.back() = 0.5;
    }
    for (int e = 0; e < nv; ++e) {
        const Vec2 a = v.row(e).transpose();
        const Vec2 b = v.row((e + 1) % nv).transpose();
        std::vector<double> params;
        for (double t : ticks) params.push_back(t);
        for (int i = static_cast<int>(ticks.size()) - 2; i >= 0; --i)
            params.push_back(1.0 - ticks[i]);
        for (size_t i = 0; i + 1 < params.size(); ++i) {
            Panel panel;
            panel.a = a + params[i] * (b - a);
            panel.b = a + params[i + 1] * (b - a);
            panel.mid = 0.5 * (panel.a + panel.b);
            panel.len = (panel.b - panel.a).norm();
            panel.tangent = (panel.b - panel.a) / panel.len;
            panel.normal = Vec2(panel.tangent.y(), -panel.tangent.x());
            p.panels_.push_back(panel);
        }
    }

    // Collocation: W = 0 at panel midpoints, total charge 1.
    const int N = static_cast<int>(p.panels_.size());
    Eigen::MatrixXd A(N + 1, N + 1);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(N + 1);
    for (int i = 0; i < N; ++i) {
        const Vec2 pi = p.panels_[i].mid;
        for (int k = 0; k < N; ++k) {
            const Panel& pk = p.panels_[k];
            const double s = (pi - pk.a).dot(pk.tangent);
            const double d = (pi - pk.a).dot(pk.normal);
            A(i, k) = -kInv2Pi *
                      (log_antiderivative(pk.len - s, d) - log_antiderivative(-s, d));
        }
        A(i, N) = 1.0;
    }
    for (int k = 0; k < N; ++k) A(N, k) = p.panels_[k].len;
    A(N, N) = 0.0;
    rhs[N] = 1.0;
    const Eigen::VectorXd sol = A.fullPivLu().solve(rhs);
    for (int k = 0; k < N; ++k) p.panels_[k].sigma = sol[k];
    p.far_constant_ = sol[N];
    p.c_log_ = std::exp(2.0 * M_PI * p.far_constant_);
    return p;
}

double LogPotential::value(const Vec2& eta) const {
    if (kind_ == Kind::analytic_disk) return kInv2Pi * std::log(radius_ / eta.norm());
    double w = far_constant_;
    for (const Panel& pk : panels_) {
        const double s = (eta - pk.a).dot(pk.tangent);
        const double d = (eta - pk.a).dot(pk.normal);
        w -= kInv2Pi * pk.sigma *
             (log_antiderivative(pk.len - s, d) - log_antiderivative(-s, d));
    }
    return w;
}

Vec2 LogPotential::gradient(const Vec2& eta) const {
    if (kind_ == Kind::analytic_disk) return -kInv2Pi / eta.squaredNorm() * eta;
    Vec2 g = Vec2::Zero();
    for (const Panel& pk : panels_) {
        const double s = (eta - pk.a).dot(pk.tangent);
        const double d = (eta - pk.a).dot(pk.normal);
        const double u2 = pk.len - s, u1 = -s;
        // d/ds int ln sqrt((t-s)^2+d^2) dt = -(1/2) ln((u2^2+d^2)/(u1^2+d^2))
        const double dVds = -0.5 * std::log((u2 * u2 + d * d) / (u1 * u1 + d * d));
        const double dVdd = d == 0.0 ? 0.0 : std::atan(u2 / d) - std::atan(u1 / d);
        g -= kInv2Pi * pk.sigma * (dVds * pk.tangent + dVdd * pk.normal);
    }
    return g;
}

double LogPotential::remainder_value(const Vec2& eta) const {
    if (kind_ == Kind::analytic_disk) return 0.0;
    return value(eta) + kInv2Pi * std::log(eta.norm() / c_log_);
}

Vec2 LogPotential::remainder_gradient(const Vec2& eta) const {
    if (kind_ == Kind::analytic_disk) return Vec2::Zero();
    return gradient(eta) + kInv2Pi / eta.squaredNorm() * eta;
}

LogPotential log_potential(const CrossSection& section) {
    if (section.kind == SectionKind::disk) return LogPotential::disk(section.radius);
    return LogPotential::single_layer(section);
}

double flux_identity_check(const LogPotential& pot) {
    // flux toward the section through an enclosing circle; radius-independent
    // by harmonicity
    const double R = 2.5 * pot.enclosing_radius();
    const int n = 512;
    double flux = 0.0;
    for (int i = 0; i < n; ++i) {
        const double th = 2.0 * M_PI * i / n;
        const Vec2 rhat(std::cos(th), std::sin(th));
        flux -= pot.gradient(R * rhat).dot(rhat) * (2.0 * M_PI * R / n);
    }
    return flux;
}

SemicylinderGrowth semicylinder_growth(const CrossSection& section, double gamma,
                                       const std::function<double(double, double)>& g,
                                       double zeta_max) {
    if (!(zeta_max >= 0.0))
        throw std::invalid_argument("semicylinder_growth: data must have compact support");
    double perimeter_integral = 0.0;
    auto zeta_integral = [&](double arc) {
        return panel_integrate([&](double z) { return g(arc, z); }, 0.0, zeta_max,
                               std::max(4, static_cast<int>(zeta_max * 4)), 8);
    };
    if (zeta_max > 0.0) {
        if (section.kind == SectionKind::disk) {
            const double a = section.radius;
            perimeter_integral =
                panel_integrate([&](double arc) { return zeta_integral(arc); }, 0.0,
                                2.0 * M_PI * a, 16, 8);
        } else {
            const Eigen::MatrixX2d& v = section.vertices;
            const int nv = static_cast<int>(v.rows());
            double arc0 = 0.0;
            for (int e = 0; e < nv; ++e) {
                const double len = (v.row((e + 1) % nv) - v.row(e)).norm();
                perimeter_integral += panel_integrate(
                    [&](double arc) { return zeta_integral(arc); }, arc0, arc0 + len, 8, 8);
                arc0 += len;
            }
        }
    }
    SemicylinderGrowth out;
    out.C = -perimeter_integral / (gamma * section.area());
    out.C0 = 0.0;
    return out;
}

LayerField::LayerField(AxisymMesh mesh, FeField w, double q, double gamma, double area)
    : mesh_(std::move(mesh)),
      sampler_(std::make_shared<FieldSampler>(std::move(w))),
      q_(q),
      gamma_(gamma),
      area_(area) {}

double LayerField::value(double rho, double zeta) const {
    if (!sampler_) throw std::logic_error("LayerField: empty");
    if (rho > mesh_.r_out) return -kInv2Pi * std::log(rho);
    if (zeta > mesh_.z_top) return zeta / (gamma_ * area_) + q_;
    return sampler_->value({rho, std::max(zeta, 0.0)});
}

Vec2 LayerField::gradient(double rho, double zeta) const {
    if (!sampler_) throw std::logic_error("LayerField: empty");
    if (rho > mesh_.r_out) return {-kInv2Pi / rho, 0.0};
    if (zeta > mesh_.z_top) return {0.0, 1.0 / (gamma_ * area_)};
    return sampler_->gradient({rho, std::max(zeta, 0.0)});
}

namespace {

double solve_q_once(double a, double gamma, double R, double Z, int level, LayerField* field) {
    AxisymMeshControls controls;
    controls.level = level;
    controls.far_size = 0.55;
    auto mesh = axisym_lshape_mesh(a, R, 1.0, Z, controls);

    const double area = M_PI * a * a;
    AxisymBc bc;
    // Gauge: the layer face carries a constant value (zero here); the correct
    // far-field constant -(2 pi)^-1 ln R is restored by a shift afterwards.
    // The unit flux entering through the cylinder end is balanced by the
    // logarithmic outflow through the layer face.
    bc.dirichlet[AxisymFace::outer] = [](double, double) { return 0.0; };
    bc.flux[AxisymFace::top] = [area](double, double) { return 1.0 / area; };
    auto kappa = [a, gamma](double r, double) { return r <= a + 1e-12 ? gamma : 1.0; };
    auto w = axisym_solve(mesh, kappa, [](double, double) { return 0.0; }, bc);

    const double shift = -kInv2Pi * std::log(R);
    w.values.array() += shift;
    const double q = rod_section_mean(mesh, w, Z) - Z / (gamma * area);
    if (field) *field = LayerField(std::move(mesh), std::move(w), q, gamma, area);
    return q;
}

}  // namespace

BoundaryLayerData junction_constant_q(const CrossSection& section, double gamma,
                                      const QTruncation& trunc) {
    if (section.kind != SectionKind::disk)
        throw std::invalid_argument(
            "junction_constant_q: polygon sections are not supported (meridian reduction "
            "needs a disk)");
    const double a = section.radius;
    BoundaryLayerData out;
    out.c_log = a;
    out.delta = kBesselJ1FirstZero / a;
    out.layer_radius = trunc.layer_radius;
    out.cylinder_height = trunc.cylinder_height;
    out.q = solve_q_once(a, gamma, trunc.layer_radius, trunc.cylinder_height, trunc.mesh_level,
                         &out.field);
    const double q_half = solve_q_once(a, gamma, 0.5 * trunc.layer_radius,
                                       0.5 * trunc.cylinder_height, trunc.mesh_level, nullptr);
    out.indicator = std::abs(out.q - q_half);
    return out;
}

double compatibility_integral(const CrossSection& section, double cut_radius) {
    const double R = cut_radius;
    auto X1 = [](double t) { return quintic_step_d1(t); };
    auto X2 = [](double t) { return quintic_step_d2(t); };

    // layer term: (2 pi)^-1 int_0^1 int [2 X' d/drho ln(1/rho) + ln(1/rho)
    // (X'' + X'/rho)] 2 pi rho drho dzeta over R < rho < 2R
    const double layer = panel_integrate(
        [&](double rho) {
            const double t = (rho - R) / R;
            const double Xp = X1(t) / R;
            const double Xpp = X2(t) / (R * R);
            return -2.0 * Xp + std::log(1.0 / rho) * (rho * Xpp + Xp);
        },
        R, 2.0 * R, 16, 12);

    // cylinder term: |w|^-1 int_w int_1^2 [2 X' + zeta X''] dzeta deta
    const double cyl = panel_integrate(
        [&](double zeta) {
            const double t = zeta - 1.0;
            return 2.0 * X1(t) + zeta * X2(t);
        },
        1.0, 2.0, 8, 12);
    (void)section;  // the discrete integrals depend on the cut radius only
    return layer + cyl;
}

}  // namespace junction
