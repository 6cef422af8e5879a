#include "junction/geometry.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace junction {

CrossSection CrossSection::disk(double radius, double gamma, double length) {
    CrossSection s;
    s.kind = SectionKind::disk;
    s.radius = radius;
    s.gamma = gamma;
    s.length = length;
    return s;
}

CrossSection CrossSection::polygon(Eigen::MatrixX2d vertices, double gamma, double length) {
    CrossSection s;
    s.kind = SectionKind::polygon;
    s.vertices = std::move(vertices);
    s.gamma = gamma;
    s.length = length;
    return s;
}

double CrossSection::area() const {
    if (kind == SectionKind::disk) return M_PI * radius * radius;
    return polygon_area(vertices);
}

double CrossSection::circumradius() const {
    if (kind == SectionKind::disk) return radius;
    double r = 0.0;
    for (Eigen::Index i = 0; i < vertices.rows(); ++i)
        r = std::max(r, vertices.row(i).norm());
    return r;
}

double CrossSection::layer_radius() const { return 2.0 * circumradius(); }

PlateDomain PlateDomain::disk(double radius, Eigen::MatrixX2d anchors, LateralBc bc) {
    PlateDomain d;
    d.kind = SectionKind::disk;
    d.radius = radius;
    d.anchors = std::move(anchors);
    d.lateral_bc = bc;
    return d;
}

PlateDomain PlateDomain::polygon(Eigen::MatrixX2d vertices, Eigen::MatrixX2d anchors,
                                 LateralBc bc) {
    PlateDomain d;
    d.kind = SectionKind::polygon;
    d.vertices = std::move(vertices);
    d.anchors = std::move(anchors);
    d.lateral_bc = bc;
    return d;
}

double PlateDomain::area() const {
    if (kind == SectionKind::disk) return M_PI * radius * radius;
    return polygon_area(vertices);
}

bool PlateDomain::contains(const Vec2& p) const {
    if (kind == SectionKind::disk) return p.norm() < radius;
    return polygon_contains(vertices, p);
}

double PlateDomain::boundary_distance(const Vec2& p) const {
    if (kind == SectionKind::disk) return radius - p.norm();
    return polygon_boundary_distance(vertices, p);
}

double PlateDomain::default_cutoff_radius() const {
    const int J = anchor_count();
    if (J == 0) throw std::logic_error("PlateDomain: no anchors");
    double d = std::numeric_limits<double>::max();
    for (int j = 0; j < J; ++j) {
        d = std::min(d, boundary_distance(anchors.row(j).transpose()));
        for (int k = j + 1; k < J; ++k)
            d = std::min(d, 0.5 * (anchors.row(j) - anchors.row(k)).norm());
    }
    return 0.5 * d;
}

double PlateDomain::effective_cutoff_radius() const {
    return cutoff_radius > 0.0 ? cutoff_radius : default_cutoff_radius();
}

double JunctionConfig::geometric_h0() const {
    double h0_geom = std::numeric_limits<double>::max();
    const int J = rod_count();
    for (int j = 0; j < J; ++j) {
        const double cr = rods[j].circumradius();
        const Vec2 pj = plate.anchors.row(j).transpose();
        h0_geom = std::min(h0_geom, plate.boundary_distance(pj) / cr);
        for (int k = j + 1; k < J; ++k) {
            const double sep = (plate.anchors.row(j) - plate.anchors.row(k)).norm();
            h0_geom = std::min(h0_geom, sep / (cr + rods[k].circumradius()));
        }
    }
    return 0.999 * h0_geom;
}

std::string ConfigViolation::message() const {
    if (index < 0) return invariant;
    return invariant + " (j=" + std::to_string(index + 1) + ")";
}

std::vector<ConfigViolation> validate_config(const JunctionConfig& cfg) {
    std::vector<ConfigViolation> out;
    const int J = cfg.rod_count();

    if (J == 0) out.push_back({"no rods", -1});
    if (cfg.plate.anchor_count() != J) out.push_back({"anchor count differs from rod count", -1});
    if (cfg.alpha != 0 && cfg.alpha != 1) out.push_back({"alpha not in {0,1}", -1});
    if (!(cfg.h > 0.0)) out.push_back({"h not positive", -1});
    if (cfg.plate.kind == SectionKind::disk && !(cfg.plate.radius > 0.0))
        out.push_back({"plate radius not positive", -1});
    if (cfg.plate.kind == SectionKind::polygon && cfg.plate.vertices.rows() < 3)
        out.push_back({"plate polygon degenerate", -1});
    if (cfg.plate.kind == SectionKind::polygon && polygon_area(cfg.plate.vertices) <= 0.0)
        out.push_back({"plate polygon not positively oriented", -1});

    for (int j = 0; j < J; ++j) {
        const CrossSection& s = cfg.rods[j];
        if (s.kind == SectionKind::disk && !(s.radius > 0.0))
            out.push_back({"section radius not positive", j});
        if (s.kind == SectionKind::polygon) {
            if (s.vertices.rows() < 3 || polygon_area(s.vertices) <= 0.0)
                out.push_back({"section polygon degenerate", j});
            else if (!polygon_contains(s.vertices, Vec2::Zero()))
                out.push_back({"section does not contain the origin", j});
        }
        if (!(s.gamma > 0.0)) out.push_back({"gamma not positive", j});
        if (!(s.length > 0.0)) out.push_back({"rod length not positive", j});
    }
    if (!out.empty()) return out;  // structural problems make the geometric checks moot

    const int Ja = cfg.plate.anchor_count();
    for (int j = 0; j < Ja; ++j) {
        const Vec2 pj = cfg.plate.anchors.row(j).transpose();
        if (!cfg.plate.contains(pj)) out.push_back({"anchor not interior to the plate", j});
        for (int k = j + 1; k < Ja; ++k)
            if ((cfg.plate.anchors.row(j) - cfg.plate.anchors.row(k)).norm() == 0.0)
                out.push_back({"anchors coincide", k});
    }
    if (!out.empty()) return out;

    const double R0 = cfg.plate.effective_cutoff_radius();
    for (int j = 0; j < J; ++j) {
        const Vec2 pj = cfg.plate.anchors.row(j).transpose();
        if (cfg.plate.boundary_distance(pj) < R0)
            out.push_back({"anchor ball not contained in the plate", j});
        for (int k = j + 1; k < J; ++k)
            if ((cfg.plate.anchors.row(j) - cfg.plate.anchors.row(k)).norm() < 2.0 * R0)
                out.push_back({"anchor balls overlap", k});
    }

    for (int j = 0; j < J; ++j) {
        const Vec2 pj = cfg.plate.anchors.row(j).transpose();
        const double reach = cfg.h * cfg.rods[j].circumradius();
        if (reach >= cfg.plate.boundary_distance(pj))
            out.push_back({"scaled section not contained in the plate", j});
        for (int k = j + 1; k < J; ++k) {
            const double sep = (cfg.plate.anchors.row(j) - cfg.plate.anchors.row(k)).norm();
            if (reach + cfg.h * cfg.rods[k].circumradius() >= sep)
                out.push_back({"scaled sections overlap", k});
        }
    }

    const double h0 = cfg.h0 > 0.0 ? cfg.h0 : cfg.geometric_h0();
    if (cfg.h > h0) out.push_back({"h exceeds h0", -1});
    return out;
}

double polygon_area(const Eigen::MatrixX2d& v) {
    const Eigen::Index n = v.rows();
    double a = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::Index k = (i + 1) % n;
        a += v(i, 0) * v(k, 1) - v(k, 0) * v(i, 1);
    }
    return 0.5 * a;
}

bool polygon_contains(const Eigen::MatrixX2d& v, const Vec2& p) {
    // Crossing-number test.
    const Eigen::Index n = v.rows();
    bool inside = false;
    for (Eigen::Index i = 0, k = n - 1; i < n; k = i++) {
        const bool straddles = (v(i, 1) > p.y()) != (v(k, 1) > p.y());
        if (straddles) {
            const double x_cross =
                v(i, 0) + (p.y() - v(i, 1)) / (v(k, 1) - v(i, 1)) * (v(k, 0) - v(i, 0));
            if (p.x() < x_cross) inside = !inside;
        }
    }
    return inside;
}

double polygon_boundary_distance(const Eigen::MatrixX2d& v, const Vec2& p) {
    const Eigen::Index n = v.rows();
    double d = std::numeric_limits<double>::max();
    for (Eigen::Index i = 0; i < n; ++i) {
        const Vec2 a = v.row(i).transpose();
        const Vec2 b = v.row((i + 1) % n).transpose();
        const Vec2 ab = b - a;
        const double t = std::clamp((p - a).dot(ab) / ab.squaredNorm(), 0.0, 1.0);
        d = std::min(d, (p - (a + t * ab)).norm());
    }
    return d;
}

}  // namespace junction
