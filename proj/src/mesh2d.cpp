#include "junction/mesh2d.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>

namespace junction {

double TriMesh::triangle_area(int t) const {
    const Vec2 a = vertex(triangles(t, 0));
    const Vec2 b = vertex(triangles(t, 1));
    const Vec2 c = vertex(triangles(t, 2));
    return 0.5 * ((b - a).x() * (c - a).y() - (b - a).y() * (c - a).x());
}

double TriMesh::total_area() const {
    double s = 0.0;
    for (int t = 0; t < triangle_count(); ++t) s += triangle_area(t);
    return s;
}

Vec2 TriMesh::centroid(int t) const {
    return (vertex(triangles(t, 0)) + vertex(triangles(t, 1)) + vertex(triangles(t, 2))) / 3.0;
}

Eigen::Matrix2d TriMesh::jacobian(int t) const {
    Eigen::Matrix2d J;
    const Vec2 a = vertex(triangles(t, 0));
    J.col(0) = vertex(triangles(t, 1)) - a;
    J.col(1) = vertex(triangles(t, 2)) - a;
    return J;
}

namespace {

// ---------------------------------------------------------------------------
// Incremental Delaunay triangulation with Lawson flips and constrained-edge
// recovery. Scales to the point counts this project needs (tens of thousands).
// ---------------------------------------------------------------------------

struct DTri {
    std::array<int, 3> v{-1, -1, -1};
    std::array<int, 3> n{-1, -1, -1};  // n[k]: neighbor across the edge opposite v[k]
    bool alive = true;
};

class Delaunay {
public:
    explicit Delaunay(const std::vector<Vec2>& points)
        : pts_(points), nreal_(static_cast<int>(points.size())) {
        double scale = 1.0;
        for (const Vec2& p : pts_) scale = std::max({scale, std::abs(p.x()), std::abs(p.y())});
        eps_ = 1e-12 * scale * scale;
        const double big = 64.0 * scale;
        pts_.emplace_back(-3.3 * big, -3.0 * big);
        pts_.emplace_back(3.5 * big, -2.9 * big);
        pts_.emplace_back(0.07 * big, 3.4 * big);
        DTri t;
        t.v = {nreal_, nreal_ + 1, nreal_ + 2};
        tris_.push_back(t);
        for (int i = 0; i < nreal_; ++i) insert(i);
    }

    void enforce_edge(int a, int b) {
        int guard = 0;
        while (!edge_exists(a, b)) {
            if (++guard > 10000)
                throw std::runtime_error("mesh2d: failed to recover a boundary edge");
            flip_one_crossing(a, b);
        }
    }

    // Triangles not touching the super vertices, filtered by a centroid predicate.
    template <class Keep>
    void extract(Eigen::MatrixX3i& triangles, const Keep& keep) const {
        std::vector<std::array<int, 3>> out;
        for (const DTri& t : tris_) {
            if (!t.alive) continue;
            if (t.v[0] >= nreal_ || t.v[1] >= nreal_ || t.v[2] >= nreal_) continue;
            const Vec2 c = (pts_[t.v[0]] + pts_[t.v[1]] + pts_[t.v[2]]) / 3.0;
            if (!keep(c)) continue;
            out.push_back(t.v);
        }
        triangles.resize(static_cast<Eigen::Index>(out.size()), 3);
        for (size_t i = 0; i < out.size(); ++i)
            triangles.row(static_cast<Eigen::Index>(i)) << out[i][0], out[i][1], out[i][2];
    }

private:
    std::vector<Vec2> pts_;
    std::vector<DTri> tris_;
    int nreal_ = 0;
    int last_tri_ = 0;
    double eps_ = 1e-12;

    static double orient(const Vec2& a, const Vec2& b, const Vec2& c) {
        const long double acx = (long double)a.x() - (long double)c.x();
        const long double bcx = (long double)b.x() - (long double)c.x();
        const long double acy = (long double)a.y() - (long double)c.y();
        const long double bcy = (long double)b.y() - (long double)c.y();
        return static_cast<double>(acx * bcy - acy * bcx);
    }

    // Strictly-inside-circumcircle test for CCW triangle (a,b,c).
    bool incircle(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) const {
        const long double adx = a.x() - d.x(), ady = a.y() - d.y();
        const long double bdx = b.x() - d.x(), bdy = b.y() - d.y();
        const long double cdx = c.x() - d.x(), cdy = c.y() - d.y();
        const long double ad = adx * adx + ady * ady;
        const long double bd = bdx * bdx + bdy * bdy;
        const long double cd = cdx * cdx + cdy * cdy;
        const long double det = adx * (bdy * cd - bd * cdy) - ady * (bdx * cd - bd * cdx) +
                                ad * (bdx * cdy - bdy * cdx);
        return det > (long double)eps_ * eps_;
    }

    static int edge_in_tri(const DTri& t, int a, int b) {
        for (int k = 0; k < 3; ++k) {
            const int u = t.v[(k + 1) % 3], w = t.v[(k + 2) % 3];
            if ((u == a && w == b) || (u == b && w == a)) return k;
        }
        return -1;
    }

    int edge_index_of(const DTri& t, int a, int b) const {
        const int k = edge_in_tri(t, a, b);
        if (k < 0) throw std::logic_error("mesh2d: adjacency corrupted");
        return k;
    }

    void set_neighbor(int tri, int a, int b, int nb) {
        if (tri < 0) return;
        const int k = edge_in_tri(tris_[tri], a, b);
        if (k >= 0) tris_[tri].n[k] = nb;
    }

    int locate(const Vec2& p, int hint) const {
        int cur = hint;
        if (cur < 0 || cur >= static_cast<int>(tris_.size()) || !tris_[cur].alive) cur = 0;
        for (int step = 0; step < 4 * static_cast<int>(tris_.size()); ++step) {
            const DTri& t = tris_[cur];
            int next = -1;
            for (int k = 0; k < 3; ++k) {
                if (orient(pts_[t.v[(k + 1) % 3]], pts_[t.v[(k + 2) % 3]], p) < -eps_) {
                    next = t.n[k];
                    break;
                }
            }
            if (next < 0) return cur;
            cur = next;
        }
        // Walk failed: exhaustive scan.
        for (int i = 0; i < static_cast<int>(tris_.size()); ++i) {
            const DTri& t = tris_[i];
            if (!t.alive) continue;
            bool in = true;
            for (int k = 0; k < 3 && in; ++k)
                in = orient(pts_[t.v[(k + 1) % 3]], pts_[t.v[(k + 2) % 3]], p) >= -eps_;
            if (in) return i;
        }
        throw std::runtime_error("mesh2d: point location failed");
    }

    // Bowyer-Watson cavity insertion. A point lying exactly on an interior edge
    // is strictly inside both adjacent circumcircles, so no special case arises.
    std::vector<int> mark_;
    int epoch_ = 0;

    bool marked(int ti) const { return ti < static_cast<int>(mark_.size()) && mark_[ti] == epoch_; }
    void set_mark(int ti) {
        if (ti >= static_cast<int>(mark_.size())) mark_.resize(tris_.size() + 8, -1);
        mark_[ti] = epoch_;
    }

    void insert(int ip) {
        const Vec2& p = pts_[ip];
        const int seed = locate(p, last_tri_);

        ++epoch_;
        std::vector<int> cavity;
        std::vector<int> stack{seed};
        set_mark(seed);
        while (!stack.empty()) {
            const int ti = stack.back();
            stack.pop_back();
            cavity.push_back(ti);
            for (int k = 0; k < 3; ++k) {
                const int nb = tris_[ti].n[k];
                if (nb < 0 || marked(nb)) continue;
                const DTri& t = tris_[nb];
                if (incircle(pts_[t.v[0]], pts_[t.v[1]], pts_[t.v[2]], p)) {
                    set_mark(nb);
                    stack.push_back(nb);
                }
            }
        }

        // Directed boundary edges of the cavity, oriented as seen from inside.
        struct Rim {
            int u, w, outside;
        };
        std::vector<Rim> rim;
        for (int pass = 0;; ++pass) {
            rim.clear();
            bool grown = false;
            for (size_t idx = 0; idx < cavity.size(); ++idx) {
                const int ti = cavity[idx];
                for (int k = 0; k < 3; ++k) {
                    const int nb = tris_[ti].n[k];
                    if (nb >= 0 && marked(nb)) continue;
                    const int u = tris_[ti].v[(k + 1) % 3];
                    const int w = tris_[ti].v[(k + 2) % 3];
                    if (orient(pts_[u], pts_[w], p) <= eps_) {
                        // Rim edge (nearly) collinear with p: absorb the neighbor
                        // to keep the cavity star-shaped.
                        if (nb >= 0) {
                            set_mark(nb);
                            cavity.push_back(nb);
                            grown = true;
                            continue;
                        }
                        throw std::runtime_error("mesh2d: degenerate cavity rim");
                    }
                    rim.push_back({u, w, nb});
                }
                if (grown) break;
            }
            if (!grown) break;
            if (pass > 64) throw std::runtime_error("mesh2d: cavity failed to stabilize");
        }

        // Retriangulate the cavity as a fan around ip, reusing dead slots.
        std::vector<int> slots(rim.size());
        size_t reuse = 0;
        for (size_t i = 0; i < rim.size(); ++i) {
            if (reuse < cavity.size()) {
                slots[i] = cavity[reuse++];
            } else {
                slots[i] = static_cast<int>(tris_.size());
                tris_.push_back({});
            }
        }
        for (size_t i = reuse; i < cavity.size(); ++i) tris_[cavity[i]].alive = false;

        std::map<int, int> start_to_slot;  // rim start vertex -> new triangle
        for (size_t i = 0; i < rim.size(); ++i) start_to_slot[rim[i].u] = slots[i];
        for (size_t i = 0; i < rim.size(); ++i) {
            DTri& t = tris_[slots[i]];
            t.alive = true;
            t.v = {ip, rim[i].u, rim[i].w};
            // n[0]: opposite ip, the rim edge; n[1]: opposite u, edge (w, ip);
            // n[2]: opposite w, edge (ip, u).
            t.n[0] = rim[i].outside;
            const auto next = start_to_slot.find(rim[i].w);
            const auto prev_tri = [&]() -> int {
                for (size_t j = 0; j < rim.size(); ++j)
                    if (rim[j].w == rim[i].u) return slots[j];
                return -1;
            };
            t.n[1] = next != start_to_slot.end() ? next->second : -1;
            t.n[2] = prev_tri();
            set_neighbor(rim[i].outside, rim[i].u, rim[i].w, slots[i]);
        }
        last_tri_ = slots.empty() ? 0 : slots[0];
    }

    // Flip the shared edge (u,w) of CCW triangles t1=(a,u,w) and t2=(d,w,u)
    // into (a,d); valid when the quad (a,u,d,w) is strictly convex.
    void flip(int ti, int k1) {
        DTri& t1 = tris_[ti];
        const int nb = t1.n[k1];
        const int a = t1.v[k1];
        const int u = t1.v[(k1 + 1) % 3];
        const int w = t1.v[(k1 + 2) % 3];
        DTri& t2 = tris_[nb];
        const int k2 = edge_index_of(t2, u, w);
        const int d = t2.v[k2];

        const int n1wa = t1.n[(k1 + 1) % 3];
        const int n1au = t1.n[(k1 + 2) % 3];
        const int n2ud = t2.n[edge_index_of(t2, u, d)];
        const int n2dw = t2.n[edge_index_of(t2, d, w)];

        t1.v = {a, u, d};
        t1.n = {n2ud, nb, n1au};
        t2.v = {a, d, w};
        t2.n = {n2dw, n1wa, ti};
        set_neighbor(n2ud, u, d, ti);
        set_neighbor(n1wa, w, a, nb);
    }

    bool edge_exists(int a, int b) const {
        for (const DTri& t : tris_) {
            if (!t.alive) continue;
            if (edge_in_tri(t, a, b) >= 0) return true;
        }
        return false;
    }

    static bool segments_cross(const Vec2& p, const Vec2& q, const Vec2& a, const Vec2& b) {
        const double o1 = orient(p, q, a);
        const double o2 = orient(p, q, b);
        const double o3 = orient(a, b, p);
        const double o4 = orient(a, b, q);
        return ((o1 > 0) != (o2 > 0)) && ((o3 > 0) != (o4 > 0));
    }

    void flip_one_crossing(int a, int b) {
        const Vec2& pa = pts_[a];
        const Vec2& pb = pts_[b];
        for (int ti = 0; ti < static_cast<int>(tris_.size()); ++ti) {
            const DTri& t = tris_[ti];
            if (!t.alive) continue;
            for (int k = 0; k < 3; ++k) {
                const int u = t.v[(k + 1) % 3];
                const int w = t.v[(k + 2) % 3];
                if (u == a || u == b || w == a || w == b) continue;
                if (!segments_cross(pa, pb, pts_[u], pts_[w])) continue;
                const int nb = t.n[k];
                if (nb < 0) continue;
                const int k2 = edge_index_of(tris_[nb], u, w);
                const int apex1 = t.v[k];
                const int apex2 = tris_[nb].v[k2];
                // Flip only strictly convex quads.
                if ((orient(pts_[apex1], pts_[apex2], pts_[u]) > 0) ==
                    (orient(pts_[apex1], pts_[apex2], pts_[w]) > 0))
                    continue;
                flip(ti, k);
                return;
            }
        }
        throw std::runtime_error("mesh2d: no flippable edge crossing a constraint");
    }
};

// A closed loop of point indices plus its tag.
struct Loop {
    std::vector<int> ids;
    BoundaryTag tag = BoundaryTag::outer;
    int hole_index = -1;
};

struct PointSet {
    std::vector<Vec2> points;
    std::vector<Loop> loops;

    int add(const Vec2& p) {
        points.push_back(p);
        return static_cast<int>(points.size()) - 1;
    }
};

std::vector<Vec2> domain_loop_points(SectionKind kind, double radius,
                                     const Eigen::MatrixX2d& vertices, const Vec2& center,
                                     double scale, double target) {
    std::vector<Vec2> out;
    if (kind == SectionKind::disk) {
        const double R = radius * scale;
        const int n = std::max(16, static_cast<int>(std::ceil(2.0 * M_PI * R / target)));
        out.reserve(n);
        for (int k = 0; k < n; ++k) {
            const double th = 2.0 * M_PI * k / n;
            out.push_back(center + R * Vec2(std::cos(th), std::sin(th)));
        }
    } else {
        const Eigen::Index nv = vertices.rows();
        for (Eigen::Index i = 0; i < nv; ++i) {
            const Vec2 a = center + scale * vertices.row(i).transpose();
            const Vec2 b = center + scale * vertices.row((i + 1) % nv).transpose();
            const int nseg = std::max(1, static_cast<int>(std::ceil((b - a).norm() / target)));
            for (int s = 0; s < nseg; ++s) out.push_back(a + (b - a) * (double(s) / nseg));
        }
    }
    return out;
}

constexpr double kGradeRatio = 0.7;

std::vector<Vec2> grading_points(const Vec2& anchor, double target, double* outer_radius) {
    // Rings with geometrically shrinking spacing, innermost ~ target/16.
    const int K = static_cast<int>(std::ceil(std::log(16.0) / std::log(1.0 / kGradeRatio)));
    std::vector<double> size(K + 1);
    for (int k = 1; k <= K; ++k) size[k] = target * std::pow(kGradeRatio, k);
    std::vector<double> rho(K + 1);
    rho[K] = size[K];
    for (int k = K - 1; k >= 1; --k) rho[k] = rho[k + 1] + size[k + 1];
    std::vector<Vec2> out;
    for (int k = 1; k <= K; ++k) {
        const int m = std::max(6, static_cast<int>(std::ceil(2.0 * M_PI * rho[k] / size[k])));
        for (int i = 0; i < m; ++i) {
            const double th = 2.0 * M_PI * i / m;
            out.push_back(anchor + rho[k] * Vec2(std::cos(th), std::sin(th)));
        }
    }
    *outer_radius = rho[1];
    return out;
}

TriMesh triangulate(const PointSet& ps, const PlateDomain& domain,
                    const std::vector<std::pair<Vec2, double>>& hole_disks,
                    const std::vector<Eigen::MatrixX2d>& hole_polys) {
    Delaunay del(ps.points);
    // Recover every loop segment.
    std::map<std::pair<int, int>, std::pair<BoundaryTag, int>> constraint;
    for (const Loop& loop : ps.loops) {
        const int n = static_cast<int>(loop.ids.size());
        for (int i = 0; i < n; ++i) {
            const int a = loop.ids[i];
            const int b = loop.ids[(i + 1) % n];
            del.enforce_edge(a, b);
            constraint[{std::min(a, b), std::max(a, b)}] = {loop.tag, loop.hole_index};
        }
    }

    auto keep = [&](const Vec2& c) {
        if (!domain.contains(c)) return false;
        for (const auto& [center, rad] : hole_disks)
            if ((c - center).norm() < rad) return false;
        for (const auto& poly : hole_polys)
            if (polygon_contains(poly, c)) return false;
        return true;
    };

    TriMesh mesh;
    del.extract(mesh.triangles, keep);
    mesh.vertices.resize(static_cast<Eigen::Index>(ps.points.size()), 2);
    for (size_t i = 0; i < ps.points.size(); ++i)
        mesh.vertices.row(static_cast<Eigen::Index>(i)) = ps.points[i].transpose();

    // Boundary edges = edges incident to exactly one kept triangle.
    std::map<std::pair<int, int>, int> edge_count;
    for (int t = 0; t < mesh.triangle_count(); ++t) {
        for (int k = 0; k < 3; ++k) {
            const int a = mesh.triangles(t, k);
            const int b = mesh.triangles(t, (k + 1) % 3);
            ++edge_count[{std::min(a, b), std::max(a, b)}];
        }
    }
    for (const auto& [edge, cnt] : edge_count) {
        if (cnt != 1) continue;
        auto it = constraint.find(edge);
        if (it == constraint.end())
            throw std::runtime_error("mesh2d: boundary edge does not lie on a constraint loop");
        mesh.boundary.push_back({edge.first, edge.second, it->second.first, it->second.second});
    }

    // Drop unreferenced vertices (super triangle artifacts never appear, but
    // hole interiors can leave orphans) and compact indices.
    std::vector<int> remap(mesh.vertex_count(), -1);
    int nv = 0;
    for (int t = 0; t < mesh.triangle_count(); ++t)
        for (int k = 0; k < 3; ++k) {
            int& idx = remap[mesh.triangles(t, k)];
            if (idx < 0) idx = nv++;
        }
    Eigen::MatrixX2d verts(nv, 2);
    for (int i = 0; i < mesh.vertex_count(); ++i)
        if (remap[i] >= 0) verts.row(remap[i]) = mesh.vertices.row(i);
    for (int t = 0; t < mesh.triangle_count(); ++t)
        for (int k = 0; k < 3; ++k) mesh.triangles(t, k) = remap[mesh.triangles(t, k)];
    for (BoundaryEdge& e : mesh.boundary) {
        e.a = remap[e.a];
        e.b = remap[e.b];
    }
    mesh.vertices = std::move(verts);

    // Orient positively.
    for (int t = 0; t < mesh.triangle_count(); ++t)
        if (mesh.triangle_area(t) < 0.0) std::swap(mesh.triangles(t, 1), mesh.triangles(t, 2));
    for (int t = 0; t < mesh.triangle_count(); ++t)
        if (mesh.triangle_area(t) <= 0.0)
            throw std::runtime_error("mesh2d: degenerate triangle in output");
    return mesh;
}

TriMesh build_plate_mesh(const PlateDomain& domain, double target, bool grade,
                         const std::vector<CrossSection>* rods, double h) {
    if (!(target > 0.0)) throw std::invalid_argument("mesh_plate: target size must be positive");
    if (domain.kind == SectionKind::polygon &&
        (domain.vertices.rows() < 3 || polygon_area(domain.vertices) <= 0.0))
        throw std::invalid_argument("mesh_plate: degenerate plate polygon");

    PointSet ps;
    Loop outer;
    outer.tag = BoundaryTag::outer;
    for (const Vec2& p :
         domain_loop_points(domain.kind, domain.radius, domain.vertices, Vec2::Zero(), 1.0, target))
        outer.ids.push_back(ps.add(p));
    ps.loops.push_back(outer);

    std::vector<std::pair<Vec2, double>> hole_disks;
    std::vector<Eigen::MatrixX2d> hole_polys;
    std::vector<std::pair<Vec2, double>> keepout;  // lattice exclusion disks

    if (rods) {
        for (size_t j = 0; j < rods->size(); ++j) {
            const CrossSection& s = (*rods)[j];
            const Vec2 pj = domain.anchors.row(static_cast<Eigen::Index>(j)).transpose();
            const double local =
                std::min(target, 2.0 * M_PI * h * s.circumradius() / 12.0);
            Loop hl;
            hl.tag = BoundaryTag::hole;
            hl.hole_index = static_cast<int>(j);
            for (const Vec2& p :
                 domain_loop_points(s.kind, s.radius, s.vertices, pj, h, local))
                hl.ids.push_back(ps.add(p));
            ps.loops.push_back(hl);
            if (s.kind == SectionKind::disk) {
                hole_disks.emplace_back(pj, h * s.radius);
            } else {
                Eigen::MatrixX2d poly = s.vertices * h;
                poly.rowwise() += pj.transpose();
                hole_polys.push_back(poly);
            }
            keepout.emplace_back(pj, h * s.circumradius() + 0.6 * local);
        }
    }

    const int J = domain.anchor_count();
    for (int j = 0; j < J; ++j) {
        const Vec2 pj = domain.anchors.row(j).transpose();
        if (rods) continue;  // perforated variant: anchors sit inside the holes
        if (grade) {
            if (domain.boundary_distance(pj) < 3.0 * target)
                throw std::invalid_argument(
                    "mesh_plate: anchor too close to the boundary for grading");
            double outer_radius = 0.0;
            for (const Vec2& p : grading_points(pj, target, &outer_radius)) ps.add(p);
            keepout.emplace_back(pj, outer_radius + 0.55 * target);
        }
        ps.add(pj);
        if (!grade) keepout.emplace_back(pj, 0.55 * target);
    }

    // Hex lattice interior fill.
    Vec2 lo, hi;
    if (domain.kind == SectionKind::disk) {
        lo = Vec2(-domain.radius, -domain.radius);
        hi = Vec2(domain.radius, domain.radius);
    } else {
        lo = domain.vertices.colwise().minCoeff().transpose();
        hi = domain.vertices.colwise().maxCoeff().transpose();
    }
    const double dy = target * std::sqrt(3.0) / 2.0;
    int row = 0;
    for (double y = lo.y() + 0.5 * dy; y < hi.y(); y += dy, ++row) {
        const double x0 = lo.x() + ((row % 2) ? 0.75 : 0.25) * target;
        for (double x = x0; x < hi.x(); x += target) {
            const Vec2 p(x, y);
            if (!domain.contains(p)) continue;
            if (domain.boundary_distance(p) < 0.55 * target) continue;
            bool blocked = false;
            for (const auto& [c, r] : keepout)
                if ((p - c).norm() < r) {
                    blocked = true;
                    break;
                }
            if (blocked) continue;
            ps.add(p);
        }
    }

    return triangulate(ps, domain, hole_disks, hole_polys);
}

}  // namespace

TriMesh mesh_plate(const PlateDomain& domain, double target_size, bool grade_near_anchors) {
    return build_plate_mesh(domain, target_size, grade_near_anchors, nullptr, 0.0);
}

TriMesh mesh_plate_perforated(const PlateDomain& domain, const std::vector<CrossSection>& rods,
                              double h, double target_size, bool grade_near_anchors) {
    if (static_cast<int>(rods.size()) != domain.anchor_count())
        throw std::invalid_argument("mesh_plate_perforated: rod/anchor count mismatch");
    return build_plate_mesh(domain, target_size, grade_near_anchors, &rods, h);
}

TriMesh mesh_disk_structured(double radius, int rings, double grading_exponent) {
    if (rings < 1) throw std::invalid_argument("mesh_disk_structured: rings must be >= 1");
    TriMesh mesh;
    std::vector<Vec2> pts;
    std::vector<int> ring_start(rings + 1, 0);
    pts.emplace_back(0.0, 0.0);
    for (int i = 1; i <= rings; ++i) {
        ring_start[i] = static_cast<int>(pts.size());
        const int m = 6 * i;
        const double r = radius * std::pow(static_cast<double>(i) / rings, grading_exponent);
        for (int k = 0; k < m; ++k) {
            const double th = 2.0 * M_PI * k / m;
            pts.emplace_back(r * std::cos(th), r * std::sin(th));
        }
    }
    std::vector<std::array<int, 3>> tris;
    // Center fan.
    for (int k = 0; k < 6; ++k)
        tris.push_back({0, ring_start[1] + k, ring_start[1] + (k + 1) % 6});
    // Sector-wise staircase between rings i-1 and i; identical in each of the
    // six sectors so the triangulation is invariant under the half turn.
    for (int i = 2; i <= rings; ++i) {
        const int mo = 6 * i, mi = 6 * (i - 1);
        for (int s = 0; s < 6; ++s) {
            int o = s * i;        // outer index within ring
            int in = s * (i - 1); // inner index within ring
            const int o_end = (s + 1) * i;
            const int in_end = (s + 1) * (i - 1);
            while (o < o_end || in < in_end) {
                const int oi = ring_start[i] + o % mo;
                const int oi1 = ring_start[i] + (o + 1) % mo;
                const int ii = ring_start[i - 1] + in % mi;
                const int ii1 = ring_start[i - 1] + (in + 1) % mi;
                // Advance along the ring whose next node trails in angle.
                const bool advance_outer =
                    in >= in_end || (o < o_end && (o + 1) * (i - 1) <= (in + 1) * i);
                if (advance_outer) {
                    tris.push_back({oi, oi1, ii});
                    ++o;
                } else {
                    tris.push_back({oi, ii1, ii});
                    ++in;
                }
            }
        }
    }
    mesh.vertices.resize(static_cast<Eigen::Index>(pts.size()), 2);
    for (size_t i = 0; i < pts.size(); ++i)
        mesh.vertices.row(static_cast<Eigen::Index>(i)) = pts[i].transpose();
    mesh.triangles.resize(static_cast<Eigen::Index>(tris.size()), 3);
    for (size_t t = 0; t < tris.size(); ++t)
        mesh.triangles.row(static_cast<Eigen::Index>(t)) << tris[t][0], tris[t][1], tris[t][2];
    for (int t = 0; t < mesh.triangle_count(); ++t)
        if (mesh.triangle_area(t) < 0.0) std::swap(mesh.triangles(t, 1), mesh.triangles(t, 2));
    const int m = 6 * rings;
    for (int k = 0; k < m; ++k)
        mesh.boundary.push_back(
            {ring_start[rings] + k, ring_start[rings] + (k + 1) % m, BoundaryTag::outer, -1});
    return mesh;
}

TriLocator::TriLocator(const TriMesh& mesh) : mesh_(&mesh) {
    lo_ = mesh.vertices.colwise().minCoeff().transpose();
    hi_ = mesh.vertices.colwise().maxCoeff().transpose();
    const double span = std::max(hi_.x() - lo_.x(), hi_.y() - lo_.y());
    const int ncells = std::max(1, static_cast<int>(std::sqrt(mesh.triangle_count() / 2.0)));
    cell_ = span / ncells;
    nx_ = std::max(1, static_cast<int>(std::ceil((hi_.x() - lo_.x()) / cell_)));
    ny_ = std::max(1, static_cast<int>(std::ceil((hi_.y() - lo_.y()) / cell_)));
    buckets_.resize(static_cast<size_t>(nx_) * ny_);
    for (int t = 0; t < mesh.triangle_count(); ++t) {
        Vec2 tlo = mesh.vertex(mesh.triangles(t, 0));
        Vec2 thi = tlo;
        for (int k = 1; k < 3; ++k) {
            const Vec2 v = mesh.vertex(mesh.triangles(t, k));
            tlo = tlo.cwiseMin(v);
            thi = thi.cwiseMax(v);
        }
        const int ix0 = std::clamp(static_cast<int>((tlo.x() - lo_.x()) / cell_), 0, nx_ - 1);
        const int ix1 = std::clamp(static_cast<int>((thi.x() - lo_.x()) / cell_), 0, nx_ - 1);
        const int iy0 = std::clamp(static_cast<int>((tlo.y() - lo_.y()) / cell_), 0, ny_ - 1);
        const int iy1 = std::clamp(static_cast<int>((thi.y() - lo_.y()) / cell_), 0, ny_ - 1);
        for (int iy = iy0; iy <= iy1; ++iy)
            for (int ix = ix0; ix <= ix1; ++ix)
                buckets_[static_cast<size_t>(iy) * nx_ + ix].push_back(t);
    }
}

int TriLocator::cell_index(const Vec2& p) const {
    const int ix = std::clamp(static_cast<int>((p.x() - lo_.x()) / cell_), 0, nx_ - 1);
    const int iy = std::clamp(static_cast<int>((p.y() - lo_.y()) / cell_), 0, ny_ - 1);
    return iy * nx_ + ix;
}

namespace {
Eigen::Vector3d barycentric(const TriMesh& mesh, int t, const Vec2& p) {
    const Vec2 a = mesh.vertex(mesh.triangles(t, 0));
    const Eigen::Matrix2d J = mesh.jacobian(t);
    const Vec2 uv = J.partialPivLu().solve(p - a);
    return {1.0 - uv.x() - uv.y(), uv.x(), uv.y()};
}
}  // namespace

int TriLocator::find(const Vec2& p, Eigen::Vector3d* bary) const {
    const double tol = -1e-12;
    for (int t : buckets_[cell_index(p)]) {
        const Eigen::Vector3d b = barycentric(*mesh_, t, p);
        if (b.minCoeff() >= tol) {
            if (bary) *bary = b;
            return t;
        }
    }
    return -1;
}

int TriLocator::find_clamped(const Vec2& p, Eigen::Vector3d* bary) const {
    if (const int t = find(p, bary); t >= 0) return t;
    // Spiral outward over neighboring cells until candidates appear.
    const int cx = std::clamp(static_cast<int>((p.x() - lo_.x()) / cell_), 0, nx_ - 1);
    const int cy = std::clamp(static_cast<int>((p.y() - lo_.y()) / cell_), 0, ny_ - 1);
    int best = -1;
    double best_violation = std::numeric_limits<double>::max();
    Eigen::Vector3d best_b;
    for (int ring = 0; ring < std::max(nx_, ny_); ++ring) {
        for (int iy = std::max(0, cy - ring); iy <= std::min(ny_ - 1, cy + ring); ++iy)
            for (int ix = std::max(0, cx - ring); ix <= std::min(nx_ - 1, cx + ring); ++ix) {
                if (std::max(std::abs(ix - cx), std::abs(iy - cy)) != ring) continue;
                for (int t : buckets_[static_cast<size_t>(iy) * nx_ + ix]) {
                    const Eigen::Vector3d b = barycentric(*mesh_, t, p);
                    const double viol = -std::min(0.0, b.minCoeff());
                    if (viol < best_violation) {
                        best_violation = viol;
                        best = t;
                        best_b = b;
                    }
                }
            }
        if (best >= 0 && best_violation < 0.25) break;
    }
    if (best < 0) throw std::runtime_error("TriLocator: empty mesh");
    best_b = best_b.cwiseMax(0.0);
    best_b /= best_b.sum();
    if (bary) *bary = best_b;
    return best;
}

void write_mesh(std::ostream& os, const TriMesh& mesh) {
    os << "JMESH 1\n";
    os << mesh.vertex_count() << ' ' << mesh.triangle_count() << ' ' << mesh.boundary.size()
       << '\n';
    for (int i = 0; i < mesh.vertex_count(); ++i)
        os << format_double(mesh.vertices(i, 0)) << ' ' << format_double(mesh.vertices(i, 1))
           << '\n';
    for (int t = 0; t < mesh.triangle_count(); ++t)
        os << mesh.triangles(t, 0) << ' ' << mesh.triangles(t, 1) << ' ' << mesh.triangles(t, 2)
           << '\n';
    for (const BoundaryEdge& e : mesh.boundary) {
        const char* tag = e.tag == BoundaryTag::outer     ? "outer"
                          : e.tag == BoundaryTag::hole    ? "hole"
                                                          : "artificial";
        os << e.a << ' ' << e.b << ' ' << tag << ' ' << e.hole_index << '\n';
    }
}

void write_mesh_file(const std::string& path, const TriMesh& mesh) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path);
    write_mesh(os, mesh);
}

}  // namespace junction
