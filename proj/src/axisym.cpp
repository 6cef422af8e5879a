#include "junction/axisym.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cmath>
#include <set>
#include <stdexcept>

namespace junction {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

/// Monotone coordinate array on [a, b]: spacings start at h0 next to `a`,
/// expand by 1/ratio for `rings` steps, then by `growth`, capped so that the
/// span gets at least min_across intervals. The whole list is rescaled to end
/// exactly at b.
std::vector<double> graded_axis(double a, double b, double h0, double ratio, int rings,
                                double growth, double cap, int min_across) {
    const double span = b - a;
    if (!(span > 0.0)) throw std::invalid_argument("graded_axis: empty span");
    cap = std::min(cap, span / min_across);
    h0 = std::min(h0, cap);
    std::vector<double> steps;
    double s = h0, covered = 0.0;
    int k = 0;
    while (covered < span) {
        steps.push_back(s);
        covered += s;
        ++k;
        s = std::min(cap, k < rings ? s / ratio : s * growth);
    }
    const double scale = span / covered;
    std::vector<double> x{a};
    for (double st : steps) x.push_back(x.back() + st * scale);
    x.back() = b;
    return x;
}

std::vector<double> reversed_graded_axis(double a, double b, double h_at_b, double ratio,
                                         int rings, double growth, double cap, int min_across) {
    // fine end at `b` instead of `a`
    auto x = graded_axis(0.0, b - a, h_at_b, ratio, rings, growth, cap, min_across);
    std::vector<double> out;
    for (auto it = x.rbegin(); it != x.rend(); ++it) out.push_back(b - *it);
    return out;
}

struct GridBlock {
    std::vector<double> r, z;
};

}  // namespace

AxisymMesh axisym_lshape_mesh(double r_in, double r_out, double z_mid, double z_top,
                              const AxisymMeshControls& c) {
    if (!(0.0 < r_in && r_in < r_out && 0.0 < z_mid && z_mid < z_top))
        throw std::invalid_argument("axisym_lshape_mesh: bad geometry");
    const double refine = std::pow(2.0, c.level - 1);
    const double corner_scale = std::min(r_in, z_mid) / 3.0;
    const double h_corner = corner_scale * std::pow(c.corner_ratio, c.corner_rings) / refine;
    const double cap = c.far_size / refine;

    // Four graded 1D axes meeting at the re-entrant corner (r_in, z_mid).
    const auto r_rod = reversed_graded_axis(0.0, r_in, h_corner, c.corner_ratio, c.corner_rings,
                                            c.growth, cap, c.min_across);
    const auto r_plate = graded_axis(r_in, r_out, h_corner, c.corner_ratio, c.corner_rings,
                                     c.growth, cap, c.min_across);
    const auto z_low = reversed_graded_axis(0.0, z_mid, h_corner, c.corner_ratio, c.corner_rings,
                                            c.growth, cap, c.min_across);
    const auto z_high = graded_axis(z_mid, z_top, h_corner, c.corner_ratio, c.corner_rings,
                                    c.growth, cap, c.min_across);

    // Node layout: rod block spans all z levels, plate block only the low ones
    // (sharing the column at r = r_in).
    std::vector<double> z_all = z_low;
    z_all.insert(z_all.end(), z_high.begin() + 1, z_high.end());
    const int nr_rod = static_cast<int>(r_rod.size());
    const int nr_plate = static_cast<int>(r_plate.size());  // includes r_in
    const int nz_all = static_cast<int>(z_all.size());
    const int nz_low = static_cast<int>(z_low.size());

    auto mesh = std::make_shared<TriMesh>();
    const int rod_nodes = nr_rod * nz_all;
    const int plate_nodes = (nr_plate - 1) * nz_low;
    mesh->vertices.resize(rod_nodes + plate_nodes, 2);
    auto rod_id = [&](int i, int j) { return j * nr_rod + i; };
    auto plate_id = [&](int i, int j) { return rod_nodes + j * (nr_plate - 1) + (i - 1); };
    // i: radial index (plate block: 0 is the shared column), j: vertical index
    auto node_id = [&](bool plate, int i, int j) {
        if (!plate) return rod_id(i, j);
        return i == 0 ? rod_id(nr_rod - 1, j) : plate_id(i, j);
    };

    for (int j = 0; j < nz_all; ++j)
        for (int i = 0; i < nr_rod; ++i) mesh->vertices.row(rod_id(i, j)) << r_rod[i], z_all[j];
    for (int j = 0; j < nz_low; ++j)
        for (int i = 1; i < nr_plate; ++i)
            mesh->vertices.row(plate_id(i, j)) << r_plate[i], z_all[j];

    std::vector<std::array<int, 3>> tris;
    auto add_quad = [&](int v00, int v10, int v11, int v01) {
        tris.push_back({v00, v10, v11});
        tris.push_back({v00, v11, v01});
    };
    for (int j = 0; j + 1 < nz_all; ++j)
        for (int i = 0; i + 1 < nr_rod; ++i)
            add_quad(rod_id(i, j), rod_id(i + 1, j), rod_id(i + 1, j + 1), rod_id(i, j + 1));
    for (int j = 0; j + 1 < nz_low; ++j)
        for (int i = 0; i + 1 < nr_plate; ++i)
            add_quad(node_id(true, i, j), node_id(true, i + 1, j), node_id(true, i + 1, j + 1),
                     node_id(true, i, j + 1));
    mesh->triangles.resize(static_cast<Eigen::Index>(tris.size()), 3);
    for (size_t t = 0; t < tris.size(); ++t)
        mesh->triangles.row(static_cast<Eigen::Index>(t)) << tris[t][0], tris[t][1], tris[t][2];

    AxisymMesh out;
    out.tri = mesh;
    out.r_in = r_in;
    out.r_out = r_out;
    out.z_mid = z_mid;
    out.z_top = z_top;

    auto add_edge = [&](int a, int b, AxisymFace f) {
        mesh->boundary.push_back({a, b, BoundaryTag::artificial, -1});
        out.face.push_back(f);
    };
    for (int i = 0; i + 1 < nr_rod; ++i)
        add_edge(rod_id(i, 0), rod_id(i + 1, 0), AxisymFace::bottom);
    for (int i = 0; i + 1 < nr_plate; ++i)
        add_edge(node_id(true, i, 0), node_id(true, i + 1, 0), AxisymFace::bottom);
    for (int j = 0; j + 1 < nz_low; ++j)
        add_edge(node_id(true, nr_plate - 1, j), node_id(true, nr_plate - 1, j + 1),
                 AxisymFace::outer);
    for (int i = 0; i + 1 < nr_plate; ++i)
        add_edge(node_id(true, i, nz_low - 1), node_id(true, i + 1, nz_low - 1),
                 AxisymFace::mid_top);
    for (int j = nz_low - 1; j + 1 < nz_all; ++j)
        add_edge(rod_id(nr_rod - 1, j), rod_id(nr_rod - 1, j + 1), AxisymFace::inner_wall);
    for (int i = 0; i + 1 < nr_rod; ++i)
        add_edge(rod_id(i, nz_all - 1), rod_id(i + 1, nz_all - 1), AxisymFace::top);
    for (int j = 0; j + 1 < nz_all; ++j)
        add_edge(rod_id(0, j), rod_id(0, j + 1), AxisymFace::axis);

    for (int t = 0; t < mesh->triangle_count(); ++t)
        if (mesh->triangle_area(t) <= 0.0)
            throw std::runtime_error("axisym_lshape_mesh: degenerate element");
    return out;
}

AxisymMesh axisym_rect_mesh(double r0, double r1, double z0, double z1, int nr, int nz) {
    if (!(r1 > r0) || !(z1 > z0) || nr < 1 || nz < 1)
        throw std::invalid_argument("axisym_rect_mesh: bad rectangle");
    auto mesh = std::make_shared<TriMesh>();
    mesh->vertices.resize((nr + 1) * (nz + 1), 2);
    auto id = [&](int i, int j) { return j * (nr + 1) + i; };
    for (int j = 0; j <= nz; ++j)
        for (int i = 0; i <= nr; ++i)
            mesh->vertices.row(id(i, j)) << r0 + (r1 - r0) * i / nr, z0 + (z1 - z0) * j / nz;
    std::vector<std::array<int, 3>> tris;
    for (int j = 0; j < nz; ++j)
        for (int i = 0; i < nr; ++i) {
            tris.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
            tris.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
        }
    mesh->triangles.resize(static_cast<Eigen::Index>(tris.size()), 3);
    for (size_t t = 0; t < tris.size(); ++t)
        mesh->triangles.row(static_cast<Eigen::Index>(t)) << tris[t][0], tris[t][1], tris[t][2];

    AxisymMesh out;
    out.tri = mesh;
    out.r_in = r0;
    out.r_out = r1;
    out.z_mid = z0;
    out.z_top = z1;
    auto add_edge = [&](int a, int b, AxisymFace f) {
        mesh->boundary.push_back({a, b, BoundaryTag::artificial, -1});
        out.face.push_back(f);
    };
    for (int i = 0; i < nr; ++i) add_edge(id(i, 0), id(i + 1, 0), AxisymFace::bottom);
    for (int i = 0; i < nr; ++i) add_edge(id(i, nz), id(i + 1, nz), AxisymFace::top);
    for (int j = 0; j < nz; ++j) add_edge(id(0, j), id(0, j + 1), AxisymFace::inner_wall);
    for (int j = 0; j < nz; ++j) add_edge(id(nr, j), id(nr, j + 1), AxisymFace::outer);
    return out;
}

FeField axisym_solve(const AxisymMesh& am, const MeridianFn& kappa, const MeridianFn& source,
                     const AxisymBc& bc, AxisymSolveInfo* info) {
    const auto start = std::chrono::steady_clock::now();
    const TriMesh& mesh = *am.tri;
    const int n = mesh.vertex_count();

    std::vector<Triplet> trips;
    trips.reserve(static_cast<size_t>(mesh.triangle_count()) * 9);
    for (int t = 0; t < mesh.triangle_count(); ++t) {
        const Eigen::Matrix2d J = mesh.jacobian(t);
        const double area = 0.5 * J.determinant();
        const Eigen::Matrix2d Jinv = J.inverse();
        Eigen::Matrix<double, 2, 3> grad;
        grad.col(1) = Jinv.transpose() * Vec2(1.0, 0.0);
        grad.col(2) = Jinv.transpose() * Vec2(0.0, 1.0);
        grad.col(0) = -grad.col(1) - grad.col(2);
        const Vec2 cen = mesh.centroid(t);
        const double w = 2.0 * M_PI * cen.x() * area * kappa(cen.x(), cen.y());
        for (int i = 0; i < 3; ++i)
            for (int k = 0; k < 3; ++k)
                trips.emplace_back(mesh.triangles(t, i), mesh.triangles(t, k),
                                   w * grad.col(i).dot(grad.col(k)));
    }

    Eigen::VectorXd F = Eigen::VectorXd::Zero(n);
    // interior quadrature points: piecewise-defined sources never sample the
    // material interface itself
    const TriangleRule& rule = triangle_rule_7point();
    for (int t = 0; t < mesh.triangle_count(); ++t) {
        const Vec2 a = mesh.vertex(mesh.triangles(t, 0));
        const Vec2 b = mesh.vertex(mesh.triangles(t, 1));
        const Vec2 c = mesh.vertex(mesh.triangles(t, 2));
        const double area = mesh.triangle_area(t);
        for (Eigen::Index q = 0; q < rule.weights.size(); ++q) {
            const Eigen::Vector3d bary = rule.barycentric.row(q).transpose();
            const Vec2 p = bary[0] * a + bary[1] * b + bary[2] * c;
            const double w = 2.0 * M_PI * p.x() * area * rule.weights[q] * source(p.x(), p.y());
            for (int k = 0; k < 3; ++k) F[mesh.triangles(t, k)] += w * bary[k];
        }
    }
    // Neumann flux data on selected faces.
    if (!bc.flux.empty()) {
        const GaussRule& grule = gauss_legendre(4);
        for (size_t e = 0; e < mesh.boundary.size(); ++e) {
            auto it = bc.flux.find(am.face[e]);
            if (it == bc.flux.end()) continue;
            const Vec2 a = mesh.vertex(mesh.boundary[e].a);
            const Vec2 b = mesh.vertex(mesh.boundary[e].b);
            const double len = (b - a).norm();
            for (Eigen::Index q = 0; q < grule.nodes.size(); ++q) {
                const double s = 0.5 * (1.0 + grule.nodes[q]);
                const Vec2 p = a + s * (b - a);
                const double w = 0.5 * len * grule.weights[q] * 2.0 * M_PI * p.x() *
                                 it->second(p.x(), p.y());
                F[mesh.boundary[e].a] += w * (1.0 - s);
                F[mesh.boundary[e].b] += w * s;
            }
        }
    }

    // Dirichlet faces: prescribed values with a symmetric elimination.
    std::map<int, double> fixed;
    for (size_t e = 0; e < mesh.boundary.size(); ++e) {
        auto it = bc.dirichlet.find(am.face[e]);
        if (it == bc.dirichlet.end()) continue;
        for (int v : {mesh.boundary[e].a, mesh.boundary[e].b}) {
            const Vec2 p = mesh.vertex(v);
            fixed[v] = it->second(p.x(), p.y());
        }
    }
    if (fixed.empty())
        throw std::invalid_argument("axisym_solve: no Dirichlet face (singular problem)");

    SpMat K(n, n);
    K.setFromTriplets(trips.begin(), trips.end());
    K.makeCompressed();

    std::vector<Triplet> kept;
    kept.reserve(trips.size());
    for (const Triplet& t : trips) {
        const auto ri = fixed.find(static_cast<int>(t.row()));
        const auto ci = fixed.find(static_cast<int>(t.col()));
        if (ri == fixed.end() && ci == fixed.end()) {
            kept.push_back(t);
        } else if (ri == fixed.end() && ci != fixed.end()) {
            F[t.row()] -= t.value() * ci->second;
        }
    }
    for (const auto& [v, val] : fixed) {
        kept.emplace_back(v, v, 1.0);
        F[v] = val;
    }
    SpMat A(n, n);
    A.setFromTriplets(kept.begin(), kept.end());
    A.makeCompressed();

    Eigen::SimplicialLDLT<SpMat> ldlt(A);
    if (ldlt.info() != Eigen::Success)
        throw std::runtime_error("axisym_solve: factorization failed");
    Eigen::VectorXd x = ldlt.solve(F);
    // backward error ||Ax-b|| / (||A|| ||x|| + ||b||); one refinement sweep if needed
    const double Anorm = Eigen::VectorXd(A.cwiseAbs() * Eigen::VectorXd::Ones(n)).maxCoeff();
    auto backward = [&](const Eigen::VectorXd& v) {
        return (A * v - F).norm() / (Anorm * v.norm() + F.norm() + 1e-300);
    };
    double res = backward(x);
    for (int sweep = 0; sweep < 3 && res > 1e-10; ++sweep) {
        x += ldlt.solve(F - A * x);
        res = backward(x);
    }
    if (res > 1e-10) {
        std::fprintf(stderr, "axisym_solve: backward error %.3e\n", res);
        throw std::runtime_error("axisym_solve: residual above tolerance");
    }

    if (info) {
        info->energy = x.dot(K * x);
        info->dofs = n;
        info->residual = res;
        info->seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
    FeField out;
    out.mesh = am.tri;
    out.values = x;
    return out;
}

double axisym_integrate(const AxisymMesh& am, const MeridianFn& fn, bool high_order) {
    const TriMesh& mesh = *am.tri;
    const TriangleRule& rule = high_order ? triangle_rule_7point() : triangle_rule_midpoint3();
    double sum = 0.0;
    for (int t = 0; t < mesh.triangle_count(); ++t) {
        const Vec2 a = mesh.vertex(mesh.triangles(t, 0));
        const Vec2 b = mesh.vertex(mesh.triangles(t, 1));
        const Vec2 c = mesh.vertex(mesh.triangles(t, 2));
        const double area = mesh.triangle_area(t);
        for (Eigen::Index q = 0; q < rule.weights.size(); ++q) {
            const Eigen::Vector3d bary = rule.barycentric.row(q).transpose();
            const Vec2 p = bary[0] * a + bary[1] * b + bary[2] * c;
            sum += 2.0 * M_PI * p.x() * area * rule.weights[q] * fn(p.x(), p.y());
        }
    }
    return sum;
}

double rod_section_mean(const AxisymMesh& am, const FeField& u, double z) {
    FieldSampler s(u);
    const int n = 32;
    double num = 0.0, den = 0.0;
    const GaussRule& rule = gauss_legendre(n);
    for (int q = 0; q < n; ++q) {
        const double r = 0.5 * am.r_in * (1.0 + rule.nodes[q]);
        const double w = 0.5 * am.r_in * rule.weights[q] * 2.0 * M_PI * r;
        num += w * s.value({r, z});
        den += w;
    }
    return num / den;
}

}  // namespace junction
