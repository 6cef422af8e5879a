#include "junction/poisson2d.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <cmath>
#include <ostream>
#include <set>
#include <stdexcept>

namespace junction {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

void assemble_stiffness(const TriMesh& mesh, std::vector<Triplet>& trips) {
    for (int t = 0; t < mesh.triangle_count(); ++t) {
        const Eigen::Matrix2d J = mesh.jacobian(t);
        const double area = 0.5 * J.determinant();
        const Eigen::Matrix2d Jinv = J.inverse();
        // gradients of the reference hats mapped to physical space
        Eigen::Matrix<double, 2, 3> grad;
        grad.col(1) = Jinv.transpose() * Vec2(1.0, 0.0);
        grad.col(2) = Jinv.transpose() * Vec2(0.0, 1.0);
        grad.col(0) = -grad.col(1) - grad.col(2);
        for (int i = 0; i < 3; ++i)
            for (int k = 0; k < 3; ++k)
                trips.emplace_back(mesh.triangles(t, i), mesh.triangles(t, k),
                                   area * grad.col(i).dot(grad.col(k)));
    }
}

Eigen::VectorXd assemble_load(const TriMesh& mesh, const ScalarFn& f, bool high_order) {
    const TriangleRule& rule = high_order ? triangle_rule_7point() : triangle_rule_midpoint3();
    Eigen::VectorXd F = Eigen::VectorXd::Zero(mesh.vertex_count());
    for (int t = 0; t < mesh.triangle_count(); ++t) {
        const Vec2 a = mesh.vertex(mesh.triangles(t, 0));
        const Vec2 b = mesh.vertex(mesh.triangles(t, 1));
        const Vec2 c = mesh.vertex(mesh.triangles(t, 2));
        const double area = mesh.triangle_area(t);
        for (Eigen::Index q = 0; q < rule.weights.size(); ++q) {
            const Eigen::Vector3d bary = rule.barycentric.row(q).transpose();
            const Vec2 p = bary[0] * a + bary[1] * b + bary[2] * c;
            const double w = area * rule.weights[q] * f(p);
            for (int k = 0; k < 3; ++k) F[mesh.triangles(t, k)] += w * bary[k];
        }
    }
    return F;
}

/// Nodal integrals of the hat functions: m_i = int phi_i (exact for P1).
Eigen::VectorXd hat_integrals(const TriMesh& mesh) {
    Eigen::VectorXd m = Eigen::VectorXd::Zero(mesh.vertex_count());
    for (int t = 0; t < mesh.triangle_count(); ++t) {
        const double third = mesh.triangle_area(t) / 3.0;
        for (int k = 0; k < 3; ++k) m[mesh.triangles(t, k)] += third;
    }
    return m;
}

Eigen::VectorXd boundary_flux_load(const TriMesh& mesh, const ScalarFn& g) {
    Eigen::VectorXd F = Eigen::VectorXd::Zero(mesh.vertex_count());
    const GaussRule& rule = gauss_legendre(4);
    for (const BoundaryEdge& e : mesh.boundary) {
        const Vec2 a = mesh.vertex(e.a);
        const Vec2 b = mesh.vertex(e.b);
        const double len = (b - a).norm();
        for (Eigen::Index q = 0; q < rule.nodes.size(); ++q) {
            const double s = 0.5 * (1.0 + rule.nodes[q]);
            const double w = 0.5 * len * rule.weights[q] * g(a + s * (b - a));
            F[e.a] += w * (1.0 - s);
            F[e.b] += w * s;
        }
    }
    return F;
}

double relative_residual(const SpMat& A, const Eigen::VectorXd& x, const Eigen::VectorXd& b) {
    const double nb = b.norm();
    if (nb == 0.0) return (A * x).norm();
    return (A * x - b).norm() / nb;
}

}  // namespace

FieldSampler::FieldSampler(FeField field) : field_(std::move(field)) {
    if (!field_.mesh) throw std::invalid_argument("FieldSampler: field has no mesh");
    locator_ = std::make_shared<TriLocator>(*field_.mesh);
}

double FieldSampler::value(const Vec2& p) const {
    Eigen::Vector3d bary;
    const int t = locator_->find_clamped(p, &bary);
    double v = 0.0;
    for (int k = 0; k < 3; ++k) v += bary[k] * field_.values[field_.mesh->triangles(t, k)];
    return v;
}

Vec2 FieldSampler::gradient(const Vec2& p) const {
    Eigen::Vector3d bary;
    const int t = locator_->find_clamped(p, &bary);
    const TriMesh& mesh = *field_.mesh;
    const Eigen::Matrix2d Jinv = mesh.jacobian(t).inverse();
    Eigen::Matrix<double, 2, 3> grad;
    grad.col(1) = Jinv.transpose() * Vec2(1.0, 0.0);
    grad.col(2) = Jinv.transpose() * Vec2(0.0, 1.0);
    grad.col(0) = -grad.col(1) - grad.col(2);
    Vec2 g = Vec2::Zero();
    for (int k = 0; k < 3; ++k) g += grad.col(k) * field_.values[mesh.triangles(t, k)];
    return g;
}

FeField solve_neumann_mean_zero(std::shared_ptr<const TriMesh> mesh, const ScalarFn& source,
                                const ScalarFn* boundary_flux, NeumannReport* report) {
    const int n = mesh->vertex_count();
    Eigen::VectorXd F = assemble_load(*mesh, source, true);
    if (boundary_flux) F += boundary_flux_load(*mesh, *boundary_flux);

    // Compatibility: total load must vanish; project otherwise (the mean part
    // of the source cannot be balanced by a pure Neumann problem).
    const double area = mesh->total_area();
    const double total = F.sum();
    double f_scale = integrate(*mesh, [&](const Vec2& p) { return std::abs(source(p)); });
    if (boundary_flux)
        f_scale +=
            boundary_flux_load(*mesh, [&](const Vec2& p) { return std::abs((*boundary_flux)(p)); })
                .sum();
    double subtracted_mean = 0.0;
    const Eigen::VectorXd m = hat_integrals(*mesh);
    if (std::abs(total) > 1e-8 * std::max(f_scale, 1e-300)) {
        subtracted_mean = total / area;
        F -= subtracted_mean * m;  // same as sourcing f - |w0|^-1 <f>_0
    }

    std::vector<Triplet> trips;
    assemble_stiffness(*mesh, trips);
    // Mean-zero constraint as a bordered (saddle) system; the stiffness block
    // alone is singular with the constant kernel.
    for (int i = 0; i < n; ++i) {
        trips.emplace_back(n, i, m[i]);
        trips.emplace_back(i, n, m[i]);
    }
    SpMat A(n + 1, n + 1);
    A.setFromTriplets(trips.begin(), trips.end());
    A.makeCompressed();

    Eigen::VectorXd rhs(n + 1);
    rhs.head(n) = F;
    rhs[n] = 0.0;

    Eigen::SparseLU<SpMat> lu;
    lu.analyzePattern(A);
    lu.factorize(A);
    if (lu.info() != Eigen::Success)
        throw std::runtime_error("solve_neumann_mean_zero: singular saddle system (broken mesh?)");
    Eigen::VectorXd x = lu.solve(rhs);

    double res = relative_residual(A, x, rhs);
    if (res > 1e-10) {
        Eigen::BiCGSTAB<SpMat> refine;
        refine.setTolerance(1e-12);
        refine.compute(A);
        x = refine.solveWithGuess(rhs, x);
        res = relative_residual(A, x, rhs);
        if (res > 1e-10)
            throw std::runtime_error("solve_neumann_mean_zero: residual above tolerance");
    }

    if (report) {
        report->subtracted_mean = subtracted_mean;
        report->residual = res;
    }
    FeField out;
    out.mesh = std::move(mesh);
    out.values = x.head(n);
    return out;
}

FeField solve_dirichlet(std::shared_ptr<const TriMesh> mesh, const ScalarFn& source) {
    const int n = mesh->vertex_count();
    std::set<int> fixed;
    for (const BoundaryEdge& e : mesh->boundary) {
        fixed.insert(e.a);
        fixed.insert(e.b);
    }
    std::vector<Triplet> trips;
    assemble_stiffness(*mesh, trips);
    Eigen::VectorXd F = assemble_load(*mesh, source, true);

    std::vector<Triplet> kept;
    kept.reserve(trips.size());
    for (const Triplet& t : trips) {
        const bool ri = fixed.count(static_cast<int>(t.row())) > 0;
        const bool ci = fixed.count(static_cast<int>(t.col())) > 0;
        if (!ri && !ci) kept.push_back(t);
    }
    for (int i : fixed) {
        kept.emplace_back(i, i, 1.0);
        F[i] = 0.0;
    }
    SpMat A(n, n);
    A.setFromTriplets(kept.begin(), kept.end());
    A.makeCompressed();

    Eigen::SimplicialLDLT<SpMat> ldlt(A);
    if (ldlt.info() != Eigen::Success)
        throw std::runtime_error("solve_dirichlet: factorization failed");
    Eigen::VectorXd x = ldlt.solve(F);
    double res = relative_residual(A, x, F);
    if (res > 1e-10) {
        Eigen::ConjugateGradient<SpMat, Eigen::Lower | Eigen::Upper> cg;
        cg.setTolerance(1e-12);
        cg.compute(A);
        x = cg.solveWithGuess(F, x);
        if (relative_residual(A, x, F) > 1e-10)
            throw std::runtime_error("solve_dirichlet: residual above tolerance");
    }
    FeField out;
    out.mesh = std::move(mesh);
    out.values = x;
    return out;
}

namespace {

/// Commutator source of the log splitting: with S = (2pi)^-1 ln(1/r) and a
/// radial cutoff chi, -Delta(chi S) = delta - c where
/// c = 2 grad chi . grad S + S Delta chi.
double commutator_source(const RadialCutoff& chi, const Vec2& d) {
    const double r = d.norm();
    if (r <= chi.r_on || r >= chi.r_off) return 0.0;
    const double inv2pi = 1.0 / (2.0 * M_PI);
    const double dchi = chi.d1(r);
    const double lap_chi = chi.d2(r) + dchi / r;
    return -2.0 * dchi * inv2pi / r + inv2pi * std::log(1.0 / r) * lap_chi;
}

/// Integral of chi(r) (2pi)^-1 ln(1/r) over the plane, done radially so the
/// mean-zero normalization of the reconstructed Green function is exact.
double cutoff_log_integral(const RadialCutoff& chi) {
    return panel_integrate(
        [&](double r) { return chi.value(r) * std::log(1.0 / std::max(r, 1e-300)) * r; }, 0.0,
        chi.r_off, 64, 16);
}

}  // namespace

GreenData green_functions(std::shared_ptr<const TriMesh> mesh, const Eigen::MatrixX2d& anchors,
                          GreenBc bc, double cutoff_radius) {
    const int J = static_cast<int>(anchors.rows());
    if (J == 0) throw std::invalid_argument("green_functions: no anchors");
    if (!(cutoff_radius > 0.0)) throw std::invalid_argument("green_functions: bad cutoff radius");

    GreenData out;
    out.bc = bc;
    out.anchors = anchors;
    out.cutoff_radius = cutoff_radius;
    const RadialCutoff chi = out.cutoff();
    const double area = mesh->total_area();
    const double chiS_integral = cutoff_log_integral(chi);

    for (int j = 0; j < J; ++j) {
        const Vec2 pj = anchors.row(j).transpose();
        auto source = [&chi, &area, bc, pj](const Vec2& p) {
            const double c = commutator_source(chi, p - pj);
            return bc == GreenBc::neumann_mean_zero ? c - 1.0 / area : c;
        };
        if (bc == GreenBc::neumann_mean_zero) {
            FeField g = solve_neumann_mean_zero(mesh, source);
            // shift so the reconstructed G_j has zero mean: <chi S> + <g> = 0
            g.values.array() -= chiS_integral / area;
            out.regular_parts.push_back(std::move(g));
        } else {
            out.regular_parts.push_back(solve_dirichlet(mesh, source));
        }
    }

    out.Gmatrix.resize(J, J);
    for (int j = 0; j < J; ++j) {
        for (int k = 0; k < J; ++k) {
            const Vec2 pk = anchors.row(k).transpose();
            double v = evaluate(out.regular_parts[j], pk);
            if (k != j) {
                const double r = (pk - anchors.row(j).transpose()).norm();
                v += chi.value(r) * std::log(1.0 / r) / (2.0 * M_PI);
            }
            out.Gmatrix(j, k) = v;
        }
    }
    return out;
}

double green_value(const GreenData& g, const std::vector<FieldSampler>& samplers, int j,
                   const Vec2& p) {
    const Vec2 d = p - g.anchors.row(j).transpose();
    const double r = d.norm();
    const RadialCutoff chi = g.cutoff();
    double v = samplers[j].value(p);
    if (r < chi.r_off && r > 0.0) v += chi.value(r) * std::log(1.0 / r) / (2.0 * M_PI);
    return v;
}

Vec2 green_gradient(const GreenData& g, const std::vector<FieldSampler>& samplers, int j,
                    const Vec2& p) {
    const Vec2 d = p - g.anchors.row(j).transpose();
    const double r = d.norm();
    const RadialCutoff chi = g.cutoff();
    Vec2 grad = samplers[j].gradient(p);
    if (r < chi.r_off && r > 0.0) {
        const double inv2pi = 1.0 / (2.0 * M_PI);
        const double radial = chi.d1(r) * inv2pi * std::log(1.0 / r) - chi.value(r) * inv2pi / r;
        grad += radial * d / r;
    }
    return grad;
}

double evaluate(const FeField& field, const Vec2& p) {
    TriLocator loc(*field.mesh);
    Eigen::Vector3d bary;
    const int t = loc.find(p, &bary);
    if (t < 0) throw std::domain_error("evaluate: point outside mesh");
    double v = 0.0;
    for (int k = 0; k < 3; ++k) v += bary[k] * field.values[field.mesh->triangles(t, k)];
    return v;
}

double integrate(const TriMesh& mesh, const ScalarFn& fn, bool high_order) {
    const TriangleRule& rule = high_order ? triangle_rule_7point() : triangle_rule_midpoint3();
    double sum = 0.0;
    for (int t = 0; t < mesh.triangle_count(); ++t) {
        const Vec2 a = mesh.vertex(mesh.triangles(t, 0));
        const Vec2 b = mesh.vertex(mesh.triangles(t, 1));
        const Vec2 c = mesh.vertex(mesh.triangles(t, 2));
        const double area = mesh.triangle_area(t);
        for (Eigen::Index q = 0; q < rule.weights.size(); ++q) {
            const Eigen::Vector3d bary = rule.barycentric.row(q).transpose();
            sum += area * rule.weights[q] * fn(bary[0] * a + bary[1] * b + bary[2] * c);
        }
    }
    return sum;
}

AnchorValue plate_anchor_value(const FeField& u_perp, const GreenData& green, int j,
                               const ScalarFn& source) {
    AnchorValue out;
    out.by_interpolation = evaluate(u_perp, green.anchors.row(j).transpose());
    const RadialCutoff chi = green.cutoff();
    const Vec2 pj = green.anchors.row(j).transpose();
    FieldSampler gj(green.regular_parts[j]);
    out.by_green_quadrature = integrate(
        *u_perp.mesh,
        [&](const Vec2& p) {
            const double r = (p - pj).norm();
            double G = gj.value(p);
            if (r > 0.0 && r < chi.r_off) G += chi.value(r) * std::log(1.0 / r) / (2.0 * M_PI);
            return G * source(p);
        },
        true);
    return out;
}

void write_field_csv(std::ostream& os, const FeField& field) {
    os << "vertex,x,y,value\n";
    for (int i = 0; i < field.mesh->vertex_count(); ++i)
        os << i << ',' << format_double(field.mesh->vertices(i, 0)) << ','
           << format_double(field.mesh->vertices(i, 1)) << ',' << format_double(field.values[i])
           << '\n';
}

void write_green_csv(std::ostream& os, const GreenData& green) {
    os << "j,k,G_jk\n";
    for (int j = 0; j < green.count(); ++j)
        for (int k = 0; k < green.count(); ++k)
            os << j + 1 << ',' << k + 1 << ',' << format_double(green.Gmatrix(j, k)) << '\n';
}

}  // namespace junction
