#include "junction/reference.hpp"

#include "junction/numeric.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace junction {

ReferenceSolution solve_reference(const ReferenceCase& rc, const AxisymMeshControls& controls) {
    if (rc.alpha != 0 && rc.alpha != 1)
        throw std::invalid_argument("solve_reference: alpha must be 0 or 1");
    const double r_socket = rc.a * rc.h;
    if (!(r_socket < rc.R_plate))
        throw std::invalid_argument("solve_reference: scaled section escapes the plate");

    ReferenceSolution sol;
    sol.config = rc;
    sol.mesh = axisym_lshape_mesh(r_socket, rc.R_plate, rc.h, rc.l, controls);

    const double contrast = rc.gamma * std::pow(rc.h, -rc.alpha);
    auto kappa = [r_socket, contrast](double r, double) {
        return r <= r_socket + 1e-14 ? contrast : 1.0;
    };
    // Sources per element region: the plate source acts on r > a h only (the
    // perforated plate), the rod source fills the rod including the socket
    // and carries the same h^-alpha scaling as the coefficient.
    const double rod_source_scale = std::pow(rc.h, -rc.alpha);
    auto source = [&, r_socket, rod_source_scale](double r, double z) {
        if (r <= r_socket + 1e-14) return rc.f1 ? rod_source_scale * rc.f1(z) : 0.0;
        return rc.f0 ? rc.f0(r) : 0.0;
    };

    AxisymBc bc;
    bc.dirichlet[AxisymFace::top] = [](double, double) { return 0.0; };
    if (rc.lateral == LateralBc::dirichlet)
        bc.dirichlet[AxisymFace::outer] = [](double, double) { return 0.0; };

    AxisymSolveInfo info;
    sol.u = axisym_solve(sol.mesh, kappa, source, bc, &info);
    sol.energy = info.energy;
    sol.dofs = info.dofs;
    sol.seconds = info.seconds;
    return sol;
}

ReferenceParts restrict_to_parts(const ReferenceSolution& sol) {
    const TriMesh& mesh = *sol.mesh.tri;
    const double r_socket = sol.mesh.r_in;
    const double contrast = sol.config.gamma * std::pow(sol.config.h, -sol.config.alpha);
    ReferenceParts parts;
    for (int t = 0; t < mesh.triangle_count(); ++t) {
        const Eigen::Matrix2d Jinv = mesh.jacobian(t).inverse();
        Eigen::Matrix<double, 2, 3> grad;
        grad.col(1) = Jinv.transpose() * Vec2(1.0, 0.0);
        grad.col(2) = Jinv.transpose() * Vec2(0.0, 1.0);
        grad.col(0) = -grad.col(1) - grad.col(2);
        Vec2 g = Vec2::Zero();
        for (int k = 0; k < 3; ++k) g += grad.col(k) * sol.u.values[mesh.triangles(t, k)];
        const Vec2 cen = mesh.centroid(t);
        const double cell = 2.0 * M_PI * cen.x() * mesh.triangle_area(t) * g.squaredNorm();
        if (cen.x() <= r_socket) {
            parts.rod_energy += cell;
        } else {
            parts.plate_energy += cell;
        }
    }
    parts.total_bilinear = parts.plate_energy + contrast * parts.rod_energy;
    return parts;
}

double plate_average(const ReferenceSolution& sol) {
    const double r_socket = sol.mesh.r_in;
    FieldSampler s(sol.u);
    double num = 0.0, den = 0.0;
    const TriMesh& mesh = *sol.mesh.tri;
    const TriangleRule& rule = triangle_rule_7point();
    for (int t = 0; t < mesh.triangle_count(); ++t) {
        const Vec2 cen = mesh.centroid(t);
        if (cen.x() <= r_socket || cen.y() > sol.config.h) continue;
        const Vec2 a = mesh.vertex(mesh.triangles(t, 0));
        const Vec2 b = mesh.vertex(mesh.triangles(t, 1));
        const Vec2 c = mesh.vertex(mesh.triangles(t, 2));
        const double area = mesh.triangle_area(t);
        for (Eigen::Index q = 0; q < rule.weights.size(); ++q) {
            const Eigen::Vector3d bary = rule.barycentric.row(q).transpose();
            const Vec2 p = bary[0] * a + bary[1] * b + bary[2] * c;
            const double w = 2.0 * M_PI * p.x() * area * rule.weights[q];
            num += w * s.value(p);
            den += w;
        }
    }
    return num / den;
}

Eigen::VectorXd rod_profile_average(const ReferenceSolution& sol, const Eigen::VectorXd& z) {
    Eigen::VectorXd out(z.size());
    for (Eigen::Index i = 0; i < z.size(); ++i)
        out[i] = rod_section_mean(sol.mesh, sol.u, z[i]);
    return out;
}

void write_reference_csv(std::ostream& os, const ReferenceSolution& sol) {
    os << "r,z,u\n";
    const TriMesh& mesh = *sol.mesh.tri;
    for (int i = 0; i < mesh.vertex_count(); ++i)
        os << format_double(mesh.vertices(i, 0)) << ',' << format_double(mesh.vertices(i, 1))
           << ',' << format_double(sol.u.values[i]) << '\n';
}

}  // namespace junction
