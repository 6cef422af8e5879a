#include "junction/matching.hpp"

#include <cmath>

namespace junction {

namespace {

constexpr double kInv2Pi = 1.0 / (2.0 * M_PI);

Eigen::MatrixXd symmetric_part_shift(const MatchingInputs& in) {
    // G - L, the ln-h-independent part of M. The diagonal combines the
    // capacity of the section with the conductance of the whole rod: matching
    // the junction value U_hash(0) - A_j l_j/(gamma_j |w_j|) of the averaged
    // rod solution against the constant term of the plate expansion gives
    //   L_jj = (2 pi)^-1 ln c_log(w_j) - l_j / (gamma_j |w_j|),
    // and the end flux realized by the rod tail is -gamma |w| dU/dz(0) = -A_j
    // (the sink of strength -A_j that the plate drains into rod j).
    const int J = in.rod_count();
    Eigen::MatrixXd S = 0.5 * (in.G + in.G.transpose());
    for (int j = 0; j < J; ++j)
        S(j, j) -= kInv2Pi * std::log(in.c_log[j]) - in.l[j] / (in.gamma[j] * in.area[j]);
    return S;
}

}  // namespace

void MatchingInputs::check_dimensions() const {
    const int J = rod_count();
    if (J == 0) throw std::invalid_argument("matching: no rods");
    if (G.rows() != J || G.cols() != J || c_log.size() != J || gamma.size() != J ||
        area.size() != J || U_hash0.size() != J || U_bot_P.size() != J)
        throw std::invalid_argument("matching: inconsistent dimensions");
    if (!(ln_h < 0.0)) throw std::invalid_argument("matching: ln h must be negative");
}

Eigen::MatrixXd assemble_M(const MatchingInputs& in) {
    in.check_dimensions();
    Eigen::MatrixXd M = symmetric_part_shift(in);
    M.diagonal().array() += -kInv2Pi * in.ln_h;
    Eigen::LLT<Eigen::MatrixXd> llt(M);
    if (llt.info() != Eigen::Success) throw NotPositiveDefinite(critical_h0(in));
    return M;
}

double critical_h0(const MatchingInputs& in) {
    const Eigen::MatrixXd S = symmetric_part_shift(in);
    const double lambda_min =
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(S).eigenvalues().minCoeff();
    // M = -(2 pi)^-1 ln h I + S is positive definite iff ln h < 2 pi lambda_min.
    return std::min(1.0, std::exp(2.0 * M_PI * lambda_min));
}

MatchingCoefficients solve_alpha1(const MatchingInputs& in) {
    const Eigen::MatrixXd M = assemble_M(in);
    const int J = in.rod_count();
    const Eigen::VectorXd E = Eigen::VectorXd::Ones(J);
    const Eigen::VectorXd F = in.U_hash0 - in.U_bot_P;

    Eigen::LDLT<Eigen::MatrixXd> solver(M);
    const Eigen::VectorXd MinvE = solver.solve(E);
    const Eigen::VectorXd MinvF = solver.solve(F);

    MatchingCoefficients out;
    out.regime = Regime::alpha1;
    out.m = E.dot(MinvE);
    out.A0 = (in.f0_total + E.dot(MinvF)) / out.m;
    out.A = -out.A0 * MinvE + MinvF;
    out.h0 = critical_h0(in);
    out.A0_lead = in.f0_total / (2.0 * M_PI * J);
    out.A0_const = 0.0;
    out.A_limit = Eigen::VectorXd::Constant(J, -in.f0_total / J);
    return out;
}

MatchingCoefficients solve_alpha1_dirichlet(const MatchingInputs& in) {
    const Eigen::MatrixXd M = assemble_M(in);
    MatchingCoefficients out;
    out.regime = Regime::alpha1_dirichlet;
    out.A0 = 0.0;
    out.A = M.ldlt().solve(in.U_hash0 - in.U_bot_P);
    out.h0 = critical_h0(in);
    out.A_limit = Eigen::VectorXd::Zero(in.rod_count());
    return out;
}

MatchingCoefficients solve_alpha0(const MatchingInputs& in) {
    in.check_dimensions();
    const int J = in.rod_count();
    double conductance = 0.0;  // sum of l_j^-1 |w_j| gamma_j
    for (int j = 0; j < J; ++j) conductance += in.area[j] * in.gamma[j] / in.l[j];
    if (!(conductance > 0.0)) throw std::invalid_argument("matching: nonpositive conductance sum");

    MatchingCoefficients out;
    out.regime = Regime::alpha0;
    out.A0 = 0.0;
    out.A0_known = false;  // left open in this regime; reported as 0 with a flag
    out.a0 = in.f0_total / conductance;
    out.A.resize(J);
    for (int j = 0; j < J; ++j) out.A[j] = -out.a0 * in.area[j] * in.gamma[j] / in.l[j];
    out.b.resize(J);
    for (int j = 0; j < J; ++j) {
        out.b[j] = in.U_bot_P[j] + in.G.col(j).dot(out.A) +
                   out.a0 * in.gamma[j] * in.area[j] * kInv2Pi * in.ln_h / in.l[j];
    }
    return out;
}

Eigen::VectorXd alpha0_rod_dirichlet_data(const MatchingInputs& in,
                                          const MatchingCoefficients& coeffs,
                                          const Eigen::VectorXd& q) {
    const int J = in.rod_count();
    Eigen::VectorXd data(J);
    for (int j = 0; j < J; ++j)
        data[j] = in.U_bot_P[j] + in.G.col(j).dot(coeffs.A) +
                  coeffs.a0 * in.gamma[j] * in.area[j] * q[j];
    return data;
}

}  // namespace junction
