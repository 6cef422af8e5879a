#pragma once

#include <Eigen/Dense>

#include <stdexcept>

namespace junction {

/// Everything the matching algebra needs, one entry per rod.
struct MatchingInputs {
    Eigen::MatrixXd G;          // regular Green values at the anchors (J x J)
    Eigen::VectorXd c_log;      // logarithmic capacity of each section
    Eigen::VectorXd gamma;
    Eigen::VectorXd area;       // |w_j|
    Eigen::VectorXd l;          // rod lengths
    Eigen::VectorXd U_hash0;    // free-end values of the averaged rod solutions
    Eigen::VectorXd U_bot_P;    // plate particular solution at the anchors
    double f0_total = 0.0;      // integral of the averaged plate source
    double ln_h = -1.0;

    int rod_count() const { return static_cast<int>(l.size()); }
    void check_dimensions() const;
};

enum class Regime { alpha1, alpha1_dirichlet, alpha0 };

struct MatchingCoefficients {
    Regime regime = Regime::alpha1;
    double A0 = 0.0;
    bool A0_known = true;        // false only in the alpha0 regime
    Eigen::VectorXd A;
    double m = 0.0;              // E^T M^-1 E (alpha1 only)
    double a0 = 0.0;             // alpha0 only
    Eigen::VectorXd b;           // alpha0 junction constants, with A0 set to 0
    double h0 = 0.0;             // largest h keeping M positive definite
    // leading behaviour in ln h: A0 ~ A0_lead |ln h| + A0_const, A_j -> A_limit
    double A0_lead = 0.0;
    double A0_const = 0.0;
    Eigen::VectorXd A_limit;
};

struct NotPositiveDefinite : std::runtime_error {
    explicit NotPositiveDefinite(double h0_)
        : std::runtime_error("matching: M(ln h) is not positive definite below the h0 threshold"),
          h0(h0_) {}
    double h0;
};

/// M(ln h) = -(2 pi)^-1 ln h I + G - diag((2 pi)^-1 ln c_log + (gamma |w|)^-1).
/// Throws NotPositiveDefinite (carrying the critical h) if indefinite.
Eigen::MatrixXd assemble_M(const MatchingInputs& in);

/// Largest h at which M stays positive definite.
double critical_h0(const MatchingInputs& in);

MatchingCoefficients solve_alpha1(const MatchingInputs& in);

/// Lateral-Dirichlet variant: G must come from the Dirichlet Green functions
/// and U_bot_P holds the Dirichlet plate solution at the anchors; A0 is absent.
MatchingCoefficients solve_alpha1_dirichlet(const MatchingInputs& in);

MatchingCoefficients solve_alpha0(const MatchingInputs& in);

/// Dirichlet data for the alpha0 rod profiles: U_bot_P + (A G)_j + a0 gamma_j |w_j| q_j.
Eigen::VectorXd alpha0_rod_dirichlet_data(const MatchingInputs& in,
                                          const MatchingCoefficients& coeffs,
                                          const Eigen::VectorXd& q);

}  // namespace junction
