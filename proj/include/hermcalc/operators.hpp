#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "hermcalc/coeffs.hpp"
#include "hermcalc/quadrature.hpp"

namespace hermcalc {

// Linear map between truncated coefficient spaces (cap N_in -> cap N_out).
struct CoeffOperator {
    int d = 1;
    int N_in = 0;
    int N_out = 0;
    Eigen::MatrixXd m;  // rows: C(N_out+d,d), cols: C(N_in+d,d)
    std::string kind;   // "derivative" / "translation" / free-form

    HermiteCoeffs apply(const HermiteCoeffs& f) const;
};

// Matrix of d/dx_axis on cap-N inputs, exact on the truncation:
//   d_i h_n = sqrt(n_i/2) h_{n-e_i} - sqrt((n_i+1)/2) h_{n+e_i},
// so the output needs cap N+1 and every column has at most 2 nonzeros.
CoeffOperator derivative_matrix(int d, int axis, int N);

// In-place-style derivative application without forming the matrix.
HermiteCoeffs apply_derivative(const HermiteCoeffs& f, int axis);

// One-dimensional translation table at fixed cap N and node count Q:
// entries T(x)[n][m] = <tau_x h_m, h_n> = int h_m(y-x) h_n(y) dy evaluated
// with the Gauss-Hermite rule after the analytic rewrite
//   h_m(y-x) h_n(y) = p_m(u-x/2) p_n(u+x/2) exp(-u^2) exp(-x^2/4),  u = y-x/2,
// which makes the quadrature integrand a polynomial times exp(-u^2); the rule
// is exact for degree <= 2Q-1, i.e. for all entries once Q >= N+1.  The
// constructor runs the x=0 self-check (Gram matrix vs identity, 1e-8).
class TranslationTable {
public:
    // Q defaults to the working rule 2N+12.
    explicit TranslationTable(int N, int Q = -1);

    int N() const { return N_; }
    int Q() const { return rule_.size(); }

    // full (N+1)x(N+1) matrix of tau_x in one dimension
    Eigen::MatrixXd matrix(double x) const;

    // tau_x applied to a fixed 1-d coefficient vector (length <= N+1),
    // computed in O(QN) without forming the matrix; exact same quadrature.
    Eigen::VectorXd apply(double x, const Eigen::VectorXd& coeffs) const;

private:
    int N_;
    QuadratureRule rule_;
    void check_identity_at_zero() const;
};

// d-dimensional translation matrix on the graded truncation |n| <= N:
// T(x)[(n),(m)] = prod_i T1(x_i)[n_i][m_i].  |x_i| <= 20 supported.
CoeffOperator translation_matrix(const std::vector<double>& x, int N);
HermiteCoeffs apply_translation(const HermiteCoeffs& f, const std::vector<double>& x);

// Dirac delta at x truncated to cap N: coefficient n is h_n(x).
HermiteCoeffs delta_coeffs(const std::vector<double>& x, int d, int N);

// Shared per-(N,Q) table cache; tables are immutable once built.
const TranslationTable& translation_table(int N, int Q = -1);

}  // namespace hermcalc
