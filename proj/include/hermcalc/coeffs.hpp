#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string>

#include "hermcalc/multi_index.hpp"

namespace hermcalc {

// A tempered distribution represented by its coefficients against the
// orthonormal Hermite functions, truncated to |n| <= N.  Layout follows the
// graded lexicographic enumeration of BasisIndex(d, N).
struct HermiteCoeffs {
    int d = 1;
    int N = 0;
    Eigen::VectorXd c;  // length C(N+d, d)
    std::string label;

    HermiteCoeffs() : c(Eigen::VectorXd::Zero(1)) {}
    HermiteCoeffs(int d_, int N_, std::string label_ = "");
    bool shape_matches(const HermiteCoeffs& o) const { return d == o.d && N == o.N; }
};

// Weighted l^2 norm sqrt(sum_n (2|n|+d)^(2p) c_n^2): the S_p norm of the
// truncation.  p = 0 is plain L^2; p may be negative (dual-side norms).
double norm_p(const HermiteCoeffs& f, double p);

// Dual pairing sum_n f_n g_n; caps may differ (shorter side zero-padded),
// dimensions must agree.
double pairing(const HermiteCoeffs& f, const HermiteCoeffs& g);

// Zero-pad or truncate to a new cap.
HermiteCoeffs recap(const HermiteCoeffs& f, int N_new);

// Weights (2|n|+d)^(2p) over the cap-N basis, and the norm of the leading
// block of a (possibly longer) flat coefficient vector against them.  Used
// to measure assembly-cap vectors in an evaluation-cap dual norm.
Eigen::VectorXd sobolev_weights(int d, int N, double p);
double weighted_head_norm(const Eigen::VectorXd& v, const Eigen::VectorXd& w);

// CSV row "d,N,c_0,...,c_{M-1}" with full round-trip precision.
void write_coeffs_csv(std::ostream& os, const HermiteCoeffs& f);
HermiteCoeffs read_coeffs_csv(const std::string& line);

// Shared cache of BasisIndex objects (they are pure functions of (d, N)).
const BasisIndex& basis_for(int d, int N);

}  // namespace hermcalc
