#pragma once

#include <Eigen/Dense>
#include <vector>

#include "hermcalc/coeffs.hpp"
#include "hermcalc/paths.hpp"

namespace hermcalc {

// Coefficient-vector-valued path on a grid.  Column k holds the coefficients
// at t_k; `predictable` documents that column k is the left-limit value used
// on the interval (t_k, t_{k+1}].
struct CoeffPath {
    int d = 1;
    int N = 0;
    std::vector<double> times;
    Eigen::MatrixXd values;  // basis_size(d,N) x times.size()
    bool predictable = true;

    HermiteCoeffs at(int k) const;
    void validate() const;
};

// Left-endpoint Riemann-Stieltjes sum against component `comp` of the
// integrator path: out(t_k) = sum_{j<k} G(t_j) (Z(t_{j+1}) - Z(t_j)).
// All integrals in this project are exactly these finite sums; martingale
// vs finite-variation integrators differ only in which bounds make sense,
// not in the sum itself.
CoeffPath integrate_vs_scalar_grid(const CoeffPath& G, const std::vector<double>& Z);
CoeffPath integrate_vs_martingale(const CoeffPath& G, const RcllPath& M, int comp = 0);
// bound_out, if given, receives max_k ||G(t_k)||_{-p} * TV(A) (the pathwise
// Riemann-Stieltjes estimate for the finite-variation integral).
CoeffPath integrate_vs_fv(const CoeffPath& G, const RcllPath& A, int comp = 0,
                          double p = 0.0, double* bound_out = nullptr);
CoeffPath integrate_vs_semimartingale(const CoeffPath& G, const SemimartingaleDecomposition& dec,
                                      int comp = 0);

double total_variation(const RcllPath& A, int comp = 0);

}  // namespace hermcalc
