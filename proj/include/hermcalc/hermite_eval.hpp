#pragma once

#include <vector>

#include "hermcalc/multi_index.hpp"

namespace hermcalc {

// Values h_0(x) .. h_K(x) of the L^2-orthonormal Hermite functions (Gaussian
// weight baked in), by the stable three-term recurrence
//   h_0(x) = pi^{-1/4} exp(-x^2/2),
//   h_{k+1}(x) = x sqrt(2/(k+1)) h_k(x) - sqrt(k/(k+1)) h_{k-1}(x).
// For |x| beyond ~40 the leading Gaussian underflows and all values are 0.
void hermite_values(double x, int K, std::vector<double>& out);
std::vector<double> hermite_values(double x, int K);

// Polynomial parts p_k(x) = h_k(x) * exp(+x^2/2): same recurrence seeded with
// pi^{-1/4}.  Used to rewrite quadrature integrands against exp(-y^2).
void hermite_poly_values(double x, int K, std::vector<double>& out);

// Product basis value h_n(x) = prod_i h_{n_i}(x_i).
double eval_hermite(const MultiIndex& n, const std::vector<double>& x);

}  // namespace hermcalc
