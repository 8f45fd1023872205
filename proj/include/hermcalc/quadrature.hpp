#pragma once

#include <vector>

namespace hermcalc {

// Gauss-Hermite rule for the weight exp(-x^2) on the real line:
//   int f(x) exp(-x^2) dx  ~=~  sum_q weights[q] * f(nodes[q]),
// exact for polynomials of degree <= 2Q-1.  Nodes ascending, symmetric
// about 0; weights positive and sum to sqrt(pi).
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    int size() const { return static_cast<int>(nodes.size()); }
};

// Nodes: eigenvalues of the symmetric Jacobi matrix (off-diagonal sqrt(k/2))
// polished by Newton iteration on the degree-Q orthonormal polynomial.
// Weights: inverse Christoffel numbers 1/sum_{k<Q} p_k(x_q)^2, which stay
// relatively accurate even for the far-out nodes whose weights underflow the
// eigensolver's absolute accuracy.  Supported Q range is 1..200.
QuadratureRule gauss_hermite_rule(int Q);

}  // namespace hermcalc
