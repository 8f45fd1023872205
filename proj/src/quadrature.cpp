#include "hermcalc/quadrature.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "hermcalc/errors.hpp"
#include "hermcalc/hermite_eval.hpp"

namespace hermcalc {

QuadratureRule gauss_hermite_rule(int Q) {
    if (Q < 1 || Q > 200) throw ConfigError("gauss_hermite_rule: Q must be in 1..200");
    const double sqrt_pi = std::sqrt(M_PI);
    QuadratureRule rule;
    if (Q == 1) {
        rule.nodes = {0.0};
        rule.weights = {sqrt_pi};
        return rule;
    }
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(Q, Q);
    for (int k = 1; k < Q; ++k) {
        const double b = std::sqrt(k / 2.0);
        J(k, k - 1) = b;
        J(k - 1, k) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    if (es.info() != Eigen::Success)
        throw NumericError("gauss_hermite_rule: Jacobi eigendecomposition failed");
    rule.nodes.resize(static_cast<size_t>(Q));
    rule.weights.resize(static_cast<size_t>(Q));

    // Newton-polish each eigenvalue on the degree-Q orthonormal polynomial
    // (p_Q' = sqrt(2Q) p_{Q-1}); eigenvalues carry absolute error only, and
    // the weight formula below needs the nodes to relative precision
    std::vector<double> p;
    const double dscale = std::sqrt(2.0 * Q);
    for (int q = 0; q < Q; ++q) {
        double x = es.eigenvalues()(q);
        for (int it = 0; it < 4; ++it) {
            hermite_poly_values(x, Q, p);
            const double step = p[static_cast<size_t>(Q)] /
                                (dscale * p[static_cast<size_t>(Q) - 1]);
            x -= step;
            if (std::abs(step) <= 1e-15 * (1.0 + std::abs(x))) break;
        }
        rule.nodes[static_cast<size_t>(q)] = x;
    }
    // the rule is symmetric about 0; enforce it exactly
    for (int q = 0; q < Q / 2; ++q) {
        const double s = 0.5 * (rule.nodes[static_cast<size_t>(Q - 1 - q)] -
                                rule.nodes[static_cast<size_t>(q)]);
        rule.nodes[static_cast<size_t>(q)] = -s;
        rule.nodes[static_cast<size_t>(Q - 1 - q)] = s;
    }
    if (Q % 2) rule.nodes[static_cast<size_t>(Q) / 2] = 0.0;

    // Gauss weights as inverse Christoffel numbers 1/sum_{k<Q} p_k(x_q)^2:
    // full relative accuracy even at the extreme nodes, where the classical
    // first-eigenvector-component formula returns noise (|v_0| ~ 1e-29 is
    // far below the eigensolver's absolute error and gets squared)
    for (int q = 0; q < Q; ++q) {
        hermite_poly_values(rule.nodes[static_cast<size_t>(q)], Q - 1, p);
        double s = 0.0;
        for (int k = 0; k < Q; ++k) s += p[static_cast<size_t>(k)] * p[static_cast<size_t>(k)];
        rule.weights[static_cast<size_t>(q)] = 1.0 / s;
    }
    return rule;
}

}  // namespace hermcalc
