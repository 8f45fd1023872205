#include "hermcalc/integration.hpp"

#include <cmath>

#include "hermcalc/errors.hpp"

namespace hermcalc {

HermiteCoeffs CoeffPath::at(int k) const {
    HermiteCoeffs f(d, N);
    f.c = values.col(k);
    return f;
}

void CoeffPath::validate() const {
    if (values.cols() != static_cast<Eigen::Index>(times.size()))
        throw NumericError("CoeffPath: column count != grid size");
    if (values.rows() != basis_size(d, N)) throw NumericError("CoeffPath: row count != basis size");
}

namespace {

void check_same_grid(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw ConfigError("integration: integrand/integrator grids differ");
    for (size_t k = 0; k < a.size(); ++k)
        if (a[k] != b[k]) throw ConfigError("integration: integrand/integrator grids differ");
}

CoeffPath cumulative_sum(const CoeffPath& G, const std::function<double(size_t)>& dZ) {
    CoeffPath out;
    out.d = G.d;
    out.N = G.N;
    out.times = G.times;
    out.predictable = false;  // output is adapted/cadlag, not a left-limit path
    out.values = Eigen::MatrixXd::Zero(G.values.rows(), G.values.cols());
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(G.values.rows());
    for (size_t k = 1; k < G.times.size(); ++k) {
        acc += G.values.col(static_cast<Eigen::Index>(k - 1)) * dZ(k - 1);
        out.values.col(static_cast<Eigen::Index>(k)) = acc;
    }
    return out;
}

}  // namespace

CoeffPath integrate_vs_scalar_grid(const CoeffPath& G, const std::vector<double>& Z) {
    if (Z.size() != G.times.size()) throw ConfigError("integration: grid/integrator length mismatch");
    return cumulative_sum(G, [&](size_t j) { return Z[j + 1] - Z[j]; });
}

CoeffPath integrate_vs_martingale(const CoeffPath& G, const RcllPath& M, int comp) {
    check_same_grid(G.times, M.times);
    return cumulative_sum(G, [&](size_t j) {
        return M.values(comp, static_cast<Eigen::Index>(j + 1)) - M.values(comp, static_cast<Eigen::Index>(j));
    });
}

CoeffPath integrate_vs_fv(const CoeffPath& G, const RcllPath& A, int comp, double p,
                          double* bound_out) {
    check_same_grid(G.times, A.times);
    if (bound_out) {
        double max_norm = 0.0;
        for (size_t k = 0; k < G.times.size(); ++k)
            max_norm = std::max(max_norm, norm_p(G.at(static_cast<int>(k)), -p));
        *bound_out = max_norm * total_variation(A, comp);
        if (!std::isfinite(*bound_out))
            throw NumericError("integrate_vs_fv: non-finite integrand norm or variation");
    }
    return cumulative_sum(G, [&](size_t j) {
        return A.values(comp, static_cast<Eigen::Index>(j + 1)) - A.values(comp, static_cast<Eigen::Index>(j));
    });
}

CoeffPath integrate_vs_semimartingale(const CoeffPath& G, const SemimartingaleDecomposition& dec,
                                      int comp) {
    CoeffPath m = integrate_vs_martingale(G, dec.M, comp);
    CoeffPath a = integrate_vs_fv(G, dec.A, comp);
    m.values += a.values;
    return m;
}

double total_variation(const RcllPath& A, int comp) {
    double tv = 0.0;
    for (size_t k = 1; k < A.times.size(); ++k)
        tv += std::abs(A.values(comp, static_cast<Eigen::Index>(k)) -
                       A.values(comp, static_cast<Eigen::Index>(k - 1)));
    return tv;
}

}  // namespace hermcalc
