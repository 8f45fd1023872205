#include "hermcalc/hermite_eval.hpp"

#include <cmath>

#include "hermcalc/errors.hpp"

namespace hermcalc {

namespace {
const double kRoot4InvPi = std::pow(M_PI, -0.25);

void recurrence(double x, int K, double seed, std::vector<double>& out) {
    out.resize(static_cast<size_t>(K) + 1);
    out[0] = seed;
    if (K == 0) return;
    out[1] = std::sqrt(2.0) * x * seed;
    for (int k = 1; k < K; ++k)
        out[k + 1] = x * std::sqrt(2.0 / (k + 1)) * out[k] - std::sqrt(k / (k + 1.0)) * out[k - 1];
}
}  // namespace

void hermite_values(double x, int K, std::vector<double>& out) {
    recurrence(x, K, kRoot4InvPi * std::exp(-x * x / 2.0), out);
}

std::vector<double> hermite_values(double x, int K) {
    std::vector<double> out;
    hermite_values(x, K, out);
    return out;
}

void hermite_poly_values(double x, int K, std::vector<double>& out) {
    recurrence(x, K, kRoot4InvPi, out);
}

double eval_hermite(const MultiIndex& n, const std::vector<double>& x) {
    if (n.size() != x.size()) throw ConfigError("eval_hermite: dimension mismatch");
    double v = 1.0;
    std::vector<double> h;
    for (size_t i = 0; i < n.size(); ++i) {
        hermite_values(x[i], n[i], h);
        v *= h[static_cast<size_t>(n[i])];
    }
    return v;
}

}  // namespace hermcalc
