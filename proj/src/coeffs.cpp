#include "hermcalc/coeffs.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <sstream>

#include "hermcalc/csv.hpp"
#include "hermcalc/errors.hpp"

namespace hermcalc {

HermiteCoeffs::HermiteCoeffs(int d_, int N_, std::string label_)
    : d(d_), N(N_), c(Eigen::VectorXd::Zero(basis_size(d_, N_))), label(std::move(label_)) {
    if (d_ < 1 || N_ < 0) throw ConfigError("HermiteCoeffs: need d >= 1, N >= 0");
}

const BasisIndex& basis_for(int d, int N) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::unique_ptr<BasisIndex>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[{d, N}];
    if (!slot) slot = std::make_unique<BasisIndex>(d, N);
    return *slot;
}

double norm_p(const HermiteCoeffs& f, double p) {
    const BasisIndex& basis = basis_for(f.d, f.N);
    if (f.c.size() != basis.size()) throw ConfigError("norm_p: coefficient length mismatch");
    double s = 0.0;
    for (int i = 0; i < basis.size(); ++i) {
        const double w = std::pow(2.0 * basis.order(i) + f.d, 2.0 * p);
        s += w * f.c(i) * f.c(i);
    }
    return std::sqrt(s);
}

double pairing(const HermiteCoeffs& f, const HermiteCoeffs& g) {
    if (f.d != g.d) throw ConfigError("pairing: dimension mismatch");
    const Eigen::Index m = std::min(f.c.size(), g.c.size());
    // graded enumeration is nested: the first C(min(N)+d,d) indices coincide
    return f.c.head(m).dot(g.c.head(m));
}

HermiteCoeffs recap(const HermiteCoeffs& f, int N_new) {
    HermiteCoeffs out(f.d, N_new, f.label);
    const Eigen::Index m = std::min(f.c.size(), out.c.size());
    out.c.head(m) = f.c.head(m);
    return out;
}

Eigen::VectorXd sobolev_weights(int d, int N, double p) {
    const BasisIndex& basis = basis_for(d, N);
    Eigen::VectorXd w(basis.size());
    for (int i = 0; i < basis.size(); ++i) w(i) = std::pow(2.0 * basis.order(i) + d, 2.0 * p);
    return w;
}

double weighted_head_norm(const Eigen::VectorXd& v, const Eigen::VectorXd& w) {
    if (v.size() < w.size()) throw ConfigError("weighted_head_norm: vector shorter than weights");
    return std::sqrt(v.head(w.size()).cwiseAbs2().dot(w));
}

void write_coeffs_csv(std::ostream& os, const HermiteCoeffs& f) {
    os << f.d << ',' << f.N;
    for (Eigen::Index i = 0; i < f.c.size(); ++i) os << ',' << csv_num(f.c(i));
    os << '\n';
}

HermiteCoeffs read_coeffs_csv(const std::string& line) {
    std::stringstream ss(line);
    std::string tok;
    std::vector<double> vals;
    int field = 0, d = 0, N = 0;
    while (std::getline(ss, tok, ',')) {
        if (field == 0)
            d = std::stoi(tok);
        else if (field == 1)
            N = std::stoi(tok);
        else
            vals.push_back(csv_parse_num(tok));
        ++field;
    }
    if (field < 2) throw ConfigError("read_coeffs_csv: malformed row");
    HermiteCoeffs out(d, N);
    if (static_cast<Eigen::Index>(vals.size()) != out.c.size())
        throw ConfigError("read_coeffs_csv: wrong coefficient count for cap");
    for (size_t i = 0; i < vals.size(); ++i) out.c(static_cast<Eigen::Index>(i)) = vals[i];
    return out;
}

}  // namespace hermcalc
