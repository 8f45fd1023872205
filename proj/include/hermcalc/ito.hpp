#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <unordered_map>
#include <vector>

#include "hermcalc/coeffs.hpp"
#include "hermcalc/integration.hpp"
#include "hermcalc/operators.hpp"
#include "hermcalc/paths.hpp"

namespace hermcalc {

// Translated test-function images along a path, memoized by the state
// quantized to a 1e-12 grid so that revisited states (pure-jump paths,
// piecewise-constant segments) reuse identical coefficient vectors.
// Stores tau_x(phi) at the working cap together with its first and second
// derivative images; entries above the evaluation cap carry the usual
// truncation-cushion caveat and are never consumed by norms.
class TranslationCache {
public:
    // phi must live at cap <= N_big; images are produced at caps
    // N_big / N_big+1 / N_big+2 for the 0th/1st/2nd derivative layers.
    TranslationCache(HermiteCoeffs phi, int N_big);

    struct Entry {
        HermiteCoeffs t;                  // tau_x phi, cap N_big
        std::vector<HermiteCoeffs> dt;    // d_i tau_x phi, cap N_big+1
        std::vector<HermiteCoeffs> d2t;   // d_i d_j (row-major i*d+j), cap N_big+2
        double retention = 1.0;           // ||tau_x phi||_0 / ||phi||_0
    };

    const Entry& at(const Eigen::VectorXd& x);
    const Entry& at(double x);  // d = 1 convenience

    int d() const { return phi_.d; }
    int N_big() const { return N_big_; }
    const HermiteCoeffs& phi() const { return phi_; }
    size_t size() const { return cache_.size(); }
    void clear() { cache_.clear(); }

private:
    HermiteCoeffs phi_;
    int N_big_;
    double phi_norm0_;
    std::unordered_map<std::uint64_t, std::vector<std::pair<std::vector<std::int64_t>, Entry>>> cache_;
    Entry build(const Eigen::VectorXd& x) const;
};

// One row per grid time: the rcll change-of-variable residual and the norms
// of the pieces it was assembled from.
struct ItoReport {
    int d = 1;
    double p = 0.0;     // regularity of phi's side; norms below use -p-1
    int N_big = 0;
    int N_eval = 0;
    std::vector<double> times;
    std::vector<double> residual;      // ||lhs - rhs||_{-p-1} at N_eval
    std::vector<double> first_order;   // running norm of the dX-integral term
    std::vector<double> second_order;  // running norm of the bracket term
    std::vector<double> jump_term;     // running norm of the jump-compensation series
    std::vector<double> retention;     // min translation mass retention up to t

    double max_residual() const;
    double residual_at_end() const { return residual.empty() ? 0.0 : residual.back(); }
};

void write_ito_report_csv(std::ostream& os, const ItoReport& rep);

// Running jump-compensation series
//   Y_t = sum_{s<=t} [ tau_{X_s}phi - tau_{X_{s-}}phi + sum_i dX^i_s d_i tau_{X_{s-}}phi ],
// piecewise constant between jumps, at assembly cap N_big+2.
CoeffPath jump_compensation_series(TranslationCache& cache, const RcllPath& X);

// Residual of
//   tau_{X_t}phi = tau_{X_0}phi - sum_i int d_i tau_{X_{s-}}phi dX^i_s
//                 + 1/2 sum_{ij} int d^2_{ij} tau_{X_{s-}}phi d[X^i,X^j]^c_s + Y_t
// measured in ||.||_{-p-1} at cap N_eval.  qv_cont holds the continuous
// bracket [X^i,X^j]^c on the grid, pair-major (i*d+j); pass the model bracket
// when there is one, the realized continuous bracket otherwise.
// Translation mass retention below `retention_floor` raises NumericError
// naming the first offending time.
ItoReport ito_residual(TranslationCache& cache, const RcllPath& X,
                       const std::vector<std::vector<double>>& qv_cont, double p, int N_eval,
                       double retention_floor = 0.999);

// Local-time coefficient path (d = 1): c_n(t_k) = sum_{j<k} h_n(X(t_j)) dQ_j
// against the continuous bracket Q; meaningful as an S_{-p} object for
// p > 1/4.  `field` keeps the whole history, `final` only t = T.
CoeffPath local_time_field(const RcllPath& X, const std::vector<double>& qv_cont, int N);
HermiteCoeffs local_time_final(const RcllPath& X, const std::vector<double>& qv_cont, int N);

}  // namespace hermcalc
