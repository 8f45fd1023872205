#include "hermcalc/operators.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>

#include "hermcalc/errors.hpp"
#include "hermcalc/hermite_eval.hpp"

namespace hermcalc {

HermiteCoeffs CoeffOperator::apply(const HermiteCoeffs& f) const {
    if (f.d != d || f.N != N_in) throw ConfigError("CoeffOperator::apply: shape mismatch");
    HermiteCoeffs out(d, N_out, f.label);
    out.c = m * f.c;
    return out;
}

CoeffOperator derivative_matrix(int d, int axis, int N) {
    if (axis < 0 || axis >= d) throw ConfigError("derivative_matrix: axis out of range");
    const BasisIndex& in = basis_for(d, N);
    const BasisIndex& out = basis_for(d, N + 1);
    CoeffOperator op;
    op.d = d;
    op.N_in = N;
    op.N_out = N + 1;
    op.kind = "derivative";
    op.m = Eigen::MatrixXd::Zero(out.size(), in.size());
    for (int j = 0; j < in.size(); ++j) {
        MultiIndex n = in.at(j);
        const int ni = n[axis];
        if (ni >= 1) {
            --n[axis];
            op.m(out.index_of(n), j) = std::sqrt(ni / 2.0);
            ++n[axis];
        }
        ++n[axis];
        op.m(out.index_of(n), j) = -std::sqrt((ni + 1) / 2.0);
        --n[axis];
    }
    return op;
}

HermiteCoeffs apply_derivative(const HermiteCoeffs& f, int axis) {
    if (axis < 0 || axis >= f.d) throw ConfigError("apply_derivative: axis out of range");
    const BasisIndex& in = basis_for(f.d, f.N);
    const BasisIndex& out = basis_for(f.d, f.N + 1);
    HermiteCoeffs g(f.d, f.N + 1, f.label);
    for (int j = 0; j < in.size(); ++j) {
        const double v = f.c(j);
        if (v == 0.0) continue;
        const MultiIndex& n = in.at(j);
        const int ni = n[axis];
        const int lo = in.shift_down(j, axis);
        // target indices live in the larger basis; same multi-index, so
        // translate through the output lookup
        if (ni >= 1) g.c(out.index_of(in.at(lo))) += std::sqrt(ni / 2.0) * v;
        MultiIndex up = n;
        ++up[axis];
        g.c(out.index_of(up)) -= std::sqrt((ni + 1) / 2.0) * v;
    }
    return g;
}

TranslationTable::TranslationTable(int N, int Q)
    : N_(N), rule_(gauss_hermite_rule(Q < 0 ? 2 * N + 12 : Q)) {
    if (N < 0) throw ConfigError("TranslationTable: N must be >= 0");
    if (rule_.size() < N + 1)
        throw ConfigError("TranslationTable: need Q >= N+1 for exact entries");
    check_identity_at_zero();
}

Eigen::MatrixXd TranslationTable::matrix(double x) const {
    if (std::abs(x) > 20.0) throw ConfigError("TranslationTable: |x| <= 20 supported");
    const int Q = rule_.size();
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(N_ + 1, N_ + 1);
    const double pref = std::exp(-x * x / 4.0);
    std::vector<double> pl, pr;
    Eigen::VectorXd vl(N_ + 1), vr(N_ + 1);
    for (int q = 0; q < Q; ++q) {
        const double u = rule_.nodes[q];
        hermite_poly_values(u - x / 2.0, N_, pl);  // evaluates h_m(y-x) poly part
        hermite_poly_values(u + x / 2.0, N_, pr);  // evaluates h_n(y) poly part
        const double wq = rule_.weights[q] * pref;
        for (int i = 0; i <= N_; ++i) {
            vl(i) = pl[static_cast<size_t>(i)];
            vr(i) = pr[static_cast<size_t>(i)];
        }
        T.noalias() += wq * vr * vl.transpose();
    }
    return T;
}

Eigen::VectorXd TranslationTable::apply(double x, const Eigen::VectorXd& coeffs) const {
    if (std::abs(x) > 20.0) throw ConfigError("TranslationTable: |x| <= 20 supported");
    if (coeffs.size() > N_ + 1) throw ConfigError("TranslationTable::apply: input exceeds cap");
    const int Q = rule_.size();
    Eigen::VectorXd out = Eigen::VectorXd::Zero(N_ + 1);
    const double pref = std::exp(-x * x / 4.0);
    std::vector<double> pl, pr;
    for (int q = 0; q < Q; ++q) {
        const double u = rule_.nodes[q];
        hermite_poly_values(u - x / 2.0, static_cast<int>(coeffs.size()) - 1, pl);
        double fval = 0.0;
        for (Eigen::Index m = 0; m < coeffs.size(); ++m) fval += coeffs(m) * pl[static_cast<size_t>(m)];
        hermite_poly_values(u + x / 2.0, N_, pr);
        const double wf = rule_.weights[q] * pref * fval;
        for (int n = 0; n <= N_; ++n) out(n) += wf * pr[static_cast<size_t>(n)];
    }
    return out;
}

void TranslationTable::check_identity_at_zero() const {
    const Eigen::MatrixXd G = matrix(0.0);
    const double dev = (G - Eigen::MatrixXd::Identity(N_ + 1, N_ + 1)).cwiseAbs().maxCoeff();
    if (dev > 1e-8) {
        std::ostringstream ss;
        ss << "translation quadrature self-check failed: |T(0) - I|_max = " << dev << " at N=" << N_
           << ", Q=" << rule_.size();
        throw NumericError(ss.str());
    }
}

const TranslationTable& translation_table(int N, int Q) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::unique_ptr<TranslationTable>> cache;
    const int q_eff = Q < 0 ? 2 * N + 12 : Q;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[{N, q_eff}];
    if (!slot) slot = std::make_unique<TranslationTable>(N, q_eff);
    return *slot;
}

CoeffOperator translation_matrix(const std::vector<double>& x, int N) {
    const int d = static_cast<int>(x.size());
    if (d < 1) throw ConfigError("translation_matrix: empty displacement");
    const TranslationTable& table = translation_table(N);
    std::vector<Eigen::MatrixXd> T1;
    T1.reserve(x.size());
    for (double xi : x) T1.push_back(table.matrix(xi));
    const BasisIndex& basis = basis_for(d, N);
    CoeffOperator op;
    op.d = d;
    op.N_in = N;
    op.N_out = N;
    op.kind = "translation";
    op.m.resize(basis.size(), basis.size());
    for (int r = 0; r < basis.size(); ++r) {
        const MultiIndex& n = basis.at(r);
        for (int c = 0; c < basis.size(); ++c) {
            const MultiIndex& mm = basis.at(c);
            double v = 1.0;
            for (int a = 0; a < d; ++a) v *= T1[static_cast<size_t>(a)](n[a], mm[a]);
            op.m(r, c) = v;
        }
    }
    return op;
}

HermiteCoeffs apply_translation(const HermiteCoeffs& f, const std::vector<double>& x) {
    if (static_cast<int>(x.size()) != f.d) throw ConfigError("apply_translation: dim mismatch");
    if (f.d == 1) {
        HermiteCoeffs out(f.d, f.N, f.label);
        out.c = translation_table(f.N).apply(x[0], f.c);
        return out;
    }
    // axis-by-axis sweep over a box-shaped intermediate.  Projecting back to
    // the graded simplex between sweeps would drop cross terms (m_a large
    // while another output degree is large) that the product matrix keeps, so
    // the intermediate holds all tuples in [0,N]^d and only the final readout
    // restricts to |n| <= N.  This makes apply_translation the same linear
    // map as translation_matrix.
    const BasisIndex& basis = basis_for(f.d, f.N);
    const TranslationTable& table = translation_table(f.N);
    const int K = f.N + 1;
    size_t box = 1;
    for (int a = 0; a < f.d; ++a) {
        box *= static_cast<size_t>(K);
        if (box > (1u << 26))
            throw ConfigError("apply_translation: (N+1)^d intermediate too large");
    }
    std::vector<double> cur(box, 0.0), next(box);
    std::vector<size_t> stride(static_cast<size_t>(f.d));
    stride[0] = 1;
    for (int a = 1; a < f.d; ++a)
        stride[static_cast<size_t>(a)] = stride[static_cast<size_t>(a - 1)] * static_cast<size_t>(K);
    auto flat = [&](const MultiIndex& n) {
        size_t ix = 0;
        for (int a = 0; a < f.d; ++a) ix += static_cast<size_t>(n[static_cast<size_t>(a)]) * stride[static_cast<size_t>(a)];
        return ix;
    };
    for (int i = 0; i < basis.size(); ++i) cur[flat(basis.at(i))] = f.c(i);

    for (int a = 0; a < f.d; ++a) {
        const Eigen::MatrixXd T1 = table.matrix(x[static_cast<size_t>(a)]);
        const size_t sa = stride[static_cast<size_t>(a)];
        std::fill(next.begin(), next.end(), 0.0);
        // walk every line along axis a: base indices have coordinate a = 0
        for (size_t base = 0; base < box; ++base) {
            if ((base / sa) % static_cast<size_t>(K) != 0) continue;
            for (int n_a = 0; n_a < K; ++n_a) {
                double acc = 0.0;
                for (int m_a = 0; m_a < K; ++m_a)
                    acc += T1(n_a, m_a) * cur[base + static_cast<size_t>(m_a) * sa];
                next[base + static_cast<size_t>(n_a) * sa] = acc;
            }
        }
        cur.swap(next);
    }

    HermiteCoeffs out(f.d, f.N, f.label);
    for (int i = 0; i < basis.size(); ++i) out.c(i) = cur[flat(basis.at(i))];
    return out;
}

HermiteCoeffs delta_coeffs(const std::vector<double>& x, int d, int N) {
    if (static_cast<int>(x.size()) != d) throw ConfigError("delta_coeffs: dim mismatch");
    const BasisIndex& basis = basis_for(d, N);
    HermiteCoeffs out(d, N, "delta");
    std::vector<std::vector<double>> hv(static_cast<size_t>(d));
    for (int a = 0; a < d; ++a) hermite_values(x[static_cast<size_t>(a)], N, hv[static_cast<size_t>(a)]);
    for (int i = 0; i < basis.size(); ++i) {
        const MultiIndex& n = basis.at(i);
        double v = 1.0;
        for (int a = 0; a < d; ++a) v *= hv[static_cast<size_t>(a)][static_cast<size_t>(n[a])];
        out.c(i) = v;
    }
    return out;
}

}  // namespace hermcalc
