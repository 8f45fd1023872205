#include "hermcalc/ito.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "hermcalc/csv.hpp"
#include "hermcalc/errors.hpp"
#include "hermcalc/hermite_eval.hpp"

namespace hermcalc {

namespace {

constexpr double kQuantum = 1e-12;

std::vector<std::int64_t> quantize(const Eigen::VectorXd& x) {
    std::vector<std::int64_t> q(static_cast<size_t>(x.size()));
    for (Eigen::Index i = 0; i < x.size(); ++i)
        q[static_cast<size_t>(i)] = std::llround(x(i) / kQuantum);
    return q;
}

std::uint64_t hash_key(const std::vector<std::int64_t>& q) {
    std::uint64_t h = 0x9E3779B97F4A7C15ull;
    for (std::int64_t v : q) {
        h ^= static_cast<std::uint64_t>(v) + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
        h *= 0xBF58476D1CE4E5B9ull;
    }
    return h;
}

}  // namespace

TranslationCache::TranslationCache(HermiteCoeffs phi, int N_big)
    : phi_(std::move(phi)), N_big_(N_big), phi_norm0_(phi_.c.norm()) {
    if (phi_.N > N_big) throw ConfigError("TranslationCache: phi cap exceeds working cap");
    if (phi_norm0_ == 0.0) throw ConfigError("TranslationCache: phi must be nonzero");
}

TranslationCache::Entry TranslationCache::build(const Eigen::VectorXd& x) const {
    const int d = phi_.d;
    Entry e;
    if (d == 1) {
        e.t = HermiteCoeffs(1, N_big_);
        e.t.c = translation_table(N_big_).apply(x(0), phi_.c);
    } else {
        std::vector<double> xv(static_cast<size_t>(d));
        for (int a = 0; a < d; ++a) xv[static_cast<size_t>(a)] = x(a);
        e.t = apply_translation(recap(phi_, N_big_), xv);
    }
    e.retention = e.t.c.norm() / phi_norm0_;
    e.dt.reserve(static_cast<size_t>(d));
    for (int a = 0; a < d; ++a) e.dt.push_back(apply_derivative(e.t, a));
    e.d2t.reserve(static_cast<size_t>(d) * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            e.d2t.push_back(apply_derivative(e.dt[static_cast<size_t>(i)], j));
    return e;
}

const TranslationCache::Entry& TranslationCache::at(const Eigen::VectorXd& x) {
    const std::vector<std::int64_t> q = quantize(x);
    auto& bucket = cache_[hash_key(q)];
    for (auto& kv : bucket)
        if (kv.first == q) return kv.second;
    bucket.emplace_back(q, build(x));
    return bucket.back().second;
}

const TranslationCache::Entry& TranslationCache::at(double x) {
    Eigen::VectorXd v(1);
    v << x;
    return at(v);
}

double ItoReport::max_residual() const {
    double m = 0.0;
    for (double r : residual) m = std::max(m, r);
    return m;
}

void write_ito_report_csv(std::ostream& os, const ItoReport& rep) {
    os << "time,residual,first_order,second_order,jump_term,retention\n";
    for (size_t k = 0; k < rep.times.size(); ++k)
        os << csv_num(rep.times[k]) << ',' << csv_num(rep.residual[k]) << ','
           << csv_num(rep.first_order[k]) << ',' << csv_num(rep.second_order[k]) << ','
           << csv_num(rep.jump_term[k]) << ',' << csv_num(rep.retention[k]) << '\n';
}

CoeffPath jump_compensation_series(TranslationCache& cache, const RcllPath& X) {
    const int d = X.d;
    const int N_asm = cache.N_big() + 2;
    const Eigen::Index rows = basis_size(d, N_asm);
    CoeffPath out;
    out.d = d;
    out.N = N_asm;
    out.times = X.times;
    out.predictable = false;
    out.values = Eigen::MatrixXd::Zero(rows, static_cast<Eigen::Index>(X.times.size()));
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(rows);
    size_t rpos = 0;
    for (size_t k = 1; k < X.times.size(); ++k) {
        while (rpos < X.jumps.size() && X.jumps[rpos].index == static_cast<int>(k)) {
            const JumpRecord& rec = X.jumps[rpos];
            const auto& post = cache.at(X.value(static_cast<int>(k)));
            const auto& pre = cache.at(rec.left);
            acc.head(post.t.c.size()) += post.t.c;
            acc.head(pre.t.c.size()) -= pre.t.c;
            for (int i = 0; i < d; ++i) {
                const Eigen::VectorXd& dv = pre.dt[static_cast<size_t>(i)].c;
                acc.head(dv.size()) += rec.jump(i) * dv;
            }
            ++rpos;
        }
        out.values.col(static_cast<Eigen::Index>(k)) = acc;
    }
    return out;
}

ItoReport ito_residual(TranslationCache& cache, const RcllPath& X,
                       const std::vector<std::vector<double>>& qv_cont, double p, int N_eval,
                       double retention_floor) {
    const int d = X.d;
    const int N_big = cache.N_big();
    const int N_asm = N_big + 2;
    if (N_eval > N_big - 2) throw ConfigError("ito_residual: need N_eval <= N_big - 2");
    if (static_cast<int>(qv_cont.size()) != d * d)
        throw ConfigError("ito_residual: qv_cont must have d*d grid functions");
    for (const auto& q : qv_cont)
        if (q.size() != X.times.size())
            throw ConfigError("ito_residual: bracket grid length mismatch");

    const Eigen::Index rows = basis_size(d, N_asm);
    const Eigen::VectorXd w_eval = sobolev_weights(d, N_eval, -p - 1.0);

    ItoReport rep;
    rep.d = d;
    rep.p = p;
    rep.N_big = N_big;
    rep.N_eval = N_eval;
    rep.times = X.times;
    const size_t K = X.times.size();
    rep.residual.assign(K, 0.0);
    rep.first_order.assign(K, 0.0);
    rep.second_order.assign(K, 0.0);
    rep.jump_term.assign(K, 0.0);
    rep.retention.assign(K, 1.0);

    Eigen::VectorXd first = Eigen::VectorXd::Zero(rows);   // -sum_i int d_i tau phi dX^i
    Eigen::VectorXd second = Eigen::VectorXd::Zero(rows);  // 1/2 sum_ij int d2 tau phi dqv^c
    Eigen::VectorXd jumpc = Eigen::VectorXd::Zero(rows);   // Y_t
    Eigen::VectorXd rhs(rows), diff(rows);

    const auto& e0 = cache.at(X.value(0));
    Eigen::VectorXd base = Eigen::VectorXd::Zero(rows);
    base.head(e0.t.c.size()) = e0.t.c;
    double min_ret = e0.retention;
    size_t rpos = 0;

    for (size_t k = 0; k < K; ++k) {
        if (k > 0) {
            const size_t j = k - 1;  // left endpoint of the step (t_j, t_k]
            const auto& ej = cache.at(X.value(static_cast<int>(j)));
            min_ret = std::min(min_ret, ej.retention);
            if (ej.retention < retention_floor) {
                std::ostringstream ss;
                ss << "translation mass retention " << ej.retention << " below floor "
                   << retention_floor << " at t=" << X.times[j] << " (|x| too large for cap "
                   << N_big << ")";
                throw NumericError(ss.str());
            }
            // The jump contribution to the dX-integral is exact: the integrand
            // at the jump time is the recorded left limit.  The left-endpoint
            // rule approximates only the continuous displacement.
            const JumpRecord* rec =
                (rpos < X.jumps.size() && X.jumps[rpos].index == static_cast<int>(k))
                    ? &X.jumps[rpos]
                    : nullptr;
            for (int i = 0; i < d; ++i) {
                const double dXc = (rec ? rec->left(i) : X.values(i, static_cast<Eigen::Index>(k))) -
                                   X.values(i, static_cast<Eigen::Index>(j));
                if (dXc != 0.0) {
                    const Eigen::VectorXd& dv = ej.dt[static_cast<size_t>(i)].c;
                    first.head(dv.size()) -= dXc * dv;
                }
            }
            if (rec) {
                const auto& pre = cache.at(rec->left);
                for (int i = 0; i < d; ++i) {
                    const Eigen::VectorXd& dv = pre.dt[static_cast<size_t>(i)].c;
                    first.head(dv.size()) -= rec->jump(i) * dv;
                }
            }
            for (int i = 0; i < d; ++i)
                for (int jj = 0; jj < d; ++jj) {
                    const auto& q = qv_cont[static_cast<size_t>(i) * d + jj];
                    const double dq = q[k] - q[j];
                    if (dq != 0.0) {
                        const Eigen::VectorXd& dv = ej.d2t[static_cast<size_t>(i) * d + jj].c;
                        second.head(dv.size()) += 0.5 * dq * dv;
                    }
                }
            while (rpos < X.jumps.size() && X.jumps[rpos].index == static_cast<int>(k)) {
                const JumpRecord& rec = X.jumps[rpos];
                const auto& post = cache.at(X.value(static_cast<int>(k)));
                const auto& pre = cache.at(rec.left);
                min_ret = std::min({min_ret, post.retention, pre.retention});
                jumpc.head(post.t.c.size()) += post.t.c;
                jumpc.head(pre.t.c.size()) -= pre.t.c;
                for (int i = 0; i < d; ++i) {
                    const Eigen::VectorXd& dv = pre.dt[static_cast<size_t>(i)].c;
                    jumpc.head(dv.size()) += rec.jump(i) * dv;
                }
                ++rpos;
            }
        }
        const auto& ek = cache.at(X.value(static_cast<int>(k)));
        min_ret = std::min(min_ret, ek.retention);
        rhs = base + first + second + jumpc;
        diff = -rhs;
        diff.head(ek.t.c.size()) += ek.t.c;
        rep.residual[k] = weighted_head_norm(diff, w_eval);
        rep.first_order[k] = weighted_head_norm(first, w_eval);
        rep.second_order[k] = weighted_head_norm(second, w_eval);
        rep.jump_term[k] = weighted_head_norm(jumpc, w_eval);
        rep.retention[k] = min_ret;
    }
    return rep;
}

CoeffPath local_time_field(const RcllPath& X, const std::vector<double>& qv_cont, int N) {
    if (X.d != 1) throw ConfigError("local_time_field: d = 1 only");
    if (qv_cont.size() != X.times.size())
        throw ConfigError("local_time_field: bracket grid length mismatch");
    CoeffPath out;
    out.d = 1;
    out.N = N;
    out.times = X.times;
    out.predictable = false;
    out.values = Eigen::MatrixXd::Zero(N + 1, static_cast<Eigen::Index>(X.times.size()));
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(N + 1);
    std::vector<double> hv;
    for (size_t k = 1; k < X.times.size(); ++k) {
        const double dq = qv_cont[k] - qv_cont[k - 1];
        if (dq != 0.0) {
            hermite_values(X.values(0, static_cast<Eigen::Index>(k - 1)), N, hv);
            for (int n = 0; n <= N; ++n) acc(n) += hv[static_cast<size_t>(n)] * dq;
        }
        out.values.col(static_cast<Eigen::Index>(k)) = acc;
    }
    return out;
}

HermiteCoeffs local_time_final(const RcllPath& X, const std::vector<double>& qv_cont, int N) {
    if (X.d != 1) throw ConfigError("local_time_final: d = 1 only");
    if (qv_cont.size() != X.times.size())
        throw ConfigError("local_time_final: bracket grid length mismatch");
    HermiteCoeffs out(1, N, "local_time");
    std::vector<double> hv;
    for (size_t k = 1; k < X.times.size(); ++k) {
        const double dq = qv_cont[k] - qv_cont[k - 1];
        if (dq != 0.0) {
            hermite_values(X.values(0, static_cast<Eigen::Index>(k - 1)), N, hv);
            for (int n = 0; n <= N; ++n) out.c(n) += hv[static_cast<size_t>(n)] * dq;
        }
    }
    return out;
}

}  // namespace hermcalc
