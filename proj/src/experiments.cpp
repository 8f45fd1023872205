#include "hermcalc/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "hermcalc/csv.hpp"
#include "hermcalc/errors.hpp"
#include "hermcalc/hermite_eval.hpp"
#include "hermcalc/integration.hpp"
#include "hermcalc/operators.hpp"

namespace fs = std::filesystem;

namespace hermcalc {

// ---------------------------------------------------------------- config

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == ',' || std::isspace(static_cast<unsigned char>(ch))) {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

}  // namespace

ConfigFile ConfigFile::parse_string(const std::string& text, const std::string& name) {
    ConfigFile cf;
    cf.name_ = name;
    std::istringstream is(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw ConfigError(name + ":" + std::to_string(lineno) + ": malformed section header");
            section = trim(t.substr(1, t.size() - 2));
            if (section.empty())
                throw ConfigError(name + ":" + std::to_string(lineno) + ": empty section name");
            cf.sections_[section];  // allow empty sections
            continue;
        }
        const size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError(name + ":" + std::to_string(lineno) + ": expected key = value");
        if (section.empty())
            throw ConfigError(name + ":" + std::to_string(lineno) + ": key outside any [section]");
        Entry e;
        e.key = trim(t.substr(0, eq));
        e.value = trim(t.substr(eq + 1));
        e.line = lineno;
        if (e.key.empty())
            throw ConfigError(name + ":" + std::to_string(lineno) + ": empty key");
        for (const auto& prev : cf.sections_[section])
            if (prev.key == e.key)
                throw ConfigError(name + ":" + std::to_string(lineno) + ": duplicate key '" +
                                  e.key + "' in [" + section + "]");
        cf.sections_[section].push_back(std::move(e));
    }
    return cf;
}

ConfigFile ConfigFile::parse_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_string(ss.str(), path);
}

bool ConfigFile::has_section(const std::string& sec) const { return sections_.count(sec) > 0; }

ConfigFile::Entry* ConfigFile::find(const std::string& sec, const std::string& key) {
    auto it = sections_.find(sec);
    if (it == sections_.end()) return nullptr;
    for (auto& e : it->second)
        if (e.key == key) return &e;
    return nullptr;
}

std::optional<std::string> ConfigFile::get(const std::string& sec, const std::string& key) {
    Entry* e = find(sec, key);
    if (!e) return std::nullopt;
    e->used = true;
    return e->value;
}

std::string ConfigFile::require_str(const std::string& sec, const std::string& key) {
    auto v = get(sec, key);
    if (!v) throw ConfigError(name_ + ": missing required key '" + key + "' in [" + sec + "]");
    return *v;
}

std::string ConfigFile::get_str(const std::string& sec, const std::string& key,
                                const std::string& def) {
    auto v = get(sec, key);
    return v ? *v : def;
}

namespace {

template <typename T>
T parse_num(const std::string& sec, const std::string& key, const std::string& v) {
    std::istringstream is(v);
    T out;
    is >> out;
    std::string rest;
    if (!is || (is >> rest && !rest.empty()))
        throw ConfigError("bad value '" + v + "' for key '" + key + "' in [" + sec + "]");
    return out;
}

}  // namespace

int ConfigFile::get_int(const std::string& sec, const std::string& key, int def) {
    auto v = get(sec, key);
    return v ? parse_num<int>(sec, key, *v) : def;
}

double ConfigFile::get_double(const std::string& sec, const std::string& key, double def) {
    auto v = get(sec, key);
    return v ? parse_num<double>(sec, key, *v) : def;
}

std::uint64_t ConfigFile::get_u64(const std::string& sec, const std::string& key,
                                  std::uint64_t def) {
    auto v = get(sec, key);
    return v ? parse_num<std::uint64_t>(sec, key, *v) : def;
}

bool ConfigFile::get_bool(const std::string& sec, const std::string& key, bool def) {
    auto v = get(sec, key);
    if (!v) return def;
    if (*v == "true" || *v == "1" || *v == "yes") return true;
    if (*v == "false" || *v == "0" || *v == "no") return false;
    throw ConfigError("bad boolean '" + *v + "' for key '" + key + "' in [" + sec + "]");
}

std::vector<int> ConfigFile::get_int_list(const std::string& sec, const std::string& key,
                                          const std::vector<int>& def) {
    auto v = get(sec, key);
    if (!v) return def;
    std::vector<int> out;
    for (const auto& tok : split_list(*v)) out.push_back(parse_num<int>(sec, key, tok));
    return out;
}

std::vector<double> ConfigFile::get_double_list(const std::string& sec, const std::string& key,
                                                const std::vector<double>& def) {
    auto v = get(sec, key);
    if (!v) return def;
    std::vector<double> out;
    for (const auto& tok : split_list(*v)) out.push_back(parse_num<double>(sec, key, tok));
    return out;
}

void ConfigFile::check_fully_consumed(const std::vector<std::string>& known_sections) const {
    for (const auto& [sec, entries] : sections_) {
        if (std::find(known_sections.begin(), known_sections.end(), sec) ==
            known_sections.end())
            throw ConfigError(name_ + ": unknown section [" + sec + "]");
        for (const auto& e : entries)
            if (!e.used)
                throw ConfigError(name_ + ":" + std::to_string(e.line) + ": unknown key '" +
                                  e.key + "' in [" + sec + "]");
    }
}

// ---------------------------------------------------------------- verdicts

Verdict make_verdict(std::string check, double measured, double lo, double hi) {
    Verdict v;
    v.check = std::move(check);
    v.measured = measured;
    v.lo = lo;
    v.hi = hi;
    v.pass = std::isfinite(measured) && measured >= lo && measured <= hi;
    return v;
}

void write_verdicts_csv(std::ostream& os, const std::vector<Verdict>& vs) {
    os << "check,measured,lo,hi,result\n";
    for (const auto& v : vs)
        os << v.check << ',' << csv_num(v.measured) << ',' << csv_num(v.lo) << ','
           << csv_num(v.hi) << ',' << (v.pass ? "PASS" : "FAIL") << '\n';
}

std::uint64_t stream_id(StreamKind kind, int level, int path) {
    return derive_stream(static_cast<std::uint64_t>(kind), static_cast<std::uint64_t>(level),
                         static_cast<std::uint64_t>(path));
}

// ---------------------------------------------------------------- helpers

double median_of(std::vector<double> v) {
    if (v.empty()) throw ConfigError("median of empty set");
    std::sort(v.begin(), v.end());
    const size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double fit_loglog_slope(const std::vector<std::pair<double, double>>& pts) {
    if (pts.size() < 2) throw ConfigError("slope fit needs at least two levels");
    double mx = 0, my = 0;
    std::vector<double> xs, ys;
    for (const auto& [dt, r] : pts) {
        xs.push_back(std::log(dt));
        ys.push_back(std::log(std::max(r, 1e-300)));
        mx += xs.back();
        my += ys.back();
    }
    mx /= static_cast<double>(xs.size());
    my /= static_cast<double>(ys.size());
    double num = 0, den = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        num += (xs[i] - mx) * (ys[i] - my);
        den += (xs[i] - mx) * (xs[i] - mx);
    }
    return num / den;
}

void write_level_csv(std::ostream& os, const LevelEnsemble& lv) {
    os << "path,steps,dt,residual_T,residual_max,retention_min\n";
    for (const auto& r : lv.rows)
        os << r.path << ',' << r.steps << ',' << csv_num(r.dt) << ',' << csv_num(r.residual_T)
           << ',' << csv_num(r.residual_max) << ',' << csv_num(r.retention_min) << '\n';
}

LevelEnsemble read_level_csv(std::istream& is, int level) {
    LevelEnsemble lv;
    lv.level = level;
    std::string line;
    if (!std::getline(is, line) || line.rfind("path,", 0) != 0)
        throw ConfigError("level csv: missing header");
    while (std::getline(is, line)) {
        if (trim(line).empty()) continue;
        const auto parts = split_list(line);
        if (parts.size() != 6) throw ConfigError("level csv: bad row '" + line + "'");
        PathRow r;
        r.path = parse_num<int>("csv", "path", parts[0]);
        r.steps = parse_num<int>("csv", "steps", parts[1]);
        r.dt = csv_parse_num(parts[2]);
        r.residual_T = csv_parse_num(parts[3]);
        r.residual_max = csv_parse_num(parts[4]);
        r.retention_min = csv_parse_num(parts[5]);
        lv.rows.push_back(r);
    }
    if (lv.rows.empty()) throw ConfigError("level csv: no rows");
    lv.dt = lv.rows.front().dt;
    std::vector<double> res;
    for (const auto& r : lv.rows) res.push_back(r.residual_T);
    lv.median_residual_T = median_of(std::move(res));
    return lv;
}

namespace {

// dispatch paths to a small worker pool; results are written by index so the
// output is identical for any worker count
void parallel_paths(int n, int workers, const std::function<void(int)>& fn) {
    if (workers <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr err;
    std::mutex err_mu;
    auto work = [&]() {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mu);
                if (!err) err = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    const int nw = std::min(workers, n);
    pool.reserve(static_cast<size_t>(nw));
    for (int w = 0; w < nw; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
}

HermiteCoeffs h0_coeffs() {
    HermiteCoeffs phi(1, 0, "phi");
    phi.c(0) = 1.0;
    return phi;
}

}  // namespace

// ------------------------------------------------- operator algebra checks

namespace {

// expected derivative coefficients recomputed directly from the multi-index
// arithmetic, independent of the matrix builder
double expected_derivative_entry(const MultiIndex& row, const MultiIndex& col, int axis) {
    MultiIndex up = col, down = col;
    up[static_cast<size_t>(axis)] += 1;
    down[static_cast<size_t>(axis)] -= 1;
    if (row == up) return -std::sqrt((col[static_cast<size_t>(axis)] + 1) / 2.0);
    if (col[static_cast<size_t>(axis)] > 0 && row == down)
        return std::sqrt(col[static_cast<size_t>(axis)] / 2.0);
    return 0.0;
}

HermiteCoeffs random_coeffs(int d, int N, RngStream& rng) {
    HermiteCoeffs f(d, N);
    for (Eigen::Index i = 0; i < f.c.size(); ++i) f.c(i) = 2.0 * rng.uniform01() - 1.0;
    f.c /= f.c.norm();
    return f;
}

}  // namespace

std::vector<Verdict> operator_algebra_checks(int N_big, int N_eval) {
    if (N_eval > N_big - 4) throw ConfigError("operator checks: need N_eval <= N_big - 4");
    std::vector<Verdict> out;

    // derivative recurrence: matrix entries vs direct recomputation
    double rec_err = 0.0;
    for (int d = 1; d <= 2; ++d) {
        for (int axis = 0; axis < d; ++axis) {
            const CoeffOperator op = derivative_matrix(d, axis, N_big);
            const auto rows = enumerate_multi_indices(d, N_big + 1);
            const auto cols = enumerate_multi_indices(d, N_big);
            for (size_t r = 0; r < rows.size(); ++r)
                for (size_t c = 0; c < cols.size(); ++c)
                    rec_err = std::max(rec_err,
                                       std::abs(op.m(static_cast<Eigen::Index>(r),
                                                     static_cast<Eigen::Index>(c)) -
                                                expected_derivative_entry(rows[r], cols[c], axis)));
        }
    }
    out.push_back(make_verdict("derivative-recurrence-entries", rec_err, 0.0, 1e-12));

    // duality: <d psi, phi> = -<psi, d phi> with a cushion on both sides
    double dual_err = 0.0;
    for (int d = 1; d <= 2; ++d) {
        RngStream rng(0xA11CEull, stream_id(StreamKind::Brownian, 90 + d, 0));
        for (int trial = 0; trial < 10; ++trial) {
            const HermiteCoeffs psi = random_coeffs(d, N_big - 2, rng);
            const HermiteCoeffs phi = random_coeffs(d, N_big - 2, rng);
            for (int axis = 0; axis < d; ++axis) {
                const double a = pairing(apply_derivative(psi, axis), phi);
                const double b = pairing(psi, apply_derivative(phi, axis));
                dual_err = std::max(dual_err, std::abs(a + b));
            }
        }
    }
    out.push_back(make_verdict("derivative-duality-sign", dual_err, 0.0, 1e-10));

    // commutation tau_x d = d tau_x on cushioned inputs, relative error
    double comm_err = 0.0;
    {
        RngStream rng(0xA11CEull, stream_id(StreamKind::Brownian, 93, 0));
        const HermiteCoeffs phi1 = recap(random_coeffs(1, N_big - 8, rng), N_big);
        for (double x : {0.5, -0.5, 1.5, -1.5}) {
            const HermiteCoeffs lhs = apply_translation(apply_derivative(phi1, 0), {x});
            const HermiteCoeffs rhs = apply_derivative(apply_translation(phi1, {x}), 0);
            const Eigen::Index m = basis_size(1, N_eval);
            const double den = rhs.c.head(m).norm();
            comm_err = std::max(comm_err, (lhs.c.head(m) - rhs.c.head(m)).norm() / den);
        }
        const HermiteCoeffs phi2 = recap(random_coeffs(2, N_big - 8, rng), N_big);
        for (const auto& xv : std::vector<std::vector<double>>{{0.5, -0.5}, {-0.5, 0.5}}) {
            for (int axis = 0; axis < 2; ++axis) {
                const HermiteCoeffs lhs = apply_translation(apply_derivative(phi2, axis), xv);
                const HermiteCoeffs rhs = apply_derivative(apply_translation(phi2, xv), axis);
                const Eigen::Index m = basis_size(2, N_eval);
                const double den = rhs.c.head(m).norm();
                comm_err = std::max(comm_err, (lhs.c.head(m) - rhs.c.head(m)).norm() / den);
            }
        }
    }
    out.push_back(make_verdict("translation-derivative-commutation", comm_err, 0.0, 1e-6));

    // tau_0 = identity
    double id_err = 0.0;
    for (int d = 1; d <= 2; ++d) {
        const CoeffOperator op =
            translation_matrix(std::vector<double>(static_cast<size_t>(d), 0.0), N_big);
        const Eigen::MatrixXd diff =
            op.m - Eigen::MatrixXd::Identity(op.m.rows(), op.m.cols());
        id_err = std::max(id_err, diff.cwiseAbs().maxCoeff());
    }
    out.push_back(make_verdict("translation-at-zero-identity", id_err, 0.0, 1e-12));

    // tau_x tau_{-x} ~ identity on low-cap probes (tail leak only)
    double grp_err = 0.0;
    {
        RngStream rng(0xA11CEull, stream_id(StreamKind::Brownian, 95, 0));
        const HermiteCoeffs v1 = recap(random_coeffs(1, 10, rng), N_big);
        for (double x : {0.5, -0.5, 1.5, -1.5}) {
            const HermiteCoeffs w = apply_translation(apply_translation(v1, {-x}), {x});
            grp_err = std::max(grp_err, (w.c - v1.c).norm() / v1.c.norm());
        }
        const HermiteCoeffs v2 = recap(random_coeffs(2, 10, rng), N_big);
        for (const auto& xv : std::vector<std::vector<double>>{{0.5, -0.5}, {-0.5, 0.5}}) {
            std::vector<double> back = {-xv[0], -xv[1]};
            const HermiteCoeffs w = apply_translation(apply_translation(v2, back), xv);
            grp_err = std::max(grp_err, (w.c - v2.c).norm() / v2.c.norm());
        }
    }
    out.push_back(make_verdict("translation-group-roundtrip", grp_err, 0.0, 1e-6));
    return out;
}

// ------------------------------------------------- isometry / decomposition

namespace {

// adapted three-piece step integrand: a fixed profile first, then pieces
// pinned to the path's running value (breakpoints at grid indices 3 and 7)
CoeffPath walk_integrand(const RcllPath& X, int cap) {
    CoeffPath psi;
    psi.d = 1;
    psi.N = cap;
    psi.times = X.times;
    psi.predictable = true;
    const Eigen::Index m = basis_size(1, cap);
    psi.values = Eigen::MatrixXd::Zero(m, static_cast<Eigen::Index>(X.times.size()));
    const int K = static_cast<int>(X.times.size()) - 1;
    const int b1 = std::min(3, K), b2 = std::min(7, K);
    const HermiteCoeffs piece0 = delta_coeffs({0.3}, 1, cap);
    for (int k = 0; k <= K; ++k) {
        if (k < b1) {
            psi.values.col(k) = piece0.c;
        } else if (k < b2) {
            psi.values.col(k) = delta_coeffs({X.values(0, b1)}, 1, cap).c;
        } else {
            psi.values.col(k) = 0.5 * delta_coeffs({X.values(0, b2)}, 1, cap).c;
        }
    }
    return psi;
}

}  // namespace

IsometryResult isometry_enumeration_study(const IsometryParams& prm) {
    IsometryResult res;
    const int cap = 12;
    for (double p : prm.ps) {
        long double lhs_acc = 0.0L, rhs_acc = 0.0L;
        long double count = 0.0L;
        for_each_scaled_walk(prm.k, [&](const PathBundle& pb) {
            const CoeffPath psi = walk_integrand(pb.X, cap);
            const CoeffPath Y = integrate_vs_martingale(psi, pb.dec.M, 0);
            const int K = static_cast<int>(pb.X.times.size()) - 1;
            HermiteCoeffs yT(1, cap);
            yT.c = Y.values.col(K);
            const double lhs = norm_p(yT, -p) * norm_p(yT, -p);
            double rhs = 0.0;
            const auto& br = pb.dec.bracket_of(0, 0);
            for (int j = 0; j < K; ++j) {
                HermiteCoeffs pj(1, cap);
                pj.c = psi.values.col(j);
                const double nj = norm_p(pj, -p);
                rhs += nj * nj * (br[static_cast<size_t>(j) + 1] - br[static_cast<size_t>(j)]);
            }
            lhs_acc += lhs;
            rhs_acc += rhs;
            count += 1.0L;
        });
        IsometryResult::Row row;
        row.p = p;
        row.lhs = static_cast<double>(lhs_acc / count);
        row.rhs = static_cast<double>(rhs_acc / count);
        res.rows.push_back(row);
        res.isometry_max_gap = std::max(res.isometry_max_gap, std::abs(row.lhs - row.rhs));
    }

    // same integral through two decompositions: (M, 0) and (M - D, D)
    const double drift = 0.35;
    for_each_scaled_walk(prm.decomposition_k, [&](const PathBundle& pb) {
        const CoeffPath psi = walk_integrand(pb.X, cap);
        const CoeffPath I1 = integrate_vs_semimartingale(psi, pb.dec, 0);

        SemimartingaleDecomposition dec2;
        dec2.A.d = 1;
        dec2.A.times = pb.X.times;
        dec2.A.values = Eigen::MatrixXd::Zero(1, static_cast<Eigen::Index>(pb.X.times.size()));
        for (size_t k = 0; k < pb.X.times.size(); ++k)
            dec2.A.values(0, static_cast<Eigen::Index>(k)) = drift * pb.X.times[k];
        dec2.M = pb.dec.M;
        for (size_t k = 0; k < pb.X.times.size(); ++k)
            dec2.M.values(0, static_cast<Eigen::Index>(k)) -=
                dec2.A.values(0, static_cast<Eigen::Index>(k));
        for (auto& rec : dec2.M.jumps)
            rec.left(0) -= drift * pb.X.times[static_cast<size_t>(rec.index)];
        dec2.bracket = pb.dec.bracket;
        const CoeffPath I2 = integrate_vs_semimartingale(psi, dec2, 0);

        for (Eigen::Index k = 0; k < I1.values.cols(); ++k) {
            const double gap = (I1.values.col(k) - I2.values.col(k)).norm();
            res.decomposition_max_gap = std::max(res.decomposition_max_gap, gap);
        }
    });
    return res;
}

// ------------------------------------------------------------- pure jump

LevelEnsemble purejump_study(const PurejumpParams& prm, std::uint64_t seed, int workers) {
    if (prm.paths < 1) throw ConfigError("purejump: paths >= 1");
    if (prm.N_eval > prm.N_big - 6) throw ConfigError("purejump: need N_eval <= N_big - 6");
    LevelEnsemble lv;
    lv.level = prm.base_level;
    lv.dt = prm.horizon / std::ldexp(1.0, prm.base_level);
    lv.rows.resize(static_cast<size_t>(prm.paths));
    const std::vector<double> grid =
        uniform_grid(prm.horizon, 1 << prm.base_level);
    parallel_paths(prm.paths, workers, [&](int i) {
        RngStream rng(seed, stream_id(StreamKind::PureJump, prm.base_level, i));
        JumpDiffusionModel model;
        model.drift = [](double) { return 0.0; };
        model.vol = [](double) { return 0.0; };
        model.jump_intensity = prm.rate;
        const double lo = prm.jump_min, width = prm.jump_max - prm.jump_min;
        model.jump_size = [lo, width](RngStream& r) { return lo + width * r.uniform01(); };
        model.x0 = 0.0;
        const PathBundle pb = simulate_jump_diffusion(model, grid, rng);
        TranslationCache cache(h0_coeffs(), prm.N_big);
        const ItoReport rep =
            ito_residual(cache, pb.X, {pb.dec.bracket_of(0, 0)}, prm.p, prm.N_eval);
        PathRow row;
        row.path = i;
        row.steps = static_cast<int>(pb.X.times.size()) - 1;
        row.dt = lv.dt;
        row.residual_T = rep.residual_at_end();
        row.residual_max = rep.max_residual();
        row.retention_min = rep.retention.empty() ? 1.0 : rep.retention.back();
        lv.rows[static_cast<size_t>(i)] = row;
    });
    std::vector<double> res;
    for (const auto& r : lv.rows) res.push_back(r.residual_T);
    lv.median_residual_T = median_of(std::move(res));
    return lv;
}

// ------------------------------------------------------------- refinement

namespace {

std::vector<double> aggregate_increments(const std::vector<double>& fine, int factor) {
    std::vector<double> out(fine.size() / static_cast<size_t>(factor), 0.0);
    for (size_t j = 0; j < out.size(); ++j) {
        double s = 0.0;
        for (int q = 0; q < factor; ++q) s += fine[j * static_cast<size_t>(factor) + q];
        out[j] = s;
    }
    return out;
}

void check_refinement_params(const RefinementParams& prm) {
    if (prm.paths < 1) throw ConfigError("refinement: paths >= 1");
    if (prm.levels.size() < 2) throw ConfigError("refinement: need at least two levels");
    for (size_t i = 1; i < prm.levels.size(); ++i)
        if (prm.levels[i] <= prm.levels[i - 1])
            throw ConfigError("refinement: levels must be strictly ascending");
    if (prm.N_eval > prm.N_big - 6) throw ConfigError("refinement: need N_eval <= N_big - 6");
}

RefinementResult finish_refinement(std::vector<LevelEnsemble> levels) {
    RefinementResult out;
    std::vector<std::pair<double, double>> pts;
    for (auto& lv : levels) {
        std::vector<double> res;
        for (const auto& r : lv.rows) res.push_back(r.residual_T);
        lv.median_residual_T = median_of(std::move(res));
        pts.push_back({lv.dt, lv.median_residual_T});
    }
    out.monotone = true;
    for (size_t i = 1; i < levels.size(); ++i)
        if (levels[i].median_residual_T >= levels[i - 1].median_residual_T) out.monotone = false;
    out.slope = fit_loglog_slope(pts);
    out.levels = std::move(levels);
    return out;
}

}  // namespace

RefinementResult brownian_refinement_study(const RefinementParams& prm, std::uint64_t seed,
                                           int workers) {
    check_refinement_params(prm);
    const int Lmax = prm.levels.back();
    std::vector<LevelEnsemble> levels(prm.levels.size());
    for (size_t li = 0; li < prm.levels.size(); ++li) {
        levels[li].level = prm.levels[li];
        levels[li].dt = 1.0 / std::ldexp(1.0, prm.levels[li]);
        levels[li].rows.resize(static_cast<size_t>(prm.paths));
    }
    parallel_paths(prm.paths, workers, [&](int i) {
        std::vector<double> fine;
        if (prm.coupled) {
            RngStream rng(seed, stream_id(StreamKind::Brownian, Lmax, i));
            const int Kf = 1 << Lmax;
            const double sdt = std::sqrt(1.0 / std::ldexp(1.0, Lmax));
            fine.resize(static_cast<size_t>(Kf));
            for (auto& v : fine) v = sdt * rng.gaussian();
        }
        for (size_t li = 0; li < prm.levels.size(); ++li) {
            const int L = prm.levels[li];
            const int K = 1 << L;
            const std::vector<double> grid = uniform_grid(1.0, K);
            PathBundle pb;
            if (prm.coupled) {
                const std::vector<double> inc = aggregate_increments(fine, 1 << (Lmax - L));
                Eigen::MatrixXd dB(1, K);
                for (int j = 0; j < K; ++j) dB(0, j) = inc[static_cast<size_t>(j)];
                pb = brownian_from_increments(grid, dB);
            } else {
                RngStream rng(seed, stream_id(StreamKind::Brownian, L, i));
                pb = simulate_brownian(1, grid, rng);
            }
            TranslationCache cache(h0_coeffs(), prm.N_big);
            const ItoReport rep =
                ito_residual(cache, pb.X, {pb.dec.bracket_of(0, 0)}, prm.p, prm.N_eval);
            PathRow row;
            row.path = i;
            row.steps = K;
            row.dt = levels[li].dt;
            row.residual_T = rep.residual_at_end();
            row.residual_max = rep.max_residual();
            row.retention_min = rep.retention.empty() ? 1.0 : rep.retention.back();
            levels[li].rows[static_cast<size_t>(i)] = row;
        }
    });
    return finish_refinement(std::move(levels));
}

// ------------------------------------------------------------- local time

LocalTimeResult local_time_study(const LocalTimeParams& prm, std::uint64_t seed, int workers) {
    if (prm.paths < 2) throw ConfigError("local-time: paths >= 2");
    if (prm.cap < 1) throw ConfigError("local-time: cap >= 1");
    const int K = 1 << prm.level;
    const double dt = 1.0 / static_cast<double>(K);
    const double H = std::pow(dt, prm.bandwidth_exponent);
    const double kern_scale = 1.0 / (H * std::sqrt(2.0 * M_PI));
    const std::vector<double> hv0 = hermite_values(0.0, prm.cap);

    LocalTimeResult res;
    res.paths = prm.paths;
    res.hermite_values.resize(static_cast<size_t>(prm.paths));
    res.kernel_values.resize(static_cast<size_t>(prm.paths));
    parallel_paths(prm.paths, workers, [&](int i) {
        RngStream rng(seed, stream_id(StreamKind::LocalTime, prm.level, i));
        const double sdt = std::sqrt(dt);
        std::vector<double> hv;
        double x = 0.0;  // left endpoint of the running step
        double herm = 0.0, kern = 0.0;
        for (int k = 0; k < K; ++k) {
            // reconstruction kernel sum_{n<=cap} h_n(0) h_n(x), and the
            // Gaussian occupation-density kernel, both against d<X> = dt
            hermite_values(x, prm.cap, hv);
            double cd = 0.0;
            for (int n = 0; n <= prm.cap; ++n) cd += hv0[static_cast<size_t>(n)] * hv[static_cast<size_t>(n)];
            herm += cd * dt;
            const double z = x / H;
            kern += kern_scale * std::exp(-0.5 * z * z) * dt;
            x += sdt * rng.gaussian();
        }
        res.hermite_values[static_cast<size_t>(i)] = herm;
        res.kernel_values[static_cast<size_t>(i)] = kern;
    });

    auto stats = [](const std::vector<double>& v) {
        long double m = 0.0L;
        for (double x : v) m += x;
        m /= static_cast<long double>(v.size());
        long double s2 = 0.0L;
        for (double x : v) s2 += (x - m) * (x - m);
        s2 /= static_cast<long double>(v.size() - 1);
        const double se = std::sqrt(static_cast<double>(s2) / static_cast<double>(v.size()));
        return std::pair<double, double>(static_cast<double>(m), se);
    };
    std::tie(res.hermite_mean, res.hermite_se) = stats(res.hermite_values);
    std::tie(res.kernel_mean, res.kernel_se) = stats(res.kernel_values);
    std::vector<double> diff(res.hermite_values.size());
    for (size_t i = 0; i < diff.size(); ++i) diff[i] = res.hermite_values[i] - res.kernel_values[i];
    std::tie(res.diff_mean, res.diff_se) = stats(diff);
    return res;
}

void write_local_time_csv(std::ostream& os, const LocalTimeResult& r) {
    os << "path,hermite,kernel\n";
    for (size_t i = 0; i < r.hermite_values.size(); ++i)
        os << i << ',' << csv_num(r.hermite_values[i]) << ',' << csv_num(r.kernel_values[i])
           << '\n';
}

// ------------------------------------------------------------------ levy

LevyIdentityResult levy_identity_study(const LevyIdentityParams& prm, std::uint64_t seed,
                                       int workers) {
    if (prm.paths < 1) throw ConfigError("levy: paths >= 1");
    if (prm.N_eval > prm.N_big - 6) throw ConfigError("levy: need N_eval <= N_big - 6");
    LevyModel model = levy_preset(prm.preset);
    model.base_steps = 1 << prm.base_level;

    LevyIdentityResult res;
    res.rows.resize(static_cast<size_t>(prm.paths));
    res.reports.resize(static_cast<size_t>(prm.paths));
    parallel_paths(prm.paths, workers, [&](int i) {
        RngStream rng(seed, stream_id(StreamKind::LevyIdentity, prm.base_level, i));
        TranslationCache cache(model.phi, prm.N_big);
        CoefficientFunctions cf(model, cache);
        const LevySimResult sim = simulate_fd_sde(model, rng, cf);
        const SpdeReport spde = spde_residual(model, sim, cache, cf, prm.p, prm.N_eval);
        const ItoReport ito = ito_residual(cache, sim.bundle.X, {sim.bundle.dec.bracket_of(0, 0)},
                                           prm.p, prm.N_eval);
        double gap = 0.0;
        for (size_t k = 0; k < ito.residual.size(); ++k)
            gap = std::max(gap, std::abs(ito.residual[k] - spde.report.residual[k]));
        LevyPathRow row;
        row.path = i;
        row.rearrangement_gap = spde.rearrangement_gap;
        row.spde_ito_gap = gap;
        row.residual_T = spde.report.residual_at_end();
        row.max_small_jump = spde.max_small_jump;
        row.small_jump_sq_sum = spde.small_jump_sq_sum;
        row.second_order_ratio = spde.second_order_ratio;
        row.nu_tail_mass = spde.nu_tail_mass;
        row.comp_quad_error = spde.compensator_quad_error;
        row.retention_min = spde.report.retention.empty() ? 1.0 : spde.report.retention.back();
        res.rows[static_cast<size_t>(i)] = row;
        res.reports[static_cast<size_t>(i)] = spde.report;
    });
    for (const auto& r : res.rows) {
        res.max_rearrangement_gap = std::max(res.max_rearrangement_gap, r.rearrangement_gap);
        res.max_spde_ito_gap = std::max(res.max_spde_ito_gap, r.spde_ito_gap);
        res.max_small_jump = std::max(res.max_small_jump, r.max_small_jump);
    }
    return res;
}

void write_levy_identity_csv(std::ostream& os, const LevyIdentityResult& r) {
    os << "path,rearrangement_gap,spde_ito_gap,residual_T,max_small_jump,small_jump_sq_sum,"
          "second_order_ratio,nu_tail_mass,comp_quad_error,retention_min\n";
    for (const auto& row : r.rows)
        os << row.path << ',' << csv_num(row.rearrangement_gap) << ','
           << csv_num(row.spde_ito_gap) << ',' << csv_num(row.residual_T) << ','
           << csv_num(row.max_small_jump) << ',' << csv_num(row.small_jump_sq_sum) << ','
           << csv_num(row.second_order_ratio) << ',' << csv_num(row.nu_tail_mass) << ','
           << csv_num(row.comp_quad_error) << ',' << csv_num(row.retention_min) << '\n';
}

RefinementResult levy_refinement_study(const RefinementParams& prm, const std::string& preset,
                                       std::uint64_t seed, int workers) {
    check_refinement_params(prm);
    LevyModel proto = levy_preset(preset);
    const int Lmax = prm.levels.back();
    std::vector<LevelEnsemble> levels(prm.levels.size());
    for (size_t li = 0; li < prm.levels.size(); ++li) {
        levels[li].level = prm.levels[li];
        levels[li].dt = proto.T / std::ldexp(1.0, prm.levels[li]);
        levels[li].rows.resize(static_cast<size_t>(prm.paths));
    }
    parallel_paths(prm.paths, workers, [&](int i) {
        std::vector<double> fine;
        if (prm.coupled) {
            RngStream rng(seed, stream_id(StreamKind::LevyRefine, Lmax, i));
            const int Kf = 1 << Lmax;
            const double sdt = std::sqrt(proto.T / std::ldexp(1.0, Lmax));
            fine.resize(static_cast<size_t>(Kf));
            for (auto& v : fine) v = sdt * rng.gaussian();
        }
        for (size_t li = 0; li < prm.levels.size(); ++li) {
            const int L = prm.levels[li];
            LevyModel model = proto;
            model.base_steps = 1 << L;
            TranslationCache cache(model.phi, prm.N_big);
            CoefficientFunctions cf(model, cache);
            LevySimResult sim;
            if (prm.coupled) {
                const std::vector<double> inc = aggregate_increments(fine, 1 << (Lmax - L));
                RngStream rng(seed, stream_id(StreamKind::LevyRefine, L, i));
                sim = simulate_fd_sde(model, rng, cf, &inc);
            } else {
                RngStream rng(seed, stream_id(StreamKind::LevyRefine, L, i));
                sim = simulate_fd_sde(model, rng, cf);
            }
            const SpdeReport spde = spde_residual(model, sim, cache, cf, prm.p, prm.N_eval);
            PathRow row;
            row.path = i;
            row.steps = 1 << L;
            row.dt = levels[li].dt;
            row.residual_T = spde.report.residual_at_end();
            row.residual_max = spde.report.max_residual();
            row.retention_min =
                spde.report.retention.empty() ? 1.0 : spde.report.retention.back();
            levels[li].rows[static_cast<size_t>(i)] = row;
        }
    });
    return finish_refinement(std::move(levels));
}

// ---------------------------------------------------------- orchestration

int worker_count_from_env() {
    const char* env = std::getenv("HERMCALC_WORKERS");
    if (!env) return 1;
    try {
        const int n = std::stoi(env);
        return n >= 1 ? n : 1;
    } catch (...) {
        throw ConfigError("HERMCALC_WORKERS must be a positive integer");
    }
}

namespace {

void write_file(const fs::path& path, const std::function<void(std::ostream&)>& fn) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot write '" + path.string() + "'");
    fn(f);
}

void write_refinement_outputs(const fs::path& out, const RefinementResult& ref) {
    for (const auto& lv : ref.levels)
        write_file(out / ("residuals_level_" + std::to_string(lv.level) + ".csv"),
                   [&](std::ostream& os) { write_level_csv(os, lv); });
    write_file(out / "summary_levels.csv", [&](std::ostream& os) {
        os << "level,dt,paths,median_residual_T\n";
        for (const auto& lv : ref.levels)
            os << lv.level << ',' << csv_num(lv.dt) << ',' << lv.rows.size() << ','
               << csv_num(lv.median_residual_T) << '\n';
    });
    write_file(out / "summary_fit.csv", [&](std::ostream& os) {
        os << "slope,monotone,levels\n";
        os << csv_num(ref.slope) << ',' << (ref.monotone ? 1 : 0) << ',' << ref.levels.size()
           << '\n';
    });
}

std::vector<Verdict> refinement_verdicts(const std::string& prefix, const RefinementResult& ref) {
    std::vector<Verdict> v;
    v.push_back(make_verdict(prefix + "-median-monotone-decrease", ref.monotone ? 1.0 : 0.0, 1.0,
                             1.0));
    v.push_back(make_verdict(prefix + "-loglog-slope", ref.slope, 0.3, 0.7));
    return v;
}

}  // namespace

int run_config(const std::string& config_path) {
    ConfigFile cfg = ConfigFile::parse_file(config_path);
    const std::string kind = cfg.require_str("experiment", "kind");
    const std::string outdir = cfg.require_str("experiment", "output");
    const std::uint64_t seed = cfg.get_u64("experiment", "seed", 20260814ull);
    const int workers = worker_count_from_env();
    const fs::path out(outdir);
    fs::create_directories(out);

    std::vector<Verdict> verdicts;

    if (kind == "operator-checks") {
        const int N_big = cfg.get_int(kind, "n_big", 32);
        const int N_eval = cfg.get_int(kind, "n_eval", 26);
        cfg.check_fully_consumed({"experiment", kind});
        verdicts = operator_algebra_checks(N_big, N_eval);
    } else if (kind == "isometry-enumeration") {
        IsometryParams prm;
        prm.k = cfg.get_int(kind, "k", prm.k);
        prm.ps = cfg.get_double_list(kind, "p", prm.ps);
        prm.decomposition_k = cfg.get_int(kind, "decomposition_k", prm.decomposition_k);
        cfg.check_fully_consumed({"experiment", kind});
        const IsometryResult res = isometry_enumeration_study(prm);
        for (const auto& row : res.rows)
            std::cout << "isometry p=" << row.p << ": lhs=" << row.lhs << " rhs=" << row.rhs
                      << "\n";
        verdicts.push_back(
            make_verdict("stochastic-integral-isometry", res.isometry_max_gap, 0.0, 1e-12));
        verdicts.push_back(make_verdict("decomposition-independence", res.decomposition_max_gap,
                                        0.0, 1e-12));
    } else if (kind == "ito-purejump") {
        PurejumpParams prm;
        prm.paths = cfg.get_int(kind, "paths", prm.paths);
        prm.rate = cfg.get_double(kind, "rate", prm.rate);
        prm.horizon = cfg.get_double(kind, "horizon", prm.horizon);
        prm.jump_min = cfg.get_double(kind, "jump_min", prm.jump_min);
        prm.jump_max = cfg.get_double(kind, "jump_max", prm.jump_max);
        prm.base_level = cfg.get_int(kind, "base_level", prm.base_level);
        prm.N_big = cfg.get_int(kind, "n_big", prm.N_big);
        prm.N_eval = cfg.get_int(kind, "n_eval", prm.N_eval);
        prm.p = cfg.get_double(kind, "p", prm.p);
        cfg.check_fully_consumed({"experiment", kind});
        const LevelEnsemble lv = purejump_study(prm, seed, workers);
        write_file(out / ("residuals_level_" + std::to_string(lv.level) + ".csv"),
                   [&](std::ostream& os) { write_level_csv(os, lv); });
        double worst = 0.0;
        for (const auto& r : lv.rows) worst = std::max(worst, r.residual_max);
        verdicts.push_back(make_verdict("purejump-max-residual", worst, 0.0, 1e-8));
    } else if (kind == "ito-brownian") {
        RefinementParams prm;
        prm.levels = cfg.get_int_list(kind, "levels", prm.levels);
        prm.paths = cfg.get_int(kind, "paths", prm.paths);
        prm.coupled = cfg.get_bool(kind, "coupled", prm.coupled);
        prm.N_big = cfg.get_int(kind, "n_big", prm.N_big);
        prm.N_eval = cfg.get_int(kind, "n_eval", prm.N_eval);
        prm.p = cfg.get_double(kind, "p", prm.p);
        cfg.check_fully_consumed({"experiment", kind});
        const RefinementResult ref = brownian_refinement_study(prm, seed, workers);
        write_refinement_outputs(out, ref);
        verdicts = refinement_verdicts("brownian", ref);
    } else if (kind == "local-time") {
        LocalTimeParams prm;
        prm.paths = cfg.get_int(kind, "paths", prm.paths);
        prm.level = cfg.get_int(kind, "level", prm.level);
        prm.cap = cfg.get_int(kind, "cap", prm.cap);
        prm.bandwidth_exponent = cfg.get_double(kind, "bandwidth_exponent", prm.bandwidth_exponent);
        cfg.check_fully_consumed({"experiment", kind});
        const LocalTimeResult res = local_time_study(prm, seed, workers);
        write_file(out / "localtime.csv",
                   [&](std::ostream& os) { write_local_time_csv(os, res); });
        const double joint = std::sqrt(res.hermite_se * res.hermite_se +
                                       res.kernel_se * res.kernel_se);
        verdicts.push_back(make_verdict("localtime-hermite-vs-kernel",
                                        std::abs(res.hermite_mean - res.kernel_mean), 0.0,
                                        3.0 * joint));
        const double j_h = std::sqrt(res.hermite_se * res.hermite_se +
                                     kLocalTimeReferenceSe * kLocalTimeReferenceSe);
        const double j_k = std::sqrt(res.kernel_se * res.kernel_se +
                                     kLocalTimeReferenceSe * kLocalTimeReferenceSe);
        verdicts.push_back(make_verdict("localtime-hermite-vs-reference",
                                        std::abs(res.hermite_mean - kLocalTimeReferenceMean), 0.0,
                                        3.0 * j_h));
        verdicts.push_back(make_verdict("localtime-kernel-vs-reference",
                                        std::abs(res.kernel_mean - kLocalTimeReferenceMean), 0.0,
                                        3.0 * j_k));
    } else if (kind == "levy-spde") {
        const std::vector<int> levels = cfg.get_int_list(kind, "levels", {});
        if (levels.size() == 1)
            throw ConfigError("levy-spde: 'levels' needs at least two entries (or omit it)");
        if (levels.size() >= 2) {
            RefinementParams prm;
            prm.levels = levels;
            prm.paths = cfg.get_int(kind, "paths", prm.paths);
            prm.coupled = cfg.get_bool(kind, "coupled", prm.coupled);
            prm.N_big = cfg.get_int(kind, "n_big", prm.N_big);
            prm.N_eval = cfg.get_int(kind, "n_eval", prm.N_eval);
            prm.p = cfg.get_double(kind, "p", prm.p);
            const std::string preset = cfg.get_str(kind, "preset", "nojump");
            cfg.check_fully_consumed({"experiment", kind});
            const RefinementResult ref = levy_refinement_study(prm, preset, seed, workers);
            write_refinement_outputs(out, ref);
            verdicts = refinement_verdicts("levy-" + preset, ref);
        } else {
            LevyIdentityParams prm;
            prm.preset = cfg.get_str(kind, "preset", prm.preset);
            prm.paths = cfg.get_int(kind, "paths", prm.paths);
            prm.base_level = cfg.get_int(kind, "base_level", prm.base_level);
            prm.N_big = cfg.get_int(kind, "n_big", prm.N_big);
            prm.N_eval = cfg.get_int(kind, "n_eval", prm.N_eval);
            prm.p = cfg.get_double(kind, "p", prm.p);
            cfg.check_fully_consumed({"experiment", kind});
            const LevyIdentityResult res = levy_identity_study(prm, seed, workers);
            write_file(out / ("identities_level_" + std::to_string(prm.base_level) + ".csv"),
                       [&](std::ostream& os) { write_levy_identity_csv(os, res); });
            const fs::path repdir =
                out / ("reports_level_" + std::to_string(prm.base_level));
            fs::create_directories(repdir);
            for (size_t i = 0; i < res.reports.size(); ++i) {
                std::ostringstream name;
                name << "path_" << std::setw(3) << std::setfill('0') << i << ".csv";
                write_file(repdir / name.str(),
                           [&](std::ostream& os) { write_ito_report_csv(os, res.reports[i]); });
            }
            verdicts.push_back(make_verdict("levy-rearrangement-identity",
                                            res.max_rearrangement_gap, 0.0, 1e-9));
            verdicts.push_back(
                make_verdict("levy-ito-consistency", res.max_spde_ito_gap, 0.0, 1e-9));
            verdicts.push_back(
                make_verdict("levy-small-jumps-below-one", res.max_small_jump, 0.0, 1.0));
        }
    } else {
        throw ConfigError("unknown experiment kind '" + kind + "'");
    }

    write_file(out / "verdicts.csv",
               [&](std::ostream& os) { write_verdicts_csv(os, verdicts); });
    bool all = true;
    for (const auto& v : verdicts) {
        std::cout << (v.pass ? "PASS" : "FAIL") << ' ' << v.check << " measured="
                  << csv_num(v.measured) << " bounds=[" << csv_num(v.lo) << ',' << csv_num(v.hi)
                  << "]\n";
        all = all && v.pass;
    }
    return all ? 0 : 1;
}

int summarize_dir(const std::string& dir) {
    const fs::path root(dir);
    if (!fs::is_directory(root)) throw ConfigError("'" + dir + "' is not a directory");
    std::vector<LevelEnsemble> levels;
    for (const auto& entry : fs::directory_iterator(root)) {
        const std::string fname = entry.path().filename().string();
        const std::string prefix = "residuals_level_";
        if (fname.rfind(prefix, 0) != 0 || entry.path().extension() != ".csv") continue;
        const std::string num = fname.substr(prefix.size(), fname.size() - prefix.size() - 4);
        int level = 0;
        try {
            level = std::stoi(num);
        } catch (...) {
            continue;
        }
        std::ifstream f(entry.path());
        levels.push_back(read_level_csv(f, level));
    }
    if (levels.size() < 2)
        throw ConfigError("summarize: need at least two residuals_level_<L>.csv files in '" +
                          dir + "'");
    std::sort(levels.begin(), levels.end(),
              [](const LevelEnsemble& a, const LevelEnsemble& b) { return a.level < b.level; });
    std::vector<std::pair<double, double>> pts;
    for (const auto& lv : levels) pts.push_back({lv.dt, lv.median_residual_T});
    const double slope = fit_loglog_slope(pts);
    bool monotone = true;
    for (size_t i = 1; i < levels.size(); ++i)
        if (levels[i].median_residual_T >= levels[i - 1].median_residual_T) monotone = false;

    write_file(root / "summary_levels.csv", [&](std::ostream& os) {
        os << "level,dt,paths,median_residual_T\n";
        for (const auto& lv : levels)
            os << lv.level << ',' << csv_num(lv.dt) << ',' << lv.rows.size() << ','
               << csv_num(lv.median_residual_T) << '\n';
    });
    write_file(root / "summary_fit.csv", [&](std::ostream& os) {
        os << "slope,monotone,levels\n";
        os << csv_num(slope) << ',' << (monotone ? 1 : 0) << ',' << levels.size() << '\n';
    });
    std::cout << "level  dt            median_residual_T\n";
    for (const auto& lv : levels)
        std::cout << lv.level << "      " << csv_num(lv.dt) << "    "
                  << csv_num(lv.median_residual_T) << "\n";
    std::cout << "loglog slope: " << csv_num(slope) << (monotone ? " (monotone)" : "") << "\n";
    return 0;
}

std::string list_presets_text() {
    std::ostringstream os;
    os << "experiment kinds:\n"
          "  operator-checks        derivative/translation operator algebra suite\n"
          "  isometry-enumeration   exact walk-enumeration isometry + decomposition check\n"
          "  ito-purejump           pure-jump change-of-variable exactness ensemble\n"
          "  ito-brownian           Brownian residual refinement study (coupled noise)\n"
          "  local-time             Brownian local time: basis reconstruction vs kernel\n"
          "  levy-spde              jump-SPDE identities (or refinement when levels given)\n"
          "\nmodel presets (levy-spde):\n";
    for (const auto& name : levy_preset_names()) {
        const LevyModel m = levy_preset(name);
        double large = 0.0;
        for (const auto& a : m.large_atoms) large += a.mass;
        os << "  " << name << ": small_rate=" << m.small_rate << " large_rate=" << large
           << " eps=" << m.eps << " T=" << m.T << " base_steps=" << m.base_steps
           << " bins_per_side=" << m.bins_per_side << "\n";
    }
    os << "\nconfig skeleton:\n"
          "  [experiment]\n"
          "  kind = levy-spde\n"
          "  output = out/levy\n"
          "  seed = 20260814\n"
          "  [levy-spde]\n"
          "  preset = default\n"
          "  paths = 50\n"
          "  base_level = 9\n";
    return os.str();
}

}  // namespace hermcalc
