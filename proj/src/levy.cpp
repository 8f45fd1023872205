#include "hermcalc/levy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hermcalc/errors.hpp"
#include "hermcalc/operators.hpp"

namespace hermcalc {

namespace {

constexpr double kQuantum = 1e-12;

std::int64_t qkey(double x) { return std::llround(x / kQuantum); }

Eigen::VectorXd vec1(double x) {
    Eigen::VectorXd v(1);
    v << x;
    return v;
}

}  // namespace

void LevyModel::validate() const {
    if (phi.d != 1 || sigma.d != 1 || b.d != 1) throw ConfigError("LevyModel: d = 1 only");
    if (!(eps > 0.0 && eps < 1.0)) throw ConfigError("LevyModel: eps must lie in (0, 1)");
    if (T <= 0.0) throw ConfigError("LevyModel: T > 0 required");
    if (base_steps < 1) throw ConfigError("LevyModel: base_steps >= 1 required");
    if (bins_per_side < 1) throw ConfigError("LevyModel: bins_per_side >= 1 required");
    if (small_rate < 0.0) throw ConfigError("LevyModel: small_rate >= 0 required");
    if (small_rate > 0.0 && (!small_mark || !small_density || !F_small))
        throw ConfigError("LevyModel: small jumps need mark sampler, density, and F");
    double large_mass = 0.0;
    for (const auto& a : large_atoms) {
        if (std::abs(a.x) < 1.0) throw ConfigError("LevyModel: large atoms need |x| >= 1");
        if (a.mass < 0.0) throw ConfigError("LevyModel: atom masses must be >= 0");
        large_mass += a.mass;
    }
    if (large_mass > 0.0 && !G_large) throw ConfigError("LevyModel: large atoms need G");
}

LevyModel default_levy_model() {
    LevyModel m;
    m.phi = HermiteCoeffs(1, 0, "phi");
    m.phi.c(0) = 1.0;
    m.sigma = HermiteCoeffs(1, 0, "sigma");
    m.sigma.c(0) = 0.4;
    m.b = HermiteCoeffs(1, 1, "b");
    m.b.c(1) = 0.2;
    m.F_small = [](double x, double mark) { return mark / (1.0 + x * x); };
    m.G_large = [](double, double mark) { return mark; };
    m.eps = 0.05;
    const double eps = m.eps;
    const double lam1 = 6.0, lam2 = 1.0;
    m.small_rate = lam1;
    m.small_density = [lam1, eps](double x) {
        const double a = std::abs(x);
        return (a > eps && a < 1.0) ? lam1 / (2.0 * (1.0 - eps)) : 0.0;
    };
    // draw order inside one mark: sign first, then magnitude
    m.small_mark = [eps](RngStream& rng) {
        const bool neg = rng.uniform01() < 0.5;
        const double mag = eps + (1.0 - eps) * rng.uniform01();
        return neg ? -mag : mag;
    };
    m.large_atoms = {{1.5, lam2 / 2.0}, {-1.5, lam2 / 2.0}};
    m.T = 1.0;
    m.base_steps = 512;
    m.bins_per_side = 12;
    return m;
}

LevyModel levy_preset(const std::string& name) {
    LevyModel m = default_levy_model();
    if (name == "default") return m;
    if (name == "nojump") {
        m.small_rate = 0.0;
        m.small_mark = nullptr;
        m.small_density = nullptr;
        m.large_atoms.clear();
        return m;
    }
    if (name == "purejump") {
        m.sigma.c.setZero();
        m.b.c.setZero();
        return m;
    }
    throw ConfigError("unknown model preset '" + name + "'");
}

std::vector<std::string> levy_preset_names() { return {"default", "nojump", "purejump"}; }

JumpBins make_jump_bins(const LevyModel& m, int bins_per_side) {
    JumpBins bins;
    if (!m.small_density) return bins;
    const int B = bins_per_side;
    std::vector<double> edges(static_cast<size_t>(B) + 1);
    for (int i = 0; i <= B; ++i)
        edges[static_cast<size_t>(i)] = m.eps * std::pow(1.0 / m.eps, double(i) / B);
    edges.back() = 1.0;
    for (int side = 0; side < 2; ++side) {
        const double sgn = side == 0 ? 1.0 : -1.0;
        for (int i = 0; i < B; ++i) {
            const double node = sgn * 0.5 * (edges[i] + edges[i + 1]);
            const double width = edges[i + 1] - edges[i];
            const double dens = m.small_density(node);
            if (!std::isfinite(dens) || dens < 0.0)
                throw NumericError("jump bins: density invalid at node " + std::to_string(node));
            bins.node.push_back(node);
            bins.mass.push_back(dens * width);
        }
    }
    return bins;
}

CoefficientFunctions::CoefficientFunctions(const LevyModel& model, TranslationCache& cache)
    : model_(model), cache_(cache), bins_(make_jump_bins(model, model.bins_per_side)) {}

double CoefficientFunctions::sigma_bar(double x) {
    const std::int64_t k = qkey(x);
    auto it = sig_.find(k);
    if (it != sig_.end()) return it->second;
    const double v = pairing(model_.sigma, cache_.at(x).t);
    sig_.emplace(k, v);
    return v;
}

double CoefficientFunctions::b_bar(double x) {
    const std::int64_t k = qkey(x);
    auto it = bb_.find(k);
    if (it != bb_.end()) return it->second;
    const double v = pairing(model_.b, cache_.at(x).t);
    bb_.emplace(k, v);
    return v;
}

double CoefficientFunctions::kappa_tilde(double x) {
    if (!model_.F_small || bins_.node.empty()) return 0.0;
    const std::int64_t k = qkey(x);
    auto it = kap_.find(k);
    if (it != kap_.end()) return it->second;
    double v = 0.0;
    for (size_t bi = 0; bi < bins_.node.size(); ++bi)
        v += model_.F_small(x, bins_.node[bi]) * bins_.mass[bi];
    kap_.emplace(k, v);
    return v;
}

HermiteCoeffs apply_A(const HermiteCoeffs& state, const HermiteCoeffs& sigma) {
    if (state.d != 1) throw ConfigError("apply_A: d = 1 only");
    const double s = pairing(sigma, state);
    HermiteCoeffs out = apply_derivative(state, 0);
    out.c *= -s;
    out.label = "A(state)";
    return out;
}

HermiteCoeffs apply_L(const HermiteCoeffs& state, const HermiteCoeffs& sigma,
                      const HermiteCoeffs& b) {
    if (state.d != 1) throw ConfigError("apply_L: d = 1 only");
    const double s = pairing(sigma, state);
    const double bb = pairing(b, state);
    const HermiteCoeffs d1 = apply_derivative(state, 0);
    const HermiteCoeffs d2 = apply_derivative(d1, 0);
    HermiteCoeffs out = recap(d1, d2.N);
    out.c *= -bb;
    out.c += (0.5 * s * s) * d2.c;
    out.label = "L(state)";
    return out;
}

LevySimResult simulate_fd_sde(const LevyModel& model, RngStream& rng, CoefficientFunctions& cf,
                              const std::vector<double>* injected_dB) {
    model.validate();
    const double T = model.T;

    struct Ev {
        double t;
        double mark;
        bool small;
    };
    std::vector<Ev> evs;

    // deterministic draw order: small times, small marks, large times, large marks
    std::vector<double> small_times;
    if (model.small_rate > 0.0) {
        double t = rng.exponential() / model.small_rate;
        while (t < T) {
            small_times.push_back(t);
            t += rng.exponential() / model.small_rate;
        }
    }
    for (double t : small_times) evs.push_back({t, 0.0, true});
    for (auto& e : evs) e.mark = model.small_mark(rng);

    double large_rate = 0.0;
    for (const auto& a : model.large_atoms) large_rate += a.mass;
    std::vector<double> large_times;
    if (large_rate > 0.0) {
        double t = rng.exponential() / large_rate;
        while (t < T) {
            large_times.push_back(t);
            t += rng.exponential() / large_rate;
        }
    }
    for (double t : large_times) {
        const double u = rng.uniform01() * large_rate;
        double acc = 0.0;
        double mark = model.large_atoms.back().x;
        for (const auto& a : model.large_atoms) {
            acc += a.mass;
            if (u <= acc) {
                mark = a.x;
                break;
            }
        }
        evs.push_back({t, mark, false});
    }

    std::sort(evs.begin(), evs.end(), [](const Ev& a, const Ev& b) { return a.t < b.t; });
    for (size_t i = 1; i < evs.size(); ++i)
        if (evs[i].t == evs[i - 1].t)
            throw NumericError("coincident jump times at t=" + std::to_string(evs[i].t) +
                               "; use a different seed");

    if (injected_dB) {
        if (model.small_rate > 0.0 || !model.large_atoms.empty())
            throw ConfigError("injected increments require a jump-free model");
        if (static_cast<int>(injected_dB->size()) != model.base_steps)
            throw ConfigError("injected increment count must equal base_steps");
    }

    std::vector<double> grid = uniform_grid(T, model.base_steps);
    for (const auto& e : evs) grid.push_back(e.t);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    const int K = static_cast<int>(grid.size()) - 1;
    RcllPath X, M, A;
    X.d = M.d = A.d = 1;
    X.times = M.times = A.times = grid;
    X.values = Eigen::MatrixXd::Zero(1, K + 1);
    M.values = Eigen::MatrixXd::Zero(1, K + 1);
    A.values = Eigen::MatrixXd::Zero(1, K + 1);
    X.values(0, 0) = model.x0;
    std::vector<double> qv(static_cast<size_t>(K) + 1, 0.0);
    LevyNoiseRecord noise;
    noise.dB.resize(static_cast<size_t>(K));

    size_t epos = 0;
    for (int j = 0; j < K; ++j) {
        const double x = X.values(0, j);
        const double h = grid[static_cast<size_t>(j) + 1] - grid[static_cast<size_t>(j)];
        const double sb = cf.sigma_bar(x);
        const double bb = cf.b_bar(x);
        const double comp = -cf.kappa_tilde(x);  // compensator drift
        const double db = injected_dB ? (*injected_dB)[static_cast<size_t>(j)]
                                      : std::sqrt(h) * rng.gaussian();
        noise.dB[static_cast<size_t>(j)] = db;
        const double dM = sb * db;
        const double dA = bb * h + comp * h;
        const double left = x + dM + dA;
        const double aleft = A.values(0, j) + dA;

        double dj = 0.0;
        if (epos < evs.size() && evs[epos].t == grid[static_cast<size_t>(j) + 1]) {
            const Ev& e = evs[epos];
            dj = e.small ? model.F_small(left, e.mark) : model.G_large(left, e.mark);
            X.jumps.push_back({j + 1, vec1(left), vec1(dj)});
            A.jumps.push_back({j + 1, vec1(aleft), vec1(dj)});
            noise.events.push_back({j + 1, e.mark, e.small, left, dj});
            ++epos;
        }
        const double value = left + dj;
        if (!std::isfinite(value)) {
            std::ostringstream ss;
            ss << "simulated state not finite at t=" << grid[static_cast<size_t>(j) + 1]
               << " (stream " << rng.stream_id() << ")";
            throw NumericError(ss.str());
        }
        X.values(0, j + 1) = value;
        M.values(0, j + 1) = M.values(0, j) + dM;
        A.values(0, j + 1) = aleft + dj;
        qv[static_cast<size_t>(j) + 1] = qv[static_cast<size_t>(j)] + sb * sb * h;
    }
    if (epos != evs.size()) throw NumericError("jump event missed by the grid sweep");

    X.validate();
    LevySimResult res;
    res.bundle.X = std::move(X);
    res.bundle.dec.M = std::move(M);
    res.bundle.dec.A = std::move(A);
    res.bundle.dec.bracket = {qv};
    res.noise = std::move(noise);
    return res;
}

namespace {

void check_retention(const TranslationCache::Entry& e, double floor, double t, int N_big) {
    if (e.retention < floor) {
        std::ostringstream ss;
        ss << "translation mass retention " << e.retention << " below floor " << floor
           << " at t=" << t << " (|x| too large for cap " << N_big << ")";
        throw NumericError(ss.str());
    }
}

// The three small-jump integral series at the evaluation head, each built by
// its own loop: N (events only), compensator (grid/bins only), Ntilde
// (events minus compensator, interleaved in time order).
std::vector<Eigen::VectorXd> series_N(const LevySimResult& sim, TranslationCache& cache,
                                      Eigen::Index hs) {
    const RcllPath& X = sim.bundle.X;
    const size_t K = X.times.size();
    std::vector<Eigen::VectorXd> out(K, Eigen::VectorXd::Zero(hs));
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(hs);
    size_t epos = 0;
    for (size_t k = 1; k < K; ++k) {
        while (epos < sim.noise.events.size() &&
               sim.noise.events[epos].index == static_cast<int>(k)) {
            const auto& ev = sim.noise.events[epos];
            if (ev.small) {
                acc += cache.at(X.values(0, static_cast<Eigen::Index>(k))).t.c.head(hs);
                acc -= cache.at(ev.left).t.c.head(hs);
            }
            ++epos;
        }
        out[k] = acc;
    }
    return out;
}

std::vector<Eigen::VectorXd> series_comp(const LevyModel& model, const LevySimResult& sim,
                                         TranslationCache& cache, const JumpBins& bins,
                                         Eigen::Index hs) {
    const RcllPath& X = sim.bundle.X;
    const size_t K = X.times.size();
    std::vector<Eigen::VectorXd> out(K, Eigen::VectorXd::Zero(hs));
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(hs);
    for (size_t k = 1; k < K; ++k) {
        const double x = X.values(0, static_cast<Eigen::Index>(k) - 1);
        const double h = X.times[k] - X.times[k - 1];
        const auto& ej = cache.at(x);
        for (size_t bi = 0; bi < bins.node.size(); ++bi) {
            if (bins.mass[bi] == 0.0) continue;
            const double fb = model.F_small(x, bins.node[bi]);
            const double wgt = bins.mass[bi] * h;
            acc += wgt * cache.at(x + fb).t.c.head(hs);
            acc -= wgt * ej.t.c.head(hs);
        }
        out[k] = acc;
    }
    return out;
}

std::vector<Eigen::VectorXd> series_Ntilde(const LevyModel& model, const LevySimResult& sim,
                                           TranslationCache& cache, const JumpBins& bins,
                                           Eigen::Index hs) {
    const RcllPath& X = sim.bundle.X;
    const size_t K = X.times.size();
    std::vector<Eigen::VectorXd> out(K, Eigen::VectorXd::Zero(hs));
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(hs);
    size_t epos = 0;
    for (size_t k = 1; k < K; ++k) {
        const double x = X.values(0, static_cast<Eigen::Index>(k) - 1);
        const double h = X.times[k] - X.times[k - 1];
        const auto& ej = cache.at(x);
        for (size_t bi = 0; bi < bins.node.size(); ++bi) {
            if (bins.mass[bi] == 0.0) continue;
            const double fb = model.F_small(x, bins.node[bi]);
            const double wgt = bins.mass[bi] * h;
            acc -= wgt * cache.at(x + fb).t.c.head(hs);
            acc += wgt * ej.t.c.head(hs);
        }
        while (epos < sim.noise.events.size() &&
               sim.noise.events[epos].index == static_cast<int>(k)) {
            const auto& ev = sim.noise.events[epos];
            if (ev.small) {
                acc += cache.at(X.values(0, static_cast<Eigen::Index>(k))).t.c.head(hs);
                acc -= cache.at(ev.left).t.c.head(hs);
            }
            ++epos;
        }
        out[k] = acc;
    }
    return out;
}

}  // namespace

SpdeReport spde_residual(const LevyModel& model, const LevySimResult& sim,
                         TranslationCache& cache, CoefficientFunctions& cf, double p, int N_eval,
                         double retention_floor) {
    const RcllPath& X = sim.bundle.X;
    const int N_big = cache.N_big();
    const int N_asm = N_big + 2;
    if (N_eval > N_big - 6) throw ConfigError("spde_residual: need N_eval <= N_big - 6");
    if (sim.noise.dB.size() + 1 != X.times.size())
        throw ConfigError("spde_residual: noise record does not match the grid");

    const Eigen::Index rows = basis_size(1, N_asm);
    const Eigen::VectorXd w = sobolev_weights(1, N_eval, -p - 1.0);
    const JumpBins& bins = cf.bins();

    SpdeReport rep;
    {
        std::ostringstream ss;
        ss << "residual norm: dual order -(p+1) = " << -(p + 1.0) << " at cap " << N_eval
           << " (one regularity unit below the state; signed-order convention)";
        rep.norm_note = ss.str();
    }
    ItoReport& R = rep.report;
    R.d = 1;
    R.p = p;
    R.N_big = N_big;
    R.N_eval = N_eval;
    R.times = X.times;
    const size_t K = X.times.size();
    R.residual.assign(K, 0.0);
    R.first_order.assign(K, 0.0);
    R.second_order.assign(K, 0.0);
    R.jump_term.assign(K, 0.0);
    R.retention.assign(K, 1.0);

    Eigen::VectorXd termB = Eigen::VectorXd::Zero(rows);   // int A(Y) dB
    Eigen::VectorXd termL = Eigen::VectorXd::Zero(rows);   // int L(Y) ds
    Eigen::VectorXd termNu = Eigen::VectorXd::Zero(rows);  // nu x ds, (tau_F - Id + F d)
    Eigen::VectorXd termNt = Eigen::VectorXd::Zero(rows);  // Ntilde (events - compensator)
    Eigen::VectorXd termN = Eigen::VectorXd::Zero(rows);   // large-jump events
    Eigen::VectorXd rhs(rows), diff(rows), jtmp(rows);

    const auto& e0 = cache.at(X.values(0, 0));
    Eigen::VectorXd base = Eigen::VectorXd::Zero(rows);
    base.head(e0.t.c.size()) = e0.t.c;
    double min_ret = e0.retention;

    size_t epos = 0;
    for (size_t k = 0; k < K; ++k) {
        if (k > 0) {
            const size_t j = k - 1;
            const double x = X.values(0, static_cast<Eigen::Index>(j));
            const double h = X.times[k] - X.times[j];
            const auto& ej = cache.at(x);
            check_retention(ej, retention_floor, X.times[j], N_big);
            min_ret = std::min(min_ret, ej.retention);
            const double sb = cf.sigma_bar(x);
            const double bb = cf.b_bar(x);
            const double kt = cf.kappa_tilde(x);
            const Eigen::VectorXd& d1 = ej.dt[0].c;
            const Eigen::VectorXd& d2 = ej.d2t[0].c;
            termB.head(d1.size()) -= (sb * sim.noise.dB[j]) * d1;
            termL.head(d2.size()) += (0.5 * sb * sb * h) * d2;
            termL.head(d1.size()) -= (bb * h) * d1;
            termNu.head(d1.size()) += (kt * h) * d1;
            for (size_t bi = 0; bi < bins.node.size(); ++bi) {
                if (bins.mass[bi] == 0.0) continue;
                const double fb = model.F_small(x, bins.node[bi]);
                const auto& eb = cache.at(x + fb);
                check_retention(eb, retention_floor, X.times[j], N_big);
                min_ret = std::min(min_ret, eb.retention);
                const double wgt = bins.mass[bi] * h;
                termNu.head(eb.t.c.size()) += wgt * eb.t.c;
                termNu.head(ej.t.c.size()) -= wgt * ej.t.c;
                termNt.head(eb.t.c.size()) -= wgt * eb.t.c;
                termNt.head(ej.t.c.size()) += wgt * ej.t.c;
            }
            while (epos < sim.noise.events.size() &&
                   sim.noise.events[epos].index == static_cast<int>(k)) {
                const auto& ev = sim.noise.events[epos];
                const auto& post = cache.at(X.values(0, static_cast<Eigen::Index>(k)));
                const auto& pre = cache.at(ev.left);
                check_retention(post, retention_floor, X.times[k], N_big);
                check_retention(pre, retention_floor, X.times[k], N_big);
                min_ret = std::min({min_ret, post.retention, pre.retention});
                Eigen::VectorXd& dst = ev.small ? termNt : termN;
                dst.head(post.t.c.size()) += post.t.c;
                dst.head(pre.t.c.size()) -= pre.t.c;
                if (ev.small) {
                    rep.small_jump_sq_sum += ev.jump * ev.jump;
                    rep.max_small_jump = std::max(rep.max_small_jump, std::abs(ev.jump));
                    if (ev.jump != 0.0) {
                        Eigen::VectorXd so = Eigen::VectorXd::Zero(rows);
                        so.head(post.t.c.size()) += post.t.c;
                        so.head(pre.t.c.size()) -= pre.t.c;
                        const Eigen::VectorXd& pdt = pre.dt[0].c;
                        so.head(pdt.size()) += ev.jump * pdt;
                        rep.second_order_ratio =
                            std::max(rep.second_order_ratio,
                                     weighted_head_norm(so, w) / (ev.jump * ev.jump));
                    }
                }
                ++epos;
            }
        }
        const auto& ek = cache.at(X.values(0, static_cast<Eigen::Index>(k)));
        min_ret = std::min(min_ret, ek.retention);
        rhs = base + termB + termL + termNu + termNt + termN;
        diff = -rhs;
        diff.head(ek.t.c.size()) += ek.t.c;
        jtmp = termNu + termNt + termN;
        R.residual[k] = weighted_head_norm(diff, w);
        R.first_order[k] = weighted_head_norm(termB, w);
        R.second_order[k] = weighted_head_norm(termL, w);
        R.jump_term[k] = weighted_head_norm(jtmp, w);
        R.retention[k] = min_ret;
    }

    // proof rearrangement on small jumps: N = Ntilde + compensator, three
    // independently accumulated series
    const Eigen::Index hs = basis_size(1, N_eval);
    const auto sN = series_N(sim, cache, hs);
    const auto sC = series_comp(model, sim, cache, bins, hs);
    const auto sNt = series_Ntilde(model, sim, cache, bins, hs);
    for (size_t k = 0; k < K; ++k) {
        const Eigen::VectorXd gap = sN[k] - sNt[k] - sC[k];
        rep.rearrangement_gap = std::max(rep.rearrangement_gap, weighted_head_norm(gap, w));
    }

    // error-budget lines: nu tail mass below eps, and the bin-halving probe
    // on the compensator quadrature
    if (model.small_density) {
        const int TB = 400;
        const double we = model.eps / TB;
        double s = 0.0;
        for (int i = 0; i < TB; ++i) {
            const double xm = (i + 0.5) * we;
            s += xm * xm * (model.small_density(xm) + model.small_density(-xm)) * we;
        }
        rep.nu_tail_mass = s;
    }
    if (model.F_small && model.small_density) {
        const JumpBins fine = make_jump_bins(model, 2 * model.bins_per_side);
        auto kappa_fine = [&](double x) {
            double s = 0.0;
            for (size_t bi = 0; bi < fine.node.size(); ++bi)
                s += model.F_small(x, fine.node[bi]) * fine.mass[bi];
            return s;
        };
        const size_t stride = std::max<size_t>(1, K / 16);
        for (size_t k = 0; k < K; k += stride) {
            const double x = X.values(0, static_cast<Eigen::Index>(k));
            rep.compensator_quad_error = std::max(
                rep.compensator_quad_error, std::abs(kappa_fine(x) - cf.kappa_tilde(x)));
        }
    }
    return rep;
}

}  // namespace hermcalc
