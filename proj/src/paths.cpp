#include "hermcalc/paths.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "hermcalc/csv.hpp"
#include "hermcalc/errors.hpp"

namespace hermcalc {

Eigen::VectorXd RcllPath::left_limit(int k) const {
    if (const JumpRecord* r = jump_at(k)) return r->left;
    return values.col(k);
}

const JumpRecord* RcllPath::jump_at(int k) const {
    auto it = std::lower_bound(jumps.begin(), jumps.end(), k,
                               [](const JumpRecord& r, int key) { return r.index < key; });
    if (it != jumps.end() && it->index == k) return &*it;
    return nullptr;
}

void RcllPath::validate() const {
    if (times.empty() || times[0] != 0.0) throw NumericError("RcllPath: grid must start at 0");
    for (size_t k = 1; k < times.size(); ++k)
        if (!(times[k] > times[k - 1])) throw NumericError("RcllPath: grid not increasing");
    if (values.cols() != static_cast<Eigen::Index>(times.size()) || values.rows() != d)
        throw NumericError("RcllPath: value array shape mismatch");
    int prev = 0;
    for (const JumpRecord& r : jumps) {
        if (r.index <= prev)
            throw NumericError("RcllPath: jump indices must be strictly increasing, none at 0");
        prev = r.index;
        const Eigen::VectorXd recon = r.left + r.jump;
        if ((recon - values.col(r.index)).cwiseAbs().maxCoeff() > 1e-12)
            throw NumericError("RcllPath: left limit + jump != value at jump index");
    }
}

BracketPath realized_bracket(const RcllPath& X, int i, int j) {
    BracketPath out;
    out.i = i;
    out.j = j;
    const size_t K = X.times.size();
    out.full.assign(K, 0.0);
    out.continuous.assign(K, 0.0);
    double acc = 0.0;
    std::vector<double> jump_part(K, 0.0);
    for (size_t k = 1; k < K; ++k) {
        const double di = X.values(i, static_cast<Eigen::Index>(k)) - X.values(i, static_cast<Eigen::Index>(k - 1));
        const double dj = X.values(j, static_cast<Eigen::Index>(k)) - X.values(j, static_cast<Eigen::Index>(k - 1));
        acc += di * dj;
        out.full[k] = acc;
    }
    double jacc = 0.0;
    size_t rpos = 0;
    for (size_t k = 1; k < K; ++k) {
        while (rpos < X.jumps.size() && X.jumps[rpos].index == static_cast<int>(k)) {
            jacc += X.jumps[rpos].jump(i) * X.jumps[rpos].jump(j);
            ++rpos;
        }
        jump_part[k] = jacc;
    }
    for (size_t k = 0; k < K; ++k) out.continuous[k] = out.full[k] - jump_part[k];
    return out;
}

std::vector<double> uniform_grid(double T, int steps) {
    if (T <= 0 || steps < 1) throw ConfigError("uniform_grid: need T > 0, steps >= 1");
    std::vector<double> g(static_cast<size_t>(steps) + 1);
    for (int k = 0; k <= steps; ++k) g[static_cast<size_t>(k)] = T * k / steps;
    return g;
}

PathBundle simulate_brownian(int d, const std::vector<double>& grid, RngStream& rng) {
    const int K = static_cast<int>(grid.size()) - 1;
    PathBundle out;
    RcllPath& X = out.X;
    X.d = d;
    X.times = grid;
    X.values = Eigen::MatrixXd::Zero(d, K + 1);
    for (int k = 0; k < K; ++k) {
        const double sdt = std::sqrt(grid[static_cast<size_t>(k) + 1] - grid[static_cast<size_t>(k)]);
        for (int a = 0; a < d; ++a)
            X.values(a, k + 1) = X.values(a, k) + sdt * rng.gaussian();
    }
    out.dec.M = X;
    out.dec.A = X;
    out.dec.A.values.setZero();
    out.dec.bracket.assign(static_cast<size_t>(d) * d, std::vector<double>(grid.size(), 0.0));
    for (int a = 0; a < d; ++a)
        for (size_t k = 0; k < grid.size(); ++k)
            out.dec.bracket[static_cast<size_t>(a) * d + a][k] = grid[k];
    return out;
}

PathBundle brownian_from_increments(const std::vector<double>& grid, const Eigen::MatrixXd& dB) {
    const int K = static_cast<int>(grid.size()) - 1;
    const int d = static_cast<int>(dB.rows());
    if (dB.cols() != K) throw ConfigError("brownian_from_increments: need one increment per step");
    PathBundle out;
    RcllPath& X = out.X;
    X.d = d;
    X.times = grid;
    X.values = Eigen::MatrixXd::Zero(d, K + 1);
    for (int k = 0; k < K; ++k)
        for (int a = 0; a < d; ++a) X.values(a, k + 1) = X.values(a, k) + dB(a, k);
    out.dec.M = X;
    out.dec.A = X;
    out.dec.A.values.setZero();
    out.dec.bracket.assign(static_cast<size_t>(d) * d, std::vector<double>(grid.size(), 0.0));
    for (int a = 0; a < d; ++a)
        for (size_t k = 0; k < grid.size(); ++k)
            out.dec.bracket[static_cast<size_t>(a) * d + a][k] = grid[k];
    return out;
}

PathBundle simulate_jump_diffusion(const JumpDiffusionModel& model,
                                   const std::vector<double>& base_grid, RngStream& rng) {
    const double T = base_grid.back();
    // Poisson jump times via exponential gaps, then a jump-adapted grid
    std::vector<double> jt;
    if (model.jump_intensity > 0) {
        double t = rng.exponential() / model.jump_intensity;
        while (t < T) {
            jt.push_back(t);
            t += rng.exponential() / model.jump_intensity;
        }
    }
    std::vector<double> grid = base_grid;
    grid.insert(grid.end(), jt.begin(), jt.end());
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    const int K = static_cast<int>(grid.size()) - 1;
    PathBundle out;
    RcllPath& X = out.X;
    X.d = 1;
    X.times = grid;
    X.values = Eigen::MatrixXd::Zero(1, K + 1);
    out.dec.M = X;
    out.dec.A = X;
    out.dec.bracket.assign(1, std::vector<double>(grid.size(), 0.0));
    std::vector<double>& qv = out.dec.bracket[0];

    X.values(0, 0) = model.x0;
    out.dec.M.values(0, 0) = 0.0;
    out.dec.A.values(0, 0) = 0.0;
    size_t next_jump = 0;
    for (int k = 0; k < K; ++k) {
        const double x = X.values(0, k);
        const double dt = grid[static_cast<size_t>(k) + 1] - grid[static_cast<size_t>(k)];
        const double s = model.vol ? model.vol(x) : 0.0;
        const double dM = s * std::sqrt(dt) * rng.gaussian();
        const double dA_cont = (model.drift ? model.drift(x) : 0.0) * dt;
        const double left = x + dM + dA_cont;
        double value = left, dA = dA_cont;
        if (next_jump < jt.size() && grid[static_cast<size_t>(k) + 1] == jt[next_jump]) {
            const double dj = model.jump_size(rng);
            value = left + dj;  // value - left == dj bit-exactly
            dA += dj;
            JumpRecord rec;
            rec.index = k + 1;
            rec.left = Eigen::VectorXd::Constant(1, left);
            rec.jump = Eigen::VectorXd::Constant(1, dj);
            X.jumps.push_back(rec);
            JumpRecord arec = rec;  // A carries the jumps in this decomposition
            arec.left = Eigen::VectorXd::Constant(1, out.dec.A.values(0, k) + dA_cont);
            out.dec.A.jumps.push_back(arec);
            ++next_jump;
        }
        out.dec.M.values(0, k + 1) = out.dec.M.values(0, k) + dM;
        out.dec.A.values(0, k + 1) = out.dec.A.values(0, k) + dA;
        X.values(0, k + 1) = value;
        qv[static_cast<size_t>(k) + 1] = qv[static_cast<size_t>(k)] + s * s * dt;
    }
    return out;
}

PathBundle scaled_walk_path(int k, std::uint64_t bits) {
    if (k < 1 || k > 20) throw ConfigError("scaled_walk_path: k in 1..20");
    const double step = 1.0 / std::sqrt(static_cast<double>(k));
    PathBundle out;
    RcllPath& X = out.X;
    X.d = 1;
    X.times.resize(static_cast<size_t>(k) + 1);
    X.values = Eigen::MatrixXd::Zero(1, k + 1);
    for (int j = 0; j <= k; ++j) X.times[static_cast<size_t>(j)] = static_cast<double>(j) / k;
    for (int j = 0; j < k; ++j) {
        const double inc = (bits >> j) & 1u ? step : -step;
        X.values(0, j + 1) = X.values(0, j) + inc;
        JumpRecord rec;
        rec.index = j + 1;
        rec.left = Eigen::VectorXd::Constant(1, X.values(0, j));
        rec.jump = Eigen::VectorXd::Constant(1, inc);
        X.jumps.push_back(rec);
    }
    out.dec.M = X;
    out.dec.A = X;
    out.dec.A.values.setZero();
    out.dec.A.jumps.clear();
    out.dec.bracket.assign(1, std::vector<double>(X.times.size()));
    for (int j = 0; j <= k; ++j) out.dec.bracket[0][static_cast<size_t>(j)] = static_cast<double>(j) / k;
    return out;
}

void for_each_scaled_walk(int k, const std::function<void(const PathBundle&)>& fn) {
    const std::uint64_t total = 1ull << k;
    for (std::uint64_t bits = 0; bits < total; ++bits) fn(scaled_walk_path(k, bits));
}

void write_path_csv(std::ostream& os, const RcllPath& X) {
    os << "time";
    for (int a = 0; a < X.d; ++a) os << ",x" << (a + 1);
    os << ",jump\n";
    for (size_t k = 0; k < X.times.size(); ++k) {
        os << csv_num(X.times[k]);
        for (int a = 0; a < X.d; ++a) os << ',' << csv_num(X.values(a, static_cast<Eigen::Index>(k)));
        os << ',' << (X.jump_at(static_cast<int>(k)) ? 1 : 0) << '\n';
    }
}

}  // namespace hermcalc
