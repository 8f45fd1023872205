#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "hermcalc/coeffs.hpp"
#include "hermcalc/errors.hpp"
#include "hermcalc/hermite_eval.hpp"
#include "hermcalc/integration.hpp"
#include "hermcalc/ito.hpp"
#include "hermcalc/operators.hpp"
#include "hermcalc/paths.hpp"
#include "hermcalc/rng.hpp"

using namespace hermcalc;

namespace {

HermiteCoeffs ground_state(int N) {
    HermiteCoeffs f(1, N);
    f.c(0) = 1.0;
    return f;
}

// predictable coefficient path: column j is the point mass at X(t_j)
CoeffPath delta_along(const RcllPath& X, int N) {
    CoeffPath G;
    G.d = X.d;
    G.N = N;
    G.times = X.times;
    G.values.resize(basis_size(X.d, N), static_cast<Eigen::Index>(X.times.size()));
    for (size_t k = 0; k < X.times.size(); ++k) {
        Eigen::VectorXd x = X.value(static_cast<int>(k));
        std::vector<double> xv(x.data(), x.data() + x.size());
        G.values.col(static_cast<Eigen::Index>(k)) = delta_coeffs(xv, X.d, N).c;
    }
    return G;
}

}  // namespace

TEST_CASE("uniform grid endpoints and spacing") {
    auto g = uniform_grid(2.0, 4);
    REQUIRE(g.size() == 5);
    CHECK(g[0] == 0.0);
    CHECK(g[4] == 2.0);
    CHECK(g[1] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(g[3] == doctest::Approx(1.5).epsilon(1e-15));
}

TEST_CASE("scaled walk: jumps, decomposition and bracket") {
    const int k = 3;
    auto b = scaled_walk_path(k, 0b101);  // up, down, up
    b.X.validate();
    const double s = 1.0 / std::sqrt(3.0);
    REQUIRE(b.X.times.size() == 4);
    CHECK(b.X.value(1)(0) == doctest::Approx(s).epsilon(1e-15));
    CHECK(b.X.value(2)(0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
    CHECK(b.X.value(3)(0) == doctest::Approx(s).epsilon(1e-15));

    REQUIRE(b.X.jumps.size() == 3);
    for (const auto& rec : b.X.jumps) {
        // value = left + jump must hold bit-exactly
        CHECK(b.X.value(rec.index)(0) == rec.left(0) + rec.jump(0));
        CHECK(std::abs(rec.jump(0)) == doctest::Approx(s).epsilon(1e-15));
    }

    // martingale part is the walk itself, finite-variation part vanishes
    for (int j = 0; j <= 3; ++j) {
        CHECK(b.dec.M.value(j)(0) == b.X.value(j)(0));
        CHECK(b.dec.A.value(j)(0) == 0.0);
        CHECK(b.dec.bracket_of(0, 0)[static_cast<size_t>(j)] ==
              doctest::Approx(j / 3.0).epsilon(1e-15));
    }

    // realized quadratic variation of the full path is 1
    auto rb = realized_bracket(b.X, 0, 0);
    CHECK(rb.full.back() == doctest::Approx(1.0).epsilon(1e-14));
    // every increment is a recorded jump, so the continuous part vanishes
    CHECK(std::abs(rb.continuous.back()) <= 1e-14);
}

TEST_CASE("walk enumeration covers all sign patterns symmetrically") {
    int count = 0;
    double sum_final = 0.0;
    for_each_scaled_walk(4, [&](const PathBundle& b) {
        b.X.validate();
        ++count;
        sum_final += b.X.value(4)(0);
    });
    CHECK(count == 16);
    CHECK(std::abs(sum_final) <= 1e-12);
}

TEST_CASE("brownian bundle invariants") {
    RngStream rng(101, 0);
    auto grid = uniform_grid(1.0, 128);
    auto b = simulate_brownian(2, grid, rng);
    b.X.validate();
    CHECK(b.X.jumps.empty());
    CHECK(b.X.value(0).norm() == 0.0);
    for (size_t j = 0; j < grid.size(); ++j) {
        CHECK(b.dec.bracket_of(0, 0)[j] == doctest::Approx(grid[j]).epsilon(1e-15));
        CHECK(b.dec.bracket_of(1, 1)[j] == doctest::Approx(grid[j]).epsilon(1e-15));
        CHECK(b.dec.bracket_of(0, 1)[j] == 0.0);
        CHECK(b.dec.A.value(static_cast<int>(j)).norm() == 0.0);
        CHECK((b.dec.M.value(static_cast<int>(j)) - b.X.value(static_cast<int>(j))).norm() == 0.0);
    }

    // same stream id reproduces the same path bit for bit
    RngStream rng2(101, 0);
    auto b2 = simulate_brownian(2, grid, rng2);
    CHECK((b.X.values - b2.X.values).lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("brownian path from prescribed increments") {
    auto grid = uniform_grid(1.0, 4);
    Eigen::MatrixXd dB(1, 4);
    dB << 0.1, -0.2, 0.3, 0.05;
    auto b = brownian_from_increments(grid, dB);
    CHECK(b.X.value(0)(0) == 0.0);
    CHECK(b.X.value(1)(0) == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(b.X.value(2)(0) == doctest::Approx(-0.1).epsilon(1e-15));
    CHECK(b.X.value(4)(0) == doctest::Approx(0.25).epsilon(1e-15));
    Eigen::MatrixXd bad(1, 3);
    CHECK_THROWS_AS(brownian_from_increments(grid, bad), ConfigError);
}

TEST_CASE("jump diffusion: drift only plus jumps") {
    JumpDiffusionModel m;
    m.drift = [](double) { return 0.5; };
    m.vol = [](double) { return 0.0; };
    m.jump_intensity = 4.0;
    m.jump_size = [](RngStream& r) { return r.uniform01() - 0.5; };
    RngStream rng(102, 3);
    auto base = uniform_grid(1.0, 16);
    auto b = simulate_jump_diffusion(m, base, rng);
    b.X.validate();

    // the jump-adapted grid refines the base grid
    for (double t : base)
        CHECK(std::find(b.X.times.begin(), b.X.times.end(), t) != b.X.times.end());

    // zero volatility: martingale part and bracket vanish identically
    for (size_t j = 0; j < b.X.times.size(); ++j) {
        CHECK(b.dec.M.value(static_cast<int>(j))(0) == 0.0);
        CHECK(b.dec.bracket_of(0, 0)[j] == 0.0);
    }

    // state = drift integral + accumulated jumps, reconstructed step by step
    double x = 0.0;
    for (size_t j = 1; j < b.X.times.size(); ++j) {
        x += 0.5 * (b.X.times[j] - b.X.times[j - 1]);
        if (const auto* rec = b.X.jump_at(static_cast<int>(j))) {
            CHECK(std::abs(rec->left(0) - x) <= 1e-12);
            x = rec->left(0) + rec->jump(0);
        }
        CHECK(std::abs(b.X.value(static_cast<int>(j))(0) - x) <= 1e-12);
        x = b.X.value(static_cast<int>(j))(0);
    }
    CHECK(!b.X.jumps.empty());
}

TEST_CASE("jump diffusion: constant volatility bracket") {
    JumpDiffusionModel m;
    m.drift = [](double) { return 0.0; };
    m.vol = [](double) { return 0.7; };
    RngStream rng(103, 1);
    auto b = simulate_jump_diffusion(m, uniform_grid(1.0, 32), rng);
    CHECK(b.X.jumps.empty());
    for (size_t j = 0; j < b.X.times.size(); ++j)
        CHECK(b.dec.bracket_of(0, 0)[j] ==
              doctest::Approx(0.49 * b.X.times[j]).epsilon(1e-12));
}

TEST_CASE("left-endpoint sums against a scalar grid function") {
    CoeffPath G;
    G.d = 1;
    G.N = 0;
    G.times = uniform_grid(1.0, 4);
    G.values.resize(1, 5);
    G.values << 1.0, 2.0, 3.0, 4.0, 5.0;
    std::vector<double> Z = {0.0, 0.25 * 0.25, 0.25, 0.5625, 1.0};  // t^2 on the grid
    auto out = integrate_vs_scalar_grid(G, Z);
    // sum_{j<k} G_j (Z_{j+1} - Z_j)
    double acc = 0.0;
    for (int k = 1; k <= 4; ++k) {
        acc += G.values(0, k - 1) * (Z[static_cast<size_t>(k)] - Z[static_cast<size_t>(k - 1)]);
        CHECK(out.values(0, k) == doctest::Approx(acc).epsilon(1e-15));
    }
    CHECK(out.values(0, 0) == 0.0);
}

TEST_CASE("integrals never read the integrand at the right endpoint") {
    auto b = scaled_walk_path(5, 0b10110);
    auto G = delta_along(b.X, 6);
    auto out1 = integrate_vs_martingale(G, b.dec.M);
    CoeffPath G2 = G;
    G2.values.col(G2.values.cols() - 1).setConstant(123.0);
    auto out2 = integrate_vs_martingale(G2, b.dec.M);
    CHECK((out1.values - out2.values).lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("discrete martingale isometry over the full walk ensemble") {
    const int k = 4;
    const int N = 8;
    for (double p : {0.0, 1.0}) {
        double lhs = 0.0, rhs = 0.0;
        auto w = sobolev_weights(1, N, -p);
        for_each_scaled_walk(k, [&](const PathBundle& b) {
            auto G = delta_along(b.X, N);
            auto out = integrate_vs_martingale(G, b.dec.M);
            const Eigen::VectorXd last = out.values.col(out.values.cols() - 1);
            lhs += last.cwiseAbs2().dot(w);
            const auto& br = b.dec.bracket_of(0, 0);
            for (int j = 0; j < k; ++j)
                rhs += G.values.col(j).cwiseAbs2().dot(w) *
                       (br[static_cast<size_t>(j + 1)] - br[static_cast<size_t>(j)]);
        });
        lhs /= 16.0;
        rhs /= 16.0;
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-13));
    }
}

TEST_CASE("semimartingale integral ignores how X is split into M + A") {
    const int k = 5;
    const double c = 0.2;
    for_each_scaled_walk(k, [&](const PathBundle& b) {
        auto G = delta_along(b.X, 6);
        auto out1 = integrate_vs_semimartingale(G, b.dec);

        SemimartingaleDecomposition dec2;
        dec2.M = b.dec.M;
        dec2.A = b.dec.A;
        dec2.bracket = b.dec.bracket;
        for (size_t j = 0; j < b.X.times.size(); ++j) {
            dec2.M.values(0, static_cast<Eigen::Index>(j)) -= c * b.X.times[j];
            dec2.A.values(0, static_cast<Eigen::Index>(j)) += c * b.X.times[j];
        }
        for (auto& rec : dec2.M.jumps)
            rec.left(0) -= c * b.X.times[static_cast<size_t>(rec.index)];
        auto out2 = integrate_vs_semimartingale(G, dec2);
        CHECK((out1.values - out2.values).lpNorm<Eigen::Infinity>() <= 1e-12);
    });
}

TEST_CASE("finite-variation integral honors its pathwise bound") {
    RcllPath A;
    A.d = 1;
    A.times = uniform_grid(1.0, 8);
    A.values.resize(1, 9);
    for (int j = 0; j <= 8; ++j) A.values(0, j) = 0.35 * A.times[static_cast<size_t>(j)];
    A.validate();
    CHECK(total_variation(A) == doctest::Approx(0.35).epsilon(1e-14));

    auto G = delta_along(A, 8);
    const double p = 1.0;
    double bound = 0.0;
    auto out = integrate_vs_fv(G, A, 0, p, &bound);
    HermiteCoeffs last(1, 8);
    last.c = out.values.col(out.values.cols() - 1);
    CHECK(norm_p(last, -p) <= bound + 1e-12);
}

TEST_CASE("total variation counts both directions") {
    RcllPath A;
    A.d = 1;
    A.times = {0.0, 0.5, 1.0};
    A.values.resize(1, 3);
    A.values << 0.0, 1.0, 0.5;
    CHECK(total_variation(A) == doctest::Approx(1.5).epsilon(1e-15));
}

TEST_CASE("path validation rejects malformed inputs") {
    RcllPath X;
    X.d = 1;
    X.times = {0.1, 0.5};
    X.values = Eigen::MatrixXd::Zero(1, 2);
    CHECK_THROWS_AS(X.validate(), NumericError);  // grid must start at 0

    X.times = {0.0, 0.5, 0.5};
    X.values = Eigen::MatrixXd::Zero(1, 3);
    CHECK_THROWS_AS(X.validate(), NumericError);  // strictly increasing

    X.times = {0.0, 0.5, 1.0};
    X.values.setZero(1, 3);
    X.values(0, 1) = 1.0;
    JumpRecord rec;
    rec.index = 1;
    rec.left = Eigen::VectorXd::Zero(1);
    rec.jump = Eigen::VectorXd::Constant(1, 0.5);  // left + jump != value
    X.jumps = {rec};
    CHECK_THROWS_AS(X.validate(), NumericError);
    X.jumps[0].jump(0) = 1.0;
    CHECK_NOTHROW(X.validate());
}

TEST_CASE("realized bracket splits jump and continuous parts") {
    RcllPath X;
    X.d = 1;
    X.times = {0.0, 0.5, 1.0};
    X.values.resize(1, 3);
    X.values << 0.0, 1.0, 1.5;
    JumpRecord rec;
    rec.index = 1;
    rec.left = Eigen::VectorXd::Zero(1);
    rec.jump = Eigen::VectorXd::Constant(1, 1.0);
    X.jumps = {rec};
    X.validate();
    auto rb = realized_bracket(X, 0, 0);
    CHECK(rb.full.back() == doctest::Approx(1.25).epsilon(1e-15));
    CHECK(rb.continuous.back() == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("pure-jump change of variable closes to rounding") {
    const int N_big = 12, N_eval = 8;
    TranslationCache cache(ground_state(N_big), N_big);
    auto b = scaled_walk_path(6, 0b110010);
    std::vector<std::vector<double>> qv = {std::vector<double>(b.X.times.size(), 0.0)};
    auto rep = ito_residual(cache, b.X, qv, 1.0, N_eval);
    CHECK(rep.max_residual() <= 1e-10);
    CHECK(rep.retention.back() >= 0.999);
}

TEST_CASE("single-jump path: compensation series matches its definition") {
    RcllPath X;
    X.d = 1;
    X.times = {0.0, 0.5, 1.0};
    X.values.resize(1, 3);
    X.values << 0.0, 0.3, 0.3;
    JumpRecord rec;
    rec.index = 1;
    rec.left = Eigen::VectorXd::Zero(1);
    rec.jump = Eigen::VectorXd::Constant(1, 0.3);
    X.jumps = {rec};
    X.validate();

    const int N_big = 14;
    TranslationCache cache(ground_state(N_big), N_big);
    auto series = jump_compensation_series(cache, X);

    // independent assembly with the bare operators:
    //   Y = tau_{0.3} phi - tau_0 phi + 0.3 * d tau_0 phi, at the series cap
    auto phi = ground_state(N_big);
    auto t_after = recap(apply_translation(phi, {0.3}), N_big + 2);
    auto t_before = recap(apply_translation(phi, {0.0}), N_big + 2);
    auto dt_before = recap(apply_derivative(apply_translation(phi, {0.0}), 0), N_big + 2);
    Eigen::VectorXd want = t_after.c - t_before.c + 0.3 * dt_before.c;

    REQUIRE(series.values.cols() == 3);
    CHECK(series.values.col(0).norm() == 0.0);
    CHECK((series.values.col(1) - want).lpNorm<Eigen::Infinity>() <= 1e-12);
    CHECK((series.values.col(2) - want).lpNorm<Eigen::Infinity>() <= 1e-12);

    std::vector<std::vector<double>> qv = {std::vector<double>(3, 0.0)};
    auto rep = ito_residual(cache, X, qv, 1.0, N_big - 4);
    CHECK(rep.max_residual() <= 1e-12);
}

TEST_CASE("mass-retention breach raises a numeric error") {
    RcllPath X;
    X.d = 1;
    X.times = {0.0, 0.5, 1.0};
    X.values.resize(1, 3);
    X.values << 0.0, 12.0, 12.0;
    JumpRecord rec;
    rec.index = 1;
    rec.left = Eigen::VectorXd::Zero(1);
    rec.jump = Eigen::VectorXd::Constant(1, 12.0);
    X.jumps = {rec};
    X.validate();
    TranslationCache cache(ground_state(8), 8);
    std::vector<std::vector<double>> qv = {std::vector<double>(3, 0.0)};
    CHECK_THROWS_AS(ito_residual(cache, X, qv, 1.0, 4), NumericError);
}

TEST_CASE("occupation field: final column equals the left-endpoint sums") {
    RngStream rng(104, 9);
    auto b = simulate_brownian(1, uniform_grid(1.0, 64), rng);
    const int N = 12;
    const auto& qv = b.dec.bracket_of(0, 0);
    auto field = local_time_field(b.X, qv, N);
    auto fin = local_time_final(b.X, qv, N);
    CHECK((field.values.col(field.values.cols() - 1) - fin.c).lpNorm<Eigen::Infinity>() == 0.0);

    Eigen::VectorXd hand = Eigen::VectorXd::Zero(N + 1);
    for (int j = 0; j < 64; ++j) {
        auto h = hermite_values(b.X.value(j)(0), N);
        for (int n = 0; n <= N; ++n)
            hand(n) += h[static_cast<size_t>(n)] * (qv[static_cast<size_t>(j + 1)] - qv[static_cast<size_t>(j)]);
    }
    CHECK((hand - fin.c).lpNorm<Eigen::Infinity>() <= 1e-13);

    RcllPath X2;
    X2.d = 2;
    X2.times = {0.0, 1.0};
    X2.values = Eigen::MatrixXd::Zero(2, 2);
    CHECK_THROWS_AS(local_time_field(X2, {0.0, 1.0}, 4), ConfigError);
}

TEST_CASE("occupation density at zero sharpens as the cap grows") {
    // one ensemble at a fine grid; only the representation cap varies
    const int level = 12, paths = 200;
    const std::vector<int> caps = {5, 29, 256};
    auto grid = uniform_grid(1.0, 1 << level);
    const double dt = 1.0 / (1 << level);
    const double H = std::pow(dt, 0.4);

    std::vector<double> herm_mean(caps.size(), 0.0);
    double kern_mean = 0.0;
    for (int i = 0; i < paths; ++i) {
        RngStream rng(20260814, derive_stream(99, level, static_cast<std::uint64_t>(i)));
        auto b = simulate_brownian(1, grid, rng);
        const auto& qv = b.dec.bracket_of(0, 0);
        for (size_t ci = 0; ci < caps.size(); ++ci) {
            auto fin = local_time_final(b.X, qv, caps[ci]);
            herm_mean[ci] += pairing(fin, delta_coeffs({0.0}, 1, caps[ci]));
        }
        double acc = 0.0;
        for (int j = 0; j < (1 << level); ++j) {
            const double x = b.X.value(j)(0);
            acc += std::exp(-0.5 * (x / H) * (x / H)) / (H * std::sqrt(2.0 * std::acos(-1.0))) * dt;
        }
        kern_mean += acc;
    }
    for (auto& v : herm_mean) v /= paths;
    kern_mean /= paths;

    std::vector<double> dist;
    for (double v : herm_mean) dist.push_back(std::abs(v - kern_mean));
    CHECK(dist[0] > dist[1]);
    CHECK(dist[1] > dist[2]);
    CHECK(dist[2] < 0.02);
}
