#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "hermcalc/errors.hpp"
#include "hermcalc/experiments.hpp"
#include "hermcalc/levy.hpp"
#include "hermcalc/operators.hpp"

using namespace hermcalc;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempDir {
    fs::path path;
    TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("hermcalc_test_" + tag + "_" + std::to_string(::getpid()));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("model presets exist and validate") {
    auto names = levy_preset_names();
    REQUIRE(names.size() == 3);
    for (const auto& n : names) CHECK_NOTHROW(levy_preset(n).validate());
    CHECK_THROWS_AS(levy_preset("bogus"), ConfigError);
}

TEST_CASE("preset structure: nojump and purejump") {
    auto nj = levy_preset("nojump");
    CHECK(nj.small_rate == 0.0);
    CHECK(nj.large_atoms.empty());
    auto pj = levy_preset("purejump");
    CHECK(pj.sigma.c.norm() == 0.0);
    CHECK(pj.b.c.norm() == 0.0);
}

TEST_CASE("model validation rejects bad shapes") {
    auto m = default_levy_model();
    m.eps = 1.5;
    CHECK_THROWS_AS(m.validate(), ConfigError);
    m = default_levy_model();
    m.large_atoms.push_back({0.5, 1.0});  // large atoms need |x| >= 1
    CHECK_THROWS_AS(m.validate(), ConfigError);
    m = default_levy_model();
    m.small_mark = nullptr;
    CHECK_THROWS_AS(m.validate(), ConfigError);
}

TEST_CASE("compensator bins: ordering, support and total mass") {
    auto m = default_levy_model();
    auto bins = make_jump_bins(m, 12);
    REQUIRE(bins.node.size() == 24);
    REQUIRE(bins.mass.size() == 24);
    for (int b = 0; b < 12; ++b) {
        CHECK(bins.node[static_cast<size_t>(b)] > m.eps);
        CHECK(bins.node[static_cast<size_t>(b)] < 1.0);
        if (b) CHECK(bins.node[static_cast<size_t>(b)] > bins.node[static_cast<size_t>(b - 1)]);
        // mirrored negative side in the same order
        CHECK(bins.node[static_cast<size_t>(12 + b)] == -bins.node[static_cast<size_t>(b)]);
        CHECK(bins.mass[static_cast<size_t>(12 + b)] == bins.mass[static_cast<size_t>(b)]);
    }
    double total = 0.0;
    for (double w : bins.mass) total += w;
    // the density is constant on (eps, 1), so the midpoint rule is exact
    CHECK(total == doctest::Approx(m.small_rate).epsilon(1e-12));
}

TEST_CASE("simulated jumps carry the exact response values") {
    auto m = levy_preset("default");
    TranslationCache cache(m.phi, 20);
    CoefficientFunctions cf(m, cache);
    RngStream rng(20260814, 17);
    auto sim = simulate_fd_sde(m, rng, cf);
    sim.bundle.X.validate();
    REQUIRE(!sim.noise.events.empty());
    bool saw_small = false, saw_large = false;
    for (const auto& ev : sim.noise.events) {
        if (ev.small) {
            saw_small = true;
            CHECK(std::abs(ev.mark) > m.eps);
            CHECK(std::abs(ev.mark) < 1.0);
            CHECK(ev.jump == ev.mark / (1.0 + ev.left * ev.left));  // bit-exact reuse
            CHECK(std::abs(ev.jump) < 1.0);
        } else {
            saw_large = true;
            CHECK(std::abs(ev.mark) == 1.5);
            CHECK(ev.jump == ev.mark);
        }
        const auto* rec = sim.bundle.X.jump_at(ev.index);
        REQUIRE(rec != nullptr);
        CHECK(rec->left(0) == ev.left);
        CHECK(rec->jump(0) == ev.jump);
    }
    CHECK(saw_small);
    // large events arrive at rate 1 over [0, 1]; absence is possible for one
    // stream but this seed produces at least one
    CHECK(saw_large);
}

TEST_CASE("symmetric small-jump measure has a vanishing compensator drift") {
    auto m = default_levy_model();
    TranslationCache cache(m.phi, 16);
    CoefficientFunctions cf(m, cache);
    for (double x : {0.0, 0.7, -1.3}) CHECK(std::abs(cf.kappa_tilde(x)) <= 1e-15);
}

TEST_CASE("state coefficients match their closed forms") {
    auto m = default_levy_model();
    TranslationCache cache(m.phi, 20);
    CoefficientFunctions cf(m, cache);
    for (double x : {0.0, 0.9, -1.7}) {
        CHECK(cf.sigma_bar(x) == doctest::Approx(0.4 * std::exp(-x * x / 4)).epsilon(1e-13));
        CHECK(cf.b_bar(x) ==
              doctest::Approx(0.2 * (x / std::sqrt(2.0)) * std::exp(-x * x / 4))
                  .epsilon(1e-13)
                  .scale(1.0));
    }
    // memoized: the same quantized state returns the identical double
    CHECK(cf.sigma_bar(0.9) == cf.sigma_bar(0.9));
}

TEST_CASE("drift-side coefficient maps agree with the bare operators") {
    auto m = default_levy_model();
    // A on the ground state: -<sigma, h0> d h0 = 0.4/sqrt(2) h1
    HermiteCoeffs h0(1, 6);
    h0.c(0) = 1.0;
    auto a0 = apply_A(h0, m.sigma);
    CHECK(a0.c(1) == doctest::Approx(0.4 / std::sqrt(2.0)).epsilon(1e-14));
    for (int i = 0; i < a0.c.size(); ++i)
        if (i != 1) CHECK(a0.c(i) == 0.0);
    // A on h1: <sigma, h1> = 0
    HermiteCoeffs h1(1, 6);
    h1.c(1) = 1.0;
    CHECK(apply_A(h1, m.sigma).c.norm() == 0.0);

    // L against explicit derivative matrices
    RngStream rng(55, 0);
    HermiteCoeffs state(1, 8), sig(1, 8), bb(1, 8);
    for (int i = 0; i < state.c.size(); ++i) {
        state.c(i) = rng.gaussian();
        sig.c(i) = 0.3 * rng.gaussian();
        bb.c(i) = 0.2 * rng.gaussian();
    }
    auto got = apply_L(state, sig, bb);
    const double s = pairing(sig, state), bv = pairing(bb, state);
    auto D1 = derivative_matrix(1, 0, 8), D2 = derivative_matrix(1, 0, 9);
    Eigen::VectorXd want = 0.5 * s * s * (D2.m * (D1.m * state.c));
    Eigen::VectorXd d1 = D1.m * state.c;
    want -= bv * (Eigen::VectorXd(11) << d1, 0.0).finished();
    REQUIRE(got.c.size() == 11);
    CHECK((got.c - want).lpNorm<Eigen::Infinity>() <= 1e-14);
}

TEST_CASE("one-sided small-jump measure: drift appears and identity still closes") {
    auto m = default_levy_model();
    m.large_atoms.clear();
    m.small_rate = 4.0;
    const double eps = m.eps;
    m.small_density = [eps](double x) {
        return (x > eps && x < 1.0) ? 4.0 / (1.0 - eps) : 0.0;
    };
    m.small_mark = [eps](RngStream& rng) { return eps + (1.0 - eps) * rng.uniform01(); };
    m.base_steps = 128;
    m.T = 0.5;
    m.validate();

    const int N_big = 20, N_eval = 12;
    TranslationCache cache(m.phi, N_big);
    CoefficientFunctions cf(m, cache);
    for (double x : {0.0, 0.8}) CHECK(cf.kappa_tilde(x) > 0.1);

    RngStream rng(20260814, 23);
    auto sim = simulate_fd_sde(m, rng, cf);
    auto spde = spde_residual(m, sim, cache, cf, 1.0, N_eval);
    auto ito = ito_residual(cache, sim.bundle.X, sim.bundle.dec.bracket, 1.0, N_eval);
    CHECK(spde.rearrangement_gap <= 1e-12);
    REQUIRE(spde.report.residual.size() == ito.residual.size());
    double gap = 0.0;
    for (size_t k = 0; k < ito.residual.size(); ++k)
        gap = std::max(gap, std::abs(spde.report.residual[k] - ito.residual[k]));
    CHECK(gap <= 1e-12);
}

TEST_CASE("default model: tail mass below eps vanishes and small jumps stay small") {
    auto m = levy_preset("default");
    const int N_big = 34, N_eval = 16;
    TranslationCache cache(m.phi, N_big);
    CoefficientFunctions cf(m, cache);
    RngStream rng(20260814, 31);
    auto sim = simulate_fd_sde(m, rng, cf);
    auto spde = spde_residual(m, sim, cache, cf, 1.0, N_eval);
    CHECK(spde.nu_tail_mass == 0.0);
    CHECK(spde.max_small_jump < 1.0);
    CHECK(spde.rearrangement_gap <= 1e-12);
}

TEST_CASE("identical streams reproduce the simulation bit for bit") {
    auto m = levy_preset("default");
    TranslationCache cache(m.phi, 20);
    CoefficientFunctions cf(m, cache);
    RngStream r1(42, 7), r2(42, 7);
    auto s1 = simulate_fd_sde(m, r1, cf);
    auto s2 = simulate_fd_sde(m, r2, cf);
    REQUIRE(s1.bundle.X.times.size() == s2.bundle.X.times.size());
    CHECK((s1.bundle.X.values - s2.bundle.X.values).lpNorm<Eigen::Infinity>() == 0.0);
    REQUIRE(s1.noise.events.size() == s2.noise.events.size());
    for (size_t i = 0; i < s1.noise.events.size(); ++i) {
        CHECK(s1.noise.events[i].mark == s2.noise.events[i].mark);
        CHECK(s1.noise.events[i].jump == s2.noise.events[i].jump);
    }
}

TEST_CASE("injected increments require a jump-free model of matching length") {
    auto nj = levy_preset("nojump");
    TranslationCache cache(nj.phi, 16);
    CoefficientFunctions cf(nj, cache);
    std::vector<double> dB(static_cast<size_t>(nj.base_steps), 0.01);
    RngStream rng(1, 1);
    CHECK_NOTHROW(simulate_fd_sde(nj, rng, cf, &dB));

    std::vector<double> short_dB(10, 0.01);
    RngStream rng2(1, 1);
    CHECK_THROWS_AS(simulate_fd_sde(nj, rng2, cf, &short_dB), ConfigError);

    auto full = levy_preset("default");
    TranslationCache cache2(full.phi, 16);
    CoefficientFunctions cf2(full, cache2);
    std::vector<double> dB2(static_cast<size_t>(full.base_steps), 0.01);
    RngStream rng3(1, 1);
    CHECK_THROWS_AS(simulate_fd_sde(full, rng3, cf2, &dB2), ConfigError);
}

TEST_CASE("config parsing: sections, comments, and strict consumption") {
    const std::string text =
        "# hash comment\n"
        "; semicolon comment\n"
        "[experiment]\n"
        "kind = operator-checks\n"
        "seed = 99\n"
        "\n"
        "[operator-checks]\n"
        "n_big = 16\n"
        "flag = yes\n"
        "levels = 3, 4 5\n"
        "scales = 0.5, 0.25\n";
    auto cfg = ConfigFile::parse_string(text, "inline");
    CHECK(cfg.has_section("experiment"));
    CHECK(cfg.require_str("experiment", "kind") == "operator-checks");
    CHECK(cfg.get_u64("experiment", "seed", 0) == 99);
    CHECK(cfg.get_int("operator-checks", "n_big", 0) == 16);
    CHECK(cfg.get_bool("operator-checks", "flag", false) == true);
    CHECK(cfg.get_int_list("operator-checks", "levels", {}) == std::vector<int>{3, 4, 5});
    CHECK(cfg.get_double_list("operator-checks", "scales", {}) ==
          std::vector<double>{0.5, 0.25});
    CHECK_NOTHROW(cfg.check_fully_consumed({"experiment", "operator-checks"}));

    // defaults fill in absent keys without consuming anything
    CHECK(cfg.get_int("operator-checks", "absent", 7) == 7);
    CHECK_THROWS_AS(cfg.require_str("experiment", "missing"), ConfigError);
}

TEST_CASE("config parsing: malformed inputs carry line numbers") {
    CHECK_THROWS_AS(ConfigFile::parse_string("key = 1\n", "x"), ConfigError);  // no section
    CHECK_THROWS_AS(ConfigFile::parse_string("[s]\nnot a kv line\n", "x"), ConfigError);
    CHECK_THROWS_AS(ConfigFile::parse_string("[s]\na = 1\na = 2\n", "x"), ConfigError);
    try {
        ConfigFile::parse_string("[s]\n\nbroken\n", "cfg-name");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("cfg-name") != std::string::npos);
        CHECK(msg.find("3") != std::string::npos);
    }
}

TEST_CASE("config consumption: unknown sections and unread keys are errors") {
    auto cfg = ConfigFile::parse_string("[a]\nx = 1\n[b]\ny = 2\n", "strict");
    CHECK(cfg.get_int("a", "x", 0) == 1);
    CHECK_THROWS_AS(cfg.check_fully_consumed({"a"}), ConfigError);     // section b unknown
    CHECK_THROWS_AS(cfg.check_fully_consumed({"a", "b"}), ConfigError);  // b.y never read
    CHECK(cfg.get_int("b", "y", 0) == 2);
    CHECK_NOTHROW(cfg.check_fully_consumed({"a", "b"}));
}

TEST_CASE("config typed getters reject unparseable values") {
    auto cfg = ConfigFile::parse_string(
        "[s]\nnum = 12x\nflt = 1.5.2\nboolish = maybe\n", "types");
    CHECK_THROWS_AS(cfg.get_int("s", "num", 0), ConfigError);
    CHECK_THROWS_AS(cfg.get_double("s", "flt", 0.0), ConfigError);
    CHECK_THROWS_AS(cfg.get_bool("s", "boolish", false), ConfigError);
}

TEST_CASE("verdicts: pass window and csv shape") {
    auto good = make_verdict("alpha", 0.5, 0.0, 1.0);
    CHECK(good.pass);
    auto low = make_verdict("beta", -0.1, 0.0, 1.0);
    CHECK(!low.pass);
    auto nan = make_verdict("gamma", std::nan(""), 0.0, 1.0);
    CHECK(!nan.pass);
    std::ostringstream os;
    write_verdicts_csv(os, {good, low});
    const std::string s = os.str();
    CHECK(s.find("check,measured,lo,hi,result") == 0);
    CHECK(s.find("alpha") != std::string::npos);
    CHECK(s.find("PASS") != std::string::npos);
    CHECK(s.find("FAIL") != std::string::npos);
}

TEST_CASE("median and log-log slope fitting") {
    CHECK(median_of({3.0, 1.0, 2.0}) == 2.0);
    CHECK(median_of({4.0, 1.0, 2.0, 3.0}) == doctest::Approx(2.5).epsilon(1e-15));

    std::vector<std::pair<double, double>> pts;
    for (double dt : {0.1, 0.05, 0.025, 0.0125}) pts.push_back({dt, 3.0 * std::sqrt(dt)});
    CHECK(fit_loglog_slope(pts) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(fit_loglog_slope({{0.1, 0.2}, {0.05, 0.1}}) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("stream ids separate experiment families") {
    auto a = stream_id(StreamKind::PureJump, 6, 0);
    auto b = stream_id(StreamKind::Brownian, 6, 0);
    auto c = stream_id(StreamKind::PureJump, 7, 0);
    auto d = stream_id(StreamKind::PureJump, 6, 1);
    CHECK(a != b);
    CHECK(a != c);
    CHECK(a != d);
}

TEST_CASE("per-level ensemble csv round-trips") {
    LevelEnsemble lv;
    lv.level = 7;
    lv.dt = 1.0 / 128;
    for (int i = 0; i < 3; ++i) {
        PathRow r;
        r.path = i;
        r.steps = 128 + i;
        r.dt = lv.dt;
        r.residual_T = 1e-3 / (i + 1);
        r.residual_max = 2e-3 / (i + 1);
        r.retention_min = 1.0 - 1e-6 * i;
        lv.rows.push_back(r);
    }
    lv.median_residual_T = median_of({1e-3, 5e-4, 1e-3 / 3});
    std::stringstream ss;
    write_level_csv(ss, lv);
    auto back = read_level_csv(ss, 7);
    REQUIRE(back.rows.size() == 3);
    for (int i = 0; i < 3; ++i) {
        CHECK(back.rows[static_cast<size_t>(i)].steps == lv.rows[static_cast<size_t>(i)].steps);
        CHECK(back.rows[static_cast<size_t>(i)].residual_T ==
              lv.rows[static_cast<size_t>(i)].residual_T);
        CHECK(back.rows[static_cast<size_t>(i)].retention_min ==
              lv.rows[static_cast<size_t>(i)].retention_min);
    }
}

TEST_CASE("run_config drives a small study end to end, reproducibly") {
    TempDir tmp("runcfg");
    const fs::path out1 = tmp.path / "o1";
    const fs::path out2 = tmp.path / "o2";
    for (const fs::path& out : {out1, out2}) {
        const fs::path cfgp = tmp.path / (out.filename().string() + ".ini");
        std::ofstream cfg(cfgp);
        // defaults (caps 32/26): the group-roundtrip probes at |x| = 1.5 need
        // that much headroom, smaller caps fail the check honestly
        cfg << "[experiment]\nkind = operator-checks\noutput = " << out.string()
            << "\nseed = 20260814\n";
        cfg.close();
        CHECK(run_config(cfgp.string()) == 0);
        CHECK(fs::exists(out / "verdicts.csv"));
    }
    CHECK(slurp(out1 / "verdicts.csv") == slurp(out2 / "verdicts.csv"));
}

TEST_CASE("run_config rejects unknown kinds and stray keys") {
    TempDir tmp("badcfg");
    {
        std::ofstream cfg(tmp.path / "bad_kind.ini");
        cfg << "[experiment]\nkind = nonsense\noutput = " << (tmp.path / "o").string()
            << "\n";
    }
    CHECK_THROWS_AS(run_config((tmp.path / "bad_kind.ini").string()), ConfigError);
    {
        std::ofstream cfg(tmp.path / "stray.ini");
        cfg << "[experiment]\nkind = operator-checks\noutput = " << (tmp.path / "o").string()
            << "\n\n[operator-checks]\nn_big = 16\nn_eval = 10\ntypo_key = 3\n";
    }
    CHECK_THROWS_AS(run_config((tmp.path / "stray.ini").string()), ConfigError);
    CHECK_THROWS_AS(run_config((tmp.path / "does_not_exist.ini").string()), ConfigError);
}

TEST_CASE("summarize requires at least two refinement levels") {
    TempDir tmp("summ");
    {
        std::ofstream f(tmp.path / "residuals_level_6.csv");
        f << "path,steps,dt,residual_T,residual_max,retention_min\n"
          << "0,64,0.015625,0.001,0.002,1\n";
    }
    CHECK_THROWS_AS(summarize_dir(tmp.path.string()), ConfigError);
}

TEST_CASE("preset listing names every runnable kind") {
    const std::string text = list_presets_text();
    for (const char* kind : {"operator-checks", "isometry-enumeration", "ito-purejump",
                             "ito-brownian", "local-time", "levy-spde"})
        CHECK(text.find(kind) != std::string::npos);
    for (const auto& name : levy_preset_names()) CHECK(text.find(name) != std::string::npos);
}
