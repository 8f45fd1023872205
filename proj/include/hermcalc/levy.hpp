#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "hermcalc/coeffs.hpp"
#include "hermcalc/ito.hpp"
#include "hermcalc/paths.hpp"
#include "hermcalc/rng.hpp"

namespace hermcalc {

struct LevyAtom {
    double x = 0.0;     // jump mark, |x| >= 1
    double mass = 0.0;  // intensity
};

// Scalar SDE driven by Brownian motion plus a Levy jump measure, with
// coefficients induced by a test function phi:
//   sigma_bar(x) = <sigma, tau_x phi>, b_bar(x) = <b, tau_x phi>,
//   dX = b_bar dt + sigma_bar dB + compensated small jumps + large jumps.
// Small jumps (eps < |mark| < 1) arrive at `small_rate` with marks from
// `small_mark` and state response F_small(state, mark); their compensator is
// evaluated by a midpoint rule on log-spaced bins against `small_density`.
// Large jumps (|mark| >= 1) are the finite atom list with response G_large.
struct LevyModel {
    HermiteCoeffs phi, sigma, b;  // d = 1
    std::function<double(double, double)> F_small;  // (state, mark) -> jump
    std::function<double(double, double)> G_large;
    double small_rate = 0.0;
    std::function<double(RngStream&)> small_mark;
    std::function<double(double)> small_density;  // nu density on 0 < |x| < 1
    std::vector<LevyAtom> large_atoms;
    double eps = 0.05;       // inner truncation of the small-jump region
    int bins_per_side = 12;  // compensator quadrature resolution
    double T = 1.0;
    int base_steps = 512;
    double x0 = 0.0;

    void validate() const;  // throws ConfigError
};

LevyModel default_levy_model();
// "default" (full preset), "nojump" (nu = 0), "purejump" (sigma = b = 0)
LevyModel levy_preset(const std::string& name);
std::vector<std::string> levy_preset_names();

// Compensator quadrature bins: log-spaced over (eps, 1), positive side
// ascending then the mirrored negative side, fixed order so every consumer
// sums them identically.
struct JumpBins {
    std::vector<double> node, mass;
};
JumpBins make_jump_bins(const LevyModel& m, int bins_per_side);

// State-dependent scalar coefficients, memoized on the 1e-12 quantized state
// so the simulator and the SPDE assembly consume identical doubles.
// kappa_tilde(x) = sum_bins F_small(x, node_b) mass_b; the simulator's
// compensator drift is its negation.
class CoefficientFunctions {
public:
    CoefficientFunctions(const LevyModel& model, TranslationCache& cache);

    double sigma_bar(double x);
    double b_bar(double x);
    double kappa_tilde(double x);
    const JumpBins& bins() const { return bins_; }

private:
    const LevyModel& model_;
    TranslationCache& cache_;
    JumpBins bins_;
    std::unordered_map<std::int64_t, double> sig_, bb_, kap_;
};

// A(state) = -<sigma, state> d(state);  L(state) = 1/2 <sigma, state>^2 d^2(state)
// - <b, state> d(state).  Exact coefficient arithmetic; output caps N+1 / N+2.
HermiteCoeffs apply_A(const HermiteCoeffs& state, const HermiteCoeffs& sigma);
HermiteCoeffs apply_L(const HermiteCoeffs& state, const HermiteCoeffs& sigma,
                      const HermiteCoeffs& b);

struct JumpEventRecord {
    int index = 0;  // grid index, aligned with RcllPath::jumps
    double mark = 0.0;
    bool small = false;
    double left = 0.0;  // pre-jump state
    double jump = 0.0;  // applied jump F_small(left, mark) or G_large(left, mark)
};

struct LevyNoiseRecord {
    std::vector<double> dB;               // per grid step, dB[j] over (t_j, t_{j+1})
    std::vector<JumpEventRecord> events;  // time order
};

struct LevySimResult {
    PathBundle bundle;  // X and (M = int sigma_bar dB, A = rest); bracket = int sigma_bar^2 ds
    LevyNoiseRecord noise;
};

// Jump-adapted Euler scheme.  Deterministic draw order for a fixed stream:
// small jump times, small marks, large jump times, large marks, then one
// Brownian normal per grid step during the sweep.  `injected_dB`, if given,
// replaces the Brownian draws with prescribed per-base-step increments and
// requires a jump-free model (coupled refinement studies).
LevySimResult simulate_fd_sde(const LevyModel& model, RngStream& rng, CoefficientFunctions& cf,
                              const std::vector<double>* injected_dB = nullptr);

struct SpdeReport {
    ItoReport report;  // six-term assembly residual series; first_order = Brownian
                       // term norm, second_order = drift-generator term norm,
                       // jump_term = combined jump-term norm
    double rearrangement_gap = 0.0;       // max_t ||N-int - Ntilde-int - comp-int||
    double nu_tail_mass = 0.0;            // int_{|x|<eps} x^2 nu(dx)
    double compensator_quad_error = 0.0;  // bin-halving probe on kappa_tilde
    double small_jump_sq_sum = 0.0;       // sum of squared small-jump sizes
    double max_small_jump = 0.0;          // max |jump| over small events (< 1 expected)
    double second_order_ratio = 0.0;      // max ||(tau_F - Id + F d) Y|| / F^2
    std::string norm_note;                // which dual norm the residuals use
};

// Six-term right-hand side of the distribution-valued jump SPDE accumulated
// over the simulated grid, compared against tau_{X_t} phi in ||.||_{-p-1} at
// cap N_eval.  Shares `cache` (and thus every translated vector) with
// ito_residual so the two assemblies are floating-point rearrangements of
// one another.
SpdeReport spde_residual(const LevyModel& model, const LevySimResult& sim,
                         TranslationCache& cache, CoefficientFunctions& cf, double p, int N_eval,
                         double retention_floor = 0.999);

}  // namespace hermcalc
