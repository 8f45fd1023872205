#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include "hermcalc/rng.hpp"

namespace hermcalc {

// Explicit jump bookkeeping: jumps happen AT grid points; the recorded left
// limit is the pre-jump state, so value(index) = left + jump exactly.
struct JumpRecord {
    int index = 0;  // grid index of the jump time
    Eigen::VectorXd left;
    Eigen::VectorXd jump;
};

// Right-continuous path with left limits, sampled on a (possibly jump-
// adapted, non-uniform) grid.  Between grid points the path is treated as
// constant in the left-limit sense used by the integrals.
struct RcllPath {
    int d = 1;
    std::vector<double> times;  // grid, times[0] = 0, strictly increasing
    Eigen::MatrixXd values;     // d x times.size()
    std::vector<JumpRecord> jumps;  // strictly increasing indices, none at 0

    int steps() const { return static_cast<int>(times.size()) - 1; }
    Eigen::VectorXd value(int k) const { return values.col(k); }
    // X(t_k -): pre-jump state if t_k carries a jump, else the value itself
    Eigen::VectorXd left_limit(int k) const;
    const JumpRecord* jump_at(int k) const;

    void validate() const;  // grid/jump invariants; throws NumericError
};

// X = X_0 + M + A with M the (local L^2) martingale part and A the finite-
// variation part; increments of M and A sum bit-exactly to increments of X.
// bracket(i,j) is the predictable bracket <M^i, M^j> on the grid.
struct SemimartingaleDecomposition {
    RcllPath M;
    RcllPath A;
    std::vector<std::vector<double>> bracket;  // d*d rows, each grid-length
    const std::vector<double>& bracket_of(int i, int j) const {
        return bracket[static_cast<size_t>(i) * static_cast<size_t>(M.d) + static_cast<size_t>(j)];
    }
};

struct PathBundle {
    RcllPath X;
    SemimartingaleDecomposition dec;
};

// Realized bracket [X^i, X^j] from grid increment products, and its
// continuous part obtained by removing the recorded-jump products.
struct BracketPath {
    int i = 0, j = 0;
    std::vector<double> full;
    std::vector<double> continuous;
};
BracketPath realized_bracket(const RcllPath& X, int i, int j);

std::vector<double> uniform_grid(double T, int steps);

PathBundle simulate_brownian(int d, const std::vector<double>& grid, RngStream& rng);

// Brownian bundle with prescribed per-step increments (d x steps); coupled
// refinement studies aggregate one fine draw onto every coarser grid.
PathBundle brownian_from_increments(const std::vector<double>& grid, const Eigen::MatrixXd& dB);

// Finite-activity scalar jump diffusion dX = b dt + sigma dB + dJ.
struct JumpDiffusionModel {
    std::function<double(double)> drift;
    std::function<double(double)> vol;
    double jump_intensity = 0.0;
    std::function<double(RngStream&)> jump_size;
    double x0 = 0.0;
};

// Jump times are drawn first and inserted into the base grid (jump-adapted
// grid); decomposition: M = Brownian integral, A = drift integral + jumps.
PathBundle simulate_jump_diffusion(const JumpDiffusionModel& model,
                                   const std::vector<double>& base_grid, RngStream& rng);

// Scaled random walk: increments +-1/sqrt(k) at times j/k, a pure-jump
// martingale.  bits selects one of the 2^k sign patterns (bit j = step j up).
PathBundle scaled_walk_path(int k, std::uint64_t bits);
// Exhaustive enumeration (k <= 20), equal weight 2^-k each.
void for_each_scaled_walk(int k, const std::function<void(const PathBundle&)>& fn);

// CSV: one row per grid point, "time,x_1,...,x_d,jump_flag".
void write_path_csv(std::ostream& os, const RcllPath& X);

}  // namespace hermcalc
