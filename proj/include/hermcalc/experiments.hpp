#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hermcalc/levy.hpp"

namespace hermcalc {

// Flat INI-style config: [section] headers, key = value lines, '#'/';'
// comments.  Every entry must be consumed by a known key lookup; leftovers
// are reported with their line numbers (misspelled keys must not silently
// default).
class ConfigFile {
public:
    static ConfigFile parse_file(const std::string& path);
    static ConfigFile parse_string(const std::string& text, const std::string& name);

    bool has_section(const std::string& sec) const;
    std::optional<std::string> get(const std::string& sec, const std::string& key);

    std::string require_str(const std::string& sec, const std::string& key);
    std::string get_str(const std::string& sec, const std::string& key, const std::string& def);
    int get_int(const std::string& sec, const std::string& key, int def);
    double get_double(const std::string& sec, const std::string& key, double def);
    bool get_bool(const std::string& sec, const std::string& key, bool def);
    std::uint64_t get_u64(const std::string& sec, const std::string& key, std::uint64_t def);
    std::vector<int> get_int_list(const std::string& sec, const std::string& key,
                                  const std::vector<int>& def);
    std::vector<double> get_double_list(const std::string& sec, const std::string& key,
                                        const std::vector<double>& def);

    // throws ConfigError naming file, line and key for any unconsumed entry
    // or any section not in `known`
    void check_fully_consumed(const std::vector<std::string>& known_sections) const;

private:
    struct Entry {
        std::string key, value;
        int line = 0;
        bool used = false;
    };
    std::string name_;
    std::map<std::string, std::vector<Entry>> sections_;
    Entry* find(const std::string& sec, const std::string& key);
};

// one PASS/FAIL row: pass iff lo <= measured <= hi
struct Verdict {
    std::string check;
    double measured = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    bool pass = false;
};
Verdict make_verdict(std::string check, double measured, double lo, double hi);
void write_verdicts_csv(std::ostream& os, const std::vector<Verdict>& v);

// named stream families so every (experiment, level, path) triple draws from
// its own Philox stream
enum class StreamKind : std::uint64_t {
    PureJump = 1,
    Brownian = 2,
    LocalTime = 3,
    LevyIdentity = 4,
    LevyRefine = 5,
};
std::uint64_t stream_id(StreamKind kind, int level, int path);

// ---- per-path ensemble rows and level files ----
struct PathRow {
    int path = 0;
    int steps = 0;
    double dt = 0.0;
    double residual_T = 0.0;
    double residual_max = 0.0;
    double retention_min = 1.0;
};
struct LevelEnsemble {
    int level = 0;   // grid has 2^level base steps
    double dt = 0.0; // base step size
    std::vector<PathRow> rows;
    double median_residual_T = 0.0;
};
void write_level_csv(std::ostream& os, const LevelEnsemble& lv);
LevelEnsemble read_level_csv(std::istream& is, int level);

double median_of(std::vector<double> v);
// least-squares slope of log(residual) vs log(dt)
double fit_loglog_slope(const std::vector<std::pair<double, double>>& dt_and_residual);

// ---- studies (the acceptance gate calls these with pinned parameters) ----
std::vector<Verdict> operator_algebra_checks(int N_big, int N_eval);

struct IsometryParams {
    int k = 10;
    std::vector<double> ps = {0.0, 1.0};
    int decomposition_k = 8;
};
struct IsometryResult {
    struct Row {
        double p = 0.0;
        double lhs = 0.0;  // mean squared dual norm of the integral at T
        double rhs = 0.0;  // mean of the predictable bracket-weighted sum
    };
    std::vector<Row> rows;
    double isometry_max_gap = 0.0;
    double decomposition_max_gap = 0.0;
};
IsometryResult isometry_enumeration_study(const IsometryParams& prm);

struct PurejumpParams {
    int paths = 50;
    double rate = 3.0;
    double horizon = 1.0;
    double jump_min = -0.6, jump_max = 0.6;
    int base_level = 6;
    int N_big = 24, N_eval = 18;
    double p = 1.0;
};
LevelEnsemble purejump_study(const PurejumpParams& prm, std::uint64_t seed, int workers);

struct RefinementParams {
    std::vector<int> levels = {8, 9, 10, 11, 12};
    int paths = 100;
    bool coupled = true;
    int N_big = 24, N_eval = 18;
    double p = 1.0;
};
struct RefinementResult {
    std::vector<LevelEnsemble> levels;
    double slope = 0.0;
    bool monotone = false;
};
RefinementResult brownian_refinement_study(const RefinementParams& prm, std::uint64_t seed,
                                           int workers);

struct LocalTimeParams {
    int paths = 10000;
    int level = 12;
    int cap = 256;
    double bandwidth_exponent = 0.4;
};
struct LocalTimeResult {
    int paths = 0;
    double hermite_mean = 0.0, hermite_se = 0.0;
    double kernel_mean = 0.0, kernel_se = 0.0;
    double diff_mean = 0.0, diff_se = 0.0;
    std::vector<double> hermite_values, kernel_values;  // per path
};
LocalTimeResult local_time_study(const LocalTimeParams& prm, std::uint64_t seed, int workers);
void write_local_time_csv(std::ostream& os, const LocalTimeResult& r);

// reference Monte Carlo value for the mean Brownian local time at 0 over
// [0,1], measured by an independent pre-build kernel-estimation run at the
// same grid level and bandwidth as the default study
inline constexpr double kLocalTimeReferenceMean = 0.771103;
inline constexpr double kLocalTimeReferenceSe = 0.001235;

struct LevyIdentityParams {
    std::string preset = "default";
    int paths = 50;
    int base_level = 9;
    // cap 34 keeps translation mass retention above the 0.999 floor for the
    // worst large-jump excursion (|x| ~ 6.1) seen across the default ensemble
    int N_big = 34, N_eval = 18;
    double p = 1.0;
};
struct LevyPathRow {
    int path = 0;
    double rearrangement_gap = 0.0;
    double spde_ito_gap = 0.0;   // max_t |spde residual - ito residual|
    double residual_T = 0.0;
    double max_small_jump = 0.0;
    double small_jump_sq_sum = 0.0;
    double second_order_ratio = 0.0;
    double nu_tail_mass = 0.0;
    double comp_quad_error = 0.0;
    double retention_min = 1.0;
};
struct LevyIdentityResult {
    std::vector<LevyPathRow> rows;
    double max_rearrangement_gap = 0.0;
    double max_spde_ito_gap = 0.0;
    double max_small_jump = 0.0;
    std::vector<ItoReport> reports;  // per path, for CSV emission
};
LevyIdentityResult levy_identity_study(const LevyIdentityParams& prm, std::uint64_t seed,
                                       int workers);
void write_levy_identity_csv(std::ostream& os, const LevyIdentityResult& r);

// nu = 0 refinement through the six-term assembly (coupled increments)
RefinementResult levy_refinement_study(const RefinementParams& prm, const std::string& preset,
                                       std::uint64_t seed, int workers);

// ---- orchestration used by the command-line tool ----
int worker_count_from_env();
// returns 0 if every verdict passed, 1 otherwise; throws ConfigError /
// NumericError for the 2 / 3 exit paths
int run_config(const std::string& config_path);
int summarize_dir(const std::string& dir);
std::string list_presets_text();

}  // namespace hermcalc
