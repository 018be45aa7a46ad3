#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cmnalm/linalg.hpp"
#include "cmnalm/solver.hpp"
#include "cmnalm/stable_noise.hpp"

namespace cmnalm {

enum class MatrixNorm { none, unit_spectral, inv_sqrt_m };

std::string to_string(MatrixNorm norm);
MatrixNorm matrix_norm_from_string(const std::string& s);

// Everything needed to rebuild one random instance.
struct TrialSpec {
    std::size_t n = 128;
    std::size_t m = 50;
    std::size_t k = 7;
    std::optional<StableNoiseParams> noise; // empty: noiseless
    MatrixNorm matrix_norm = MatrixNorm::unit_spectral;
    double sigma_n = 1.0;
    std::uint64_t master_seed = 1;
    std::uint64_t trial_index = 0;
};

struct Instance {
    Problem problem;
    RealVector x_true;
    RealVector noise;
};

/// k nonzeros on a uniformly random support, values i.i.d. N(0, 1).
RealVector gen_sparse_signal(std::size_t n, std::size_t k, std::uint64_t seed);

/// i.i.d. N(0, 1) entries, then normalized per `norm`.
DenseMatrix gen_gaussian_matrix(std::size_t m, std::size_t n, MatrixNorm norm, std::uint64_t seed);

/// Signal, matrix and noise come from separate streams derived from
/// (master_seed, trial_index), so they are independent of each other and of
/// every other trial.
Instance make_instance(const TrialSpec& spec);

/// 20 log10(‖x_true‖ / ‖x_hat − x_true‖), capped at kSnrCapDb for exact recovery.
double snr_db(std::span<const double> x_true, std::span<const double> x_hat);
inline constexpr double kSnrCapDb = 300.0;

// A solver variant: either a mixed-norm range or the ℓp baseline at fixed p.
struct Variant {
    std::string label;
    bool lp = false;
    double p_s = 0.0;
    double p_f = 1.0;
    double q = 1.0;
    double p = 1.0; // used when lp

    static Variant cmn(double p_s, double p_f, double q);
    static Variant lp_baseline(double p);

    SolveReport solve(const Problem& problem, const SolverConfig& base) const;
};

enum class ExperimentKind { preference, noise_sweep, cs_sweep };

std::string to_string(ExperimentKind kind);
ExperimentKind experiment_kind_from_string(const std::string& s);

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::preference;
    std::size_t trials = 60;
    std::uint64_t master_seed = 1;
    int workers = 1;

    std::size_t n = 128;
    std::size_t m = 50;
    std::size_t k = 7;
    double alpha = 1.5;
    double gamma = 1e-4;
    MatrixNorm matrix_norm = MatrixNorm::unit_spectral;
    double sigma_n = 1.0;

    std::vector<Variant> variants;
    // p values of the baseline (preference), γ values (noise_sweep) or m/n ratios (cs_sweep).
    std::vector<double> grid;
    std::string baseline_label = "Lp-ADM";

    SolverConfig solver;

    void validate() const;
};

/// Defaults for each experiment family, following the benchmark protocol.
ExperimentConfig default_preference_config();
ExperimentConfig default_noise_sweep_config();
ExperimentConfig default_cs_sweep_config();
SolverConfig default_experiment_solver();

struct ResultRow {
    std::string variant;
    double grid_value = 0.0;
    double mean_snr_db = 0.0;
    double sd_snr_db = 0.0;
    std::size_t n_trials = 0; // trials that produced a finite SNR
    std::size_t n_failed = 0;
};

struct PreferenceRatio {
    std::string variant;
    double percent = 0.0;
};

struct ExperimentResult {
    ExperimentKind kind = ExperimentKind::preference;
    std::vector<ResultRow> rows;
    std::vector<PreferenceRatio> preference; // preference experiments only
    std::size_t failed_solves = 0;
    std::string config_hash;
    std::uint64_t master_seed = 0;
    std::string timestamp;

    const ResultRow* find(const std::string& variant, double grid_value) const;
};

/// Percentage of grid points where the constant variant SNR is ≥ the baseline SNR.
double preference_ratio(double variant_snr, std::span<const double> baseline_snr);

ExperimentResult run_preference_experiment(const ExperimentConfig& cfg);
ExperimentResult run_noise_sweep(const ExperimentConfig& cfg);
ExperimentResult run_cs_sweep(const ExperimentConfig& cfg);
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Canonical text form of a config; its FNV-1a hash is the config hash.
std::string describe(const ExperimentConfig& cfg);
std::string config_hash(const ExperimentConfig& cfg);

/// 64-bit FNV-1a of `text` as 16 hex digits.
std::string fnv1a_hex(std::string_view text);

} // namespace cmnalm
