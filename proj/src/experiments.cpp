#include "cmnalm/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <exception>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "cmnalm/rng.hpp"

namespace cmnalm {

namespace {

constexpr std::uint64_t kSignalStream = 1;
constexpr std::uint64_t kMatrixStream = 2;
constexpr std::uint64_t kNoiseStream = 3;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Runs fn(trial) for every trial on `workers` threads. Each call returns one
// SNR per cell; rows are stored by trial index so the reduction order never
// depends on scheduling.
template <class Fn>
std::vector<std::vector<double>> run_trials(std::size_t trials, int workers, Fn&& fn) {
    std::vector<std::vector<double>> table(trials);
    std::exception_ptr error;
    const auto count = static_cast<std::ptrdiff_t>(trials);
#pragma omp parallel for num_threads(std::max(1, workers)) schedule(dynamic, 1)
    for (std::ptrdiff_t t = 0; t < count; ++t) {
        try {
            table[static_cast<std::size_t>(t)] = fn(static_cast<std::size_t>(t));
        } catch (...) {
#pragma omp critical(cmnalm_trial_error)
            if (!error) error = std::current_exception();
        }
    }
    if (error) std::rethrow_exception(error);
    return table;
}

double solve_snr(const Variant& v, const Instance& inst, const SolverConfig& base) {
    try {
        const SolveReport rep = v.solve(inst.problem, base);
        const double snr = snr_db(inst.x_true, rep.x_hat);
        return std::isfinite(snr) ? snr : kNaN;
    } catch (const SolverError&) {
        return kNaN;
    }
}

ResultRow reduce_cell(const std::vector<std::vector<double>>& table, std::size_t cell, std::string label,
                      double grid_value) {
    ResultRow row;
    row.variant = std::move(label);
    row.grid_value = grid_value;
    double sum = 0.0;
    for (const auto& trial : table) {
        const double v = trial[cell];
        if (std::isfinite(v)) {
            sum += v;
            ++row.n_trials;
        } else {
            ++row.n_failed;
        }
    }
    if (row.n_trials == 0) {
        row.mean_snr_db = kNaN;
        row.sd_snr_db = kNaN;
        return row;
    }
    row.mean_snr_db = sum / static_cast<double>(row.n_trials);
    double ss = 0.0;
    for (const auto& trial : table) {
        const double v = trial[cell];
        if (std::isfinite(v)) ss += (v - row.mean_snr_db) * (v - row.mean_snr_db);
    }
    row.sd_snr_db = row.n_trials > 1 ? std::sqrt(ss / static_cast<double>(row.n_trials - 1)) : 0.0;
    return row;
}

std::string utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

ExperimentResult start_result(const ExperimentConfig& cfg) {
    ExperimentResult res;
    res.kind = cfg.kind;
    res.config_hash = config_hash(cfg);
    res.master_seed = cfg.master_seed;
    res.timestamp = utc_timestamp();
    return res;
}

TrialSpec trial_spec(const ExperimentConfig& cfg, std::size_t trial) {
    TrialSpec spec;
    spec.n = cfg.n;
    spec.m = cfg.m;
    spec.k = cfg.k;
    spec.noise = StableNoiseParams{cfg.alpha, cfg.gamma};
    spec.matrix_norm = cfg.matrix_norm;
    spec.sigma_n = cfg.sigma_n;
    spec.master_seed = cfg.master_seed;
    spec.trial_index = trial;
    return spec;
}

std::size_t count_failed(const std::vector<ResultRow>& rows) {
    std::size_t n = 0;
    for (const auto& r : rows) n += r.n_failed;
    return n;
}

void check_kind(const ExperimentConfig& cfg, ExperimentKind kind) {
    cfg.validate();
    if (cfg.kind != kind) throw std::invalid_argument("experiment config has kind " + to_string(cfg.kind));
}

} // namespace

std::string to_string(MatrixNorm norm) {
    switch (norm) {
    case MatrixNorm::none: return "none";
    case MatrixNorm::unit_spectral: return "unit_spectral";
    case MatrixNorm::inv_sqrt_m: return "inv_sqrt_m";
    }
    return "?";
}

MatrixNorm matrix_norm_from_string(const std::string& s) {
    if (s == "none") return MatrixNorm::none;
    if (s == "unit_spectral") return MatrixNorm::unit_spectral;
    if (s == "inv_sqrt_m") return MatrixNorm::inv_sqrt_m;
    throw std::invalid_argument("unknown matrix normalization '" + s + "'");
}

std::string to_string(ExperimentKind kind) {
    switch (kind) {
    case ExperimentKind::preference: return "preference";
    case ExperimentKind::noise_sweep: return "noise_sweep";
    case ExperimentKind::cs_sweep: return "cs_sweep";
    }
    return "?";
}

ExperimentKind experiment_kind_from_string(const std::string& s) {
    if (s == "preference") return ExperimentKind::preference;
    if (s == "noise_sweep") return ExperimentKind::noise_sweep;
    if (s == "cs_sweep") return ExperimentKind::cs_sweep;
    throw std::invalid_argument("unknown experiment kind '" + s + "'");
}

RealVector gen_sparse_signal(std::size_t n, std::size_t k, std::uint64_t seed) {
    if (k > n) throw std::invalid_argument("gen_sparse_signal: k > n");
    auto rng = make_rng(seed);
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::shuffle(idx.begin(), idx.end(), rng);
    std::normal_distribution<double> normal;
    RealVector x(n, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
        double v = normal(rng);
        while (v == 0.0) v = normal(rng);
        x[idx[i]] = v;
    }
    return x;
}

DenseMatrix gen_gaussian_matrix(std::size_t m, std::size_t n, MatrixNorm norm, std::uint64_t seed) {
    if (m == 0 || n == 0) throw std::invalid_argument("gen_gaussian_matrix: empty shape");
    auto rng = make_rng(seed);
    std::normal_distribution<double> normal;
    std::vector<double> e(m * n);
    for (auto& v : e) v = normal(rng);
    DenseMatrix a(m, n, std::move(e));
    switch (norm) {
    case MatrixNorm::none: return a;
    case MatrixNorm::inv_sqrt_m: return a.scaled(1.0 / std::sqrt(static_cast<double>(m)));
    case MatrixNorm::unit_spectral: {
        // Power iteration converges slowly when the top two singular values
        // are close; iterate until the estimate settles.
        const double s2 = spectral_norm_sq(a, 2000, seed ^ 0xa5a5a5a5ULL).value;
        return a.scaled(1.0 / std::sqrt(s2));
    }
    }
    return a;
}

Instance make_instance(const TrialSpec& spec) {
    if (spec.k > spec.n) throw std::invalid_argument("make_instance: k > n");
    Instance inst;
    inst.x_true = gen_sparse_signal(spec.n, spec.k, derive_seed(spec.master_seed, spec.trial_index, kSignalStream));
    DenseMatrix a = gen_gaussian_matrix(spec.m, spec.n, spec.matrix_norm,
                                        derive_seed(spec.master_seed, spec.trial_index, kMatrixStream));
    RealVector y = matvec(a, inst.x_true);
    if (spec.noise) {
        inst.noise = sample_sas(*spec.noise, spec.m, derive_seed(spec.master_seed, spec.trial_index, kNoiseStream));
    } else {
        inst.noise.assign(spec.m, 0.0);
    }
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += inst.noise[i];
    inst.problem = Problem{std::move(a), std::move(y), spec.sigma_n};
    return inst;
}

double snr_db(std::span<const double> x_true, std::span<const double> x_hat) {
    if (x_true.size() != x_hat.size()) throw DimensionError("snr_db: length mismatch");
    const double sig = norm2(x_true);
    if (sig == 0.0) throw std::invalid_argument("snr_db: reference signal is zero");
    RealVector err(x_true.size());
    for (std::size_t i = 0; i < err.size(); ++i) err[i] = x_hat[i] - x_true[i];
    const double e = norm2(err);
    if (e == 0.0) return kSnrCapDb;
    return std::min(kSnrCapDb, 20.0 * std::log10(sig / e));
}

Variant Variant::cmn(double p_s, double p_f, double q) {
    Variant v;
    char buf[64];
    std::snprintf(buf, sizeof buf, "CMN(%g,%g,%g)", p_s, p_f, q);
    v.label = buf;
    v.p_s = p_s;
    v.p_f = p_f;
    v.q = q;
    return v;
}

Variant Variant::lp_baseline(double p) {
    Variant v;
    char buf[64];
    std::snprintf(buf, sizeof buf, "Lp(p=%g)", p);
    v.label = buf;
    v.lp = true;
    v.p = p;
    return v;
}

SolveReport Variant::solve(const Problem& problem, const SolverConfig& base) const {
    if (lp) return solve_lp_admm(problem, p, base);
    SolverConfig cfg = base;
    cfg.cmn.p_s = p_s;
    cfg.cmn.p_f = p_f;
    cfg.cmn.q = q;
    return solve_cmn_alm(problem, cfg);
}

void ExperimentConfig::validate() const {
    if (trials == 0) throw std::invalid_argument("experiment: trials must be > 0");
    if (k > n) throw std::invalid_argument("experiment: k > n");
    if (n == 0 || m == 0) throw std::invalid_argument("experiment: n and m must be > 0");
    StableNoiseParams{alpha, gamma}.validate();
    if (!(sigma_n > 0.0)) throw std::invalid_argument("experiment: sigma_n must be > 0");
    if (variants.empty()) throw std::invalid_argument("experiment: no solver variants");
    if (grid.empty()) throw std::invalid_argument("experiment: empty grid");
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] > grid[i - 1])) throw std::invalid_argument("experiment: grid must be strictly increasing");
    }
    switch (kind) {
    case ExperimentKind::preference:
        for (double p : grid) {
            if (!(p > 0.0 && p <= 2.0)) throw std::invalid_argument("experiment: baseline p must be in (0, 2]");
        }
        break;
    case ExperimentKind::noise_sweep:
        for (double g : grid) {
            if (!(g > 0.0)) throw std::invalid_argument("experiment: gamma grid must be > 0");
        }
        break;
    case ExperimentKind::cs_sweep:
        for (double r : grid) {
            if (!(r > 0.0)) throw std::invalid_argument("experiment: m/n grid must be > 0");
        }
        break;
    }
    solver.validate();
}

SolverConfig default_experiment_solver() {
    SolverConfig s;
    s.cmn.eps = 1e-2;
    s.sigma = 1.0;
    s.xi = 0.1;
    s.mu_min = 0.5;
    s.zeta = 0.95;
    s.lambda0 = 2.0;
    s.tol = 1e-5;
    s.max_iter = 100;
    return s;
}

namespace {

std::vector<Variant> proposed_variants() {
    return {Variant::cmn(0, 1, 1), Variant::cmn(0, 1, 2), Variant::cmn(0, 2, 2)};
}

} // namespace

ExperimentConfig default_preference_config() {
    ExperimentConfig c;
    c.kind = ExperimentKind::preference;
    c.variants = proposed_variants();
    for (int i = 1; i <= 19; ++i) c.grid.push_back(0.1 * i);
    c.solver = default_experiment_solver();
    return c;
}

ExperimentConfig default_noise_sweep_config() {
    ExperimentConfig c = default_preference_config();
    c.kind = ExperimentKind::noise_sweep;
    c.alpha = 0.5;
    c.variants = proposed_variants();
    for (double p : {0.5, 1.0, 1.5}) c.variants.push_back(Variant::lp_baseline(p));
    c.grid = {1e-4, 1e-3, 1e-2, 1e-1};
    return c;
}

ExperimentConfig default_cs_sweep_config() {
    ExperimentConfig c = default_noise_sweep_config();
    c.kind = ExperimentKind::cs_sweep;
    c.alpha = 1.5;
    c.gamma = 1e-3;
    c.k = 8;
    c.grid.clear();
    for (int i = 1; i <= 9; ++i) c.grid.push_back(0.1 * i);
    return c;
}

const ResultRow* ExperimentResult::find(const std::string& variant, double grid_value) const {
    for (const auto& r : rows) {
        if (r.variant == variant && std::abs(r.grid_value - grid_value) <= 1e-12 * std::max(1.0, std::abs(grid_value))) {
            return &r;
        }
    }
    return nullptr;
}

double preference_ratio(double variant_snr, std::span<const double> baseline_snr) {
    if (baseline_snr.empty()) throw std::invalid_argument("preference_ratio: empty baseline curve");
    std::size_t wins = 0;
    // Ties count for the variant.
    for (double b : baseline_snr) wins += variant_snr >= b ? 1 : 0;
    return 100.0 * static_cast<double>(wins) / static_cast<double>(baseline_snr.size());
}

ExperimentResult run_preference_experiment(const ExperimentConfig& cfg) {
    check_kind(cfg, ExperimentKind::preference);
    const std::size_t nv = cfg.variants.size();
    const std::size_t ng = cfg.grid.size();

    // Cells: every variant once, then the baseline at each grid p.
    auto table = run_trials(cfg.trials, cfg.workers, [&](std::size_t t) {
        const Instance inst = make_instance(trial_spec(cfg, t));
        std::vector<double> snr(nv + ng);
        for (std::size_t v = 0; v < nv; ++v) snr[v] = solve_snr(cfg.variants[v], inst, cfg.solver);
        for (std::size_t g = 0; g < ng; ++g) snr[nv + g] = solve_snr(Variant::lp_baseline(cfg.grid[g]), inst, cfg.solver);
        return snr;
    });

    ExperimentResult res = start_result(cfg);
    std::vector<double> baseline(ng);
    for (std::size_t g = 0; g < ng; ++g) {
        res.rows.push_back(reduce_cell(table, nv + g, cfg.baseline_label, cfg.grid[g]));
        baseline[g] = res.rows.back().mean_snr_db;
    }
    for (std::size_t v = 0; v < nv; ++v) {
        const ResultRow line = reduce_cell(table, v, cfg.variants[v].label, 0.0);
        for (double p : cfg.grid) {
            ResultRow r = line;
            r.grid_value = p;
            res.rows.push_back(r);
        }
        res.preference.push_back({cfg.variants[v].label, preference_ratio(line.mean_snr_db, baseline)});
    }
    res.failed_solves = 0;
    for (const auto& trial : table) {
        for (double s : trial) res.failed_solves += std::isfinite(s) ? 0 : 1;
    }
    return res;
}

ExperimentResult run_noise_sweep(const ExperimentConfig& cfg) {
    check_kind(cfg, ExperimentKind::noise_sweep);
    const std::size_t nv = cfg.variants.size();
    const std::size_t ng = cfg.grid.size();

    // The same (signal, matrix, noise shape) is reused along the γ axis of a trial.
    auto table = run_trials(cfg.trials, cfg.workers, [&](std::size_t t) {
        std::vector<double> snr(nv * ng);
        for (std::size_t g = 0; g < ng; ++g) {
            TrialSpec spec = trial_spec(cfg, t);
            spec.noise->gamma = cfg.grid[g];
            const Instance inst = make_instance(spec);
            for (std::size_t v = 0; v < nv; ++v) snr[v * ng + g] = solve_snr(cfg.variants[v], inst, cfg.solver);
        }
        return snr;
    });

    ExperimentResult res = start_result(cfg);
    for (std::size_t v = 0; v < nv; ++v) {
        for (std::size_t g = 0; g < ng; ++g) res.rows.push_back(reduce_cell(table, v * ng + g, cfg.variants[v].label, cfg.grid[g]));
    }
    res.failed_solves = count_failed(res.rows);
    return res;
}

ExperimentResult run_cs_sweep(const ExperimentConfig& cfg) {
    check_kind(cfg, ExperimentKind::cs_sweep);
    const std::size_t nv = cfg.variants.size();
    const std::size_t ng = cfg.grid.size();

    auto table = run_trials(cfg.trials, cfg.workers, [&](std::size_t t) {
        std::vector<double> snr(nv * ng);
        for (std::size_t g = 0; g < ng; ++g) {
            TrialSpec spec = trial_spec(cfg, t);
            spec.m = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(cfg.grid[g] * static_cast<double>(cfg.n))));
            const Instance inst = make_instance(spec);
            for (std::size_t v = 0; v < nv; ++v) snr[v * ng + g] = solve_snr(cfg.variants[v], inst, cfg.solver);
        }
        return snr;
    });

    ExperimentResult res = start_result(cfg);
    for (std::size_t v = 0; v < nv; ++v) {
        for (std::size_t g = 0; g < ng; ++g) res.rows.push_back(reduce_cell(table, v * ng + g, cfg.variants[v].label, cfg.grid[g]));
    }
    res.failed_solves = count_failed(res.rows);
    return res;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    switch (cfg.kind) {
    case ExperimentKind::preference: return run_preference_experiment(cfg);
    case ExperimentKind::noise_sweep: return run_noise_sweep(cfg);
    case ExperimentKind::cs_sweep: return run_cs_sweep(cfg);
    }
    throw std::invalid_argument("run_experiment: unknown kind");
}

std::string describe(const ExperimentConfig& cfg) {
    std::ostringstream os;
    os.precision(17);
    const auto& s = cfg.solver;
    os << "kind=" << to_string(cfg.kind) << "\ntrials=" << cfg.trials << "\nmaster_seed=" << cfg.master_seed
       << "\nn=" << cfg.n << "\nm=" << cfg.m << "\nk=" << cfg.k << "\nalpha=" << cfg.alpha << "\ngamma=" << cfg.gamma
       << "\nmatrix_norm=" << to_string(cfg.matrix_norm) << "\nsigma_n=" << cfg.sigma_n
       << "\nbaseline_label=" << cfg.baseline_label << "\ngrid=";
    for (double g : cfg.grid) os << g << ',';
    os << "\nvariants=";
    for (const auto& v : cfg.variants) {
        os << v.label << ':' << (v.lp ? "lp" : "cmn") << ':' << v.p_s << ':' << v.p_f << ':' << v.q << ':' << v.p << ';';
    }
    os << "\nsolver=" << s.cmn.eps << ',' << s.sigma << ',' << (s.mu_init ? *s.mu_init : -1.0) << ',' << s.xi << ','
       << s.mu_min << ',' << s.zeta << ',' << (s.lambda0 ? *s.lambda0 : -1.0) << ','
       << (s.lambda_policy == LambdaPolicy::auto_raise ? "auto_raise" : "warn") << ',' << s.tol << ','
       << s.max_iter << ',' << s.inner_iters << '\n';
    return os.str();
}

std::string config_hash(const ExperimentConfig& cfg) { return fnv1a_hex(describe(cfg)); }

std::string fnv1a_hex(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace cmnalm
