// Acceptance suite: one PASS/FAIL line per criterion, fixed seeds.
// Exit status is the number of failed criteria.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>

#include <unistd.h>

#include "cmnalm/cli.hpp"
#include "cmnalm/cmn.hpp"
#include "cmnalm/experiments.hpp"
#include "cmnalm/io.hpp"
#include "cmnalm/solver.hpp"
#include "cmnalm/stable_noise.hpp"
#include "oracles.hpp"

using namespace cmnalm;

namespace {

constexpr std::uint64_t kSeed = 1;

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void criterion(int id, const char* name, double limit_s, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool ok = o.pass && secs < limit_s;
    if (!ok) ++failures;
    std::printf("[%s] criterion %d %s: %s (%.2fs, limit %.0fs)\n", ok ? "PASS" : "FAIL", id, name, o.detail.c_str(),
                secs, limit_s);
    std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

const CmnParams kRanges[] = {
    {0.0, 1.0, 1.0, 0.0},
    {0.0, 1.0, 2.0, 0.0},
    {0.0, 2.0, 2.0, 0.0},
    {0.3, 1.7, 2.0, 0.0},
};

Outcome weight_vs_oracle() {
    std::vector<double> zs;
    for (int i = 0; i < 200; ++i) zs.push_back(std::pow(10.0, -3.0 + 6.0 * i / 199.0));
    for (double d : {1e-6, 5e-7, 1e-7, 1e-9, 1e-12}) {
        zs.push_back(1.0 + d);
        zs.push_back(1.0 - d);
    }
    zs.push_back(1.0);
    double worst = 0.0;
    for (const auto& pr : kRanges)
        for (double z : zs) worst = std::max(worst, oracle::rel_diff(phi_weight(z, pr), oracle::phi(z, pr)));
    return {worst <= 1e-8, fmt("max rel err %.3g over %zu points (need <= 1e-8)", worst, zs.size() * 4)};
}

Outcome majorization() {
    std::mt19937_64 rng(kSeed);
    std::uniform_real_distribution<double> lz(-3.0, 2.0);
    std::bernoulli_distribution sign(0.5);
    auto draw = [&] { return std::pow(10.0, lz(rng)) * (sign(rng) ? 1.0 : -1.0); };
    double worst_gap = std::numeric_limits<double>::infinity(), worst_tangent = 0.0;
    for (int t = 0; t < 100000; ++t) {
        CmnParams pr = kRanges[t % 4];
        pr.eps = (t / 4) % 2 ? 1e-2 : 0.0;
        const RealVector z{draw()}, zr{draw()};
        const double f = cmn_value(z, pr);
        worst_gap = std::min(worst_gap, surrogate_value(z, zr, pr) - f);
        worst_tangent = std::max(worst_tangent, std::abs(surrogate_value(z, z, pr) - f));
    }
    for (int t = 0; t < 1000; ++t) {
        CmnParams pr = kRanges[t % 4];
        pr.eps = (t / 4) % 2 ? 1e-2 : 0.0;
        RealVector z(32), zr(32);
        for (int i = 0; i < 32; ++i) {
            z[i] = draw();
            zr[i] = draw();
        }
        const double f = cmn_value(z, pr);
        worst_gap = std::min(worst_gap, surrogate_value(z, zr, pr) - f);
        worst_tangent = std::max(worst_tangent, std::abs(surrogate_value(z, z, pr) - f));
    }
    return {worst_gap >= -1e-12 && worst_tangent <= 1e-10,
            fmt("min(surrogate - cmn) = %.3g (need >= -1e-12), max tangency gap %.3g (need <= 1e-10)", worst_gap,
                worst_tangent)};
}

Outcome per_step_descent() {
    double worst_z = -INFINITY, worst_x = -INFINITY;
    long steps = 0;
    for (std::uint64_t i = 0; i < 50; ++i) {
        TrialSpec spec;
        spec.n = 64;
        spec.m = 32;
        spec.k = 4;
        spec.noise = StableNoiseParams{1.5, 1e-2};
        spec.master_seed = kSeed;
        spec.trial_index = i;
        const Problem pb = make_instance(spec).problem;
        for (const CmnParams& range : {CmnParams{0, 1, 1, 1e-2}, CmnParams{0, 1, 2, 1e-2}, CmnParams{0, 2, 2, 1e-2}}) {
            SolverConfig c;
            c.cmn = range;
            solve_cmn_alm(pb, c, [&](const SolverState& b, const SolverState& a) {
                RealVector v = scaled_residual(pb, b.x);
                for (std::size_t j = 0; j < v.size(); ++j) v[j] += b.eta[j] / c.sigma;
                worst_z = std::max(worst_z, z_subproblem_objective(a.z, b.z, v, c) - z_subproblem_objective(b.z, b.z, v, c));
                worst_x = std::max(worst_x, x_subproblem_objective(a.x, a.z, b.eta, b.mu, pb, c) -
                                                x_subproblem_objective(b.x, a.z, b.eta, b.mu, pb, c));
                ++steps;
            });
        }
    }
    return {worst_z <= 1e-10 && worst_x <= 1e-10,
            fmt("%ld iterations; max increase z-step %.3g, x-step %.3g (need <= 1e-10)", steps, worst_z, worst_x)};
}

Outcome noiseless_recovery() {
    int good = 0, worst_iters = 0;
    double min_snr = INFINITY;
    SolverConfig c;
    c.cmn = {0, 1, 1, 1e-2};
    for (std::uint64_t i = 0; i < 20; ++i) {
        TrialSpec spec;
        spec.n = 64;
        spec.m = 32;
        spec.k = 4;
        spec.master_seed = kSeed;
        spec.trial_index = i;
        const Instance inst = make_instance(spec);
        const auto rep = solve_cmn_alm(inst.problem, c);
        const double snr = snr_db(inst.x_true, rep.x_hat);
        worst_iters = std::max(worst_iters, rep.iterations);
        min_snr = std::min(min_snr, snr);
        good += snr >= 40.0 && rep.iterations <= 100;
    }
    return {good >= 18, fmt("%d/20 trials >= 40 dB (need >= 18), min SNR %.1f dB, max %d iterations", good, min_snr,
                            worst_iters)};
}

Outcome table_one() {
    ExperimentConfig cfg = default_preference_config();
    cfg.trials = 20;
    cfg.master_seed = kSeed;
    cfg.workers = 8;
    const auto res = run_preference_experiment(cfg);
    bool ok = true;
    std::string d = "ratios";
    for (const auto& p : res.preference) {
        ok = ok && p.percent >= 80.0;
        d += fmt(" %s=%.1f%%", p.variant.c_str(), p.percent);
    }
    double best = -INFINITY;
    for (const auto& r : res.rows)
        if (r.variant == cfg.baseline_label) best = std::max(best, r.mean_snr_db);
    return {ok, d + fmt(" (need >= 80%% each); best baseline %.2f dB", best)};
}

Outcome noise_sweep_alpha_half() {
    ExperimentConfig cfg = default_noise_sweep_config();
    cfg.trials = 20;
    cfg.master_seed = kSeed;
    cfg.workers = 8;
    const auto res = run_noise_sweep(cfg);
    bool ok = true;
    std::string d = "CMN(0,1,1) - Lp(p=1.5) dB at gamma";
    for (double g : cfg.grid) {
        const double diff = res.find("CMN(0,1,1)", g)->mean_snr_db - res.find("Lp(p=1.5)", g)->mean_snr_db;
        ok = ok && diff >= -1.0;
        d += fmt(" %g:%+.2f", g, diff);
    }
    return {ok, d + " (need >= -1)"};
}

Outcome sampler_statistics() {
    const double g = 0.5;
    const auto gauss = sample_sas({2.0, g}, 1000000, kSeed);
    double mean = 0.0;
    for (double v : gauss) mean += v;
    mean /= gauss.size();
    double var = 0.0;
    for (double v : gauss) var += (v - mean) * (v - mean);
    var /= gauss.size() - 1;
    const double var_err = std::abs(var / (2 * g * g) - 1.0);

    auto cauchy = sample_sas({1.0, g}, 1000000, kSeed + 1);
    auto q = [&](double p) {
        const auto k = static_cast<std::size_t>(p * (cauchy.size() - 1));
        std::nth_element(cauchy.begin(), cauchy.begin() + k, cauchy.end());
        return cauchy[k];
    };
    const double q1 = q(0.25), q2 = q(0.5), q3 = q(0.75);
    const double q_err = std::max(std::abs(q1 / -g - 1.0), std::abs(q3 / g - 1.0));
    return {var_err <= 0.05 && q_err <= 0.02 && std::abs(q2) <= 0.01 * g,
            fmt("alpha=2 variance rel err %.4f (<= 0.05); alpha=1 quartile rel err %.4f (<= 0.02), median %.2e gamma "
                "(<= 0.01)",
                var_err, q_err, std::abs(q2) / g)};
}

Outcome degenerate_equivalence() {
    double worst = 0.0;
    std::size_t iterations = 0;
    bool same_len = true;
    for (std::uint64_t i = 0; i < 10; ++i) {
        TrialSpec spec;
        spec.n = 64;
        spec.m = 32;
        spec.k = 4;
        spec.noise = StableNoiseParams{1.5, 1e-3};
        spec.master_seed = kSeed;
        spec.trial_index = i;
        const Problem pb = make_instance(spec).problem;
        std::vector<SolverState> a, b;
        SolverConfig base;
        solve_lp_admm(pb, 1.0, base, [&](const SolverState&, const SolverState& s) { a.push_back(s); });
        SolverConfig c = base;
        c.cmn.p_s = c.cmn.p_f = c.cmn.q = 1.0;
        solve_cmn_alm(pb, c, [&](const SolverState&, const SolverState& s) { b.push_back(s); });
        same_len = same_len && a.size() == b.size();
        for (std::size_t k = 0; k < std::min(a.size(), b.size()); ++k) {
            for (const auto& [u, v] : {std::pair{&a[k].x, &b[k].x}, {&a[k].z, &b[k].z}, {&a[k].eta, &b[k].eta}}) {
                for (std::size_t j = 0; j < u->size(); ++j)
                    worst = std::max(worst, std::abs((*u)[j] - (*v)[j]) / std::max(1.0, std::abs((*v)[j])));
            }
        }
        iterations += a.size();
    }
    return {same_len && worst <= 1e-12, fmt("%zu iterations compared, max rel diff %.3g (need <= 1e-12)%s", iterations,
                                            worst, same_len ? "" : ", sequence lengths differ")};
}

Outcome parallel_reproducibility() {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / ("cmnalm_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    io::json cfg = io::to_json(default_preference_config());
    cfg["trials"] = 20;
    cfg.erase("workers");
    io::write_text_file((dir / "config.json").string(), cfg.dump(2));
    std::ostringstream err;
    const auto read = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream os;
        os << in.rdbuf();
        return os.str();
    };
    const int rc1 = cli::cmd_experiment({(dir / "config.json").string(), (dir / "w1").string(), 1, kSeed}, err);
    const int rc8 = cli::cmd_experiment({(dir / "config.json").string(), (dir / "w8").string(), 8, kSeed}, err);
    const std::string a = read(dir / "w1/results.csv"), b = read(dir / "w8/results.csv");
    fs::remove_all(dir);
    return {rc1 == 0 && rc8 == 0 && !a.empty() && a == b,
            fmt("exit codes %d/%d, results.csv %zu vs %zu bytes, %s", rc1, rc8, a.size(), b.size(),
                a == b ? "identical" : "DIFFERENT")};
}

} // namespace

int main() {
    criterion(1, "weight function vs quadrature oracle", 5, weight_vs_oracle);
    criterion(2, "surrogate majorization and tangency", 10, majorization);
    criterion(3, "per-step descent", 30, per_step_descent);
    criterion(4, "noiseless recovery", 10, noiseless_recovery);
    criterion(5, "preference ratios, alpha=1.5 gamma=1e-4", 600, table_one);
    criterion(6, "noise sweep ordering, alpha=0.5", 600, noise_sweep_alpha_half);
    criterion(7, "stable sampler statistics", 10, sampler_statistics);
    criterion(8, "degenerate range equals lp baseline", 10, degenerate_equivalence);
    criterion(9, "worker-count reproducibility", 300, parallel_reproducibility);
    std::printf("%d of 9 criteria failed\n", failures);
    return failures;
}
