#include "cmnalm/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace cmnalm {

namespace {

void require(bool ok, const std::string& msg) {
    if (!ok) throw std::invalid_argument(msg);
}

// v = (Ax − y)/σ_n + η/σ
RealVector admm_argument(std::span<const double> ax, const Problem& pb, std::span<const double> eta,
                         double sigma) {
    RealVector v(ax.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = (ax[i] - pb.y[i]) / pb.sigma_n + eta[i] / sigma;
    return v;
}

RealVector z_step_q1(std::span<const double> v, std::span<const double> z_ref, const SolverConfig& cfg) {
    RealVector t = phi_weights(z_ref, cfg.cmn);
    for (auto& ti : t) ti /= cfg.sigma;
    return soft_threshold(v, t);
}

RealVector z_step_q2(std::span<const double> v, std::span<const double> z_ref, const SolverConfig& cfg) {
    const RealVector w = phi_weights(z_ref, cfg.cmn);
    RealVector z(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!(w[i] >= 0.0)) throw std::logic_error("z_update_q2: negative majorizer weight");
        z[i] = v[i] / (1.0 + 2.0 / cfg.sigma * w[i]);
    }
    return z;
}

RealVector z_step(std::span<const double> v, std::span<const double> z_ref, const SolverConfig& cfg) {
    RealVector z(z_ref.begin(), z_ref.end());
    for (int it = 0; it < cfg.inner_iters; ++it) {
        z = cfg.cmn.q == 1.0 ? z_step_q1(v, z, cfg) : z_step_q2(v, z, cfg);
    }
    return z;
}

// One ISTA step from x with A x already known.
RealVector x_step(std::span<const double> x, std::span<const double> ax, std::span<const double> z_new,
                  std::span<const double> eta, double mu, const Problem& pb, const SolverConfig& cfg,
                  double lambda0) {
    RealVector r(ax.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = (ax[i] - pb.y[i]) / pb.sigma_n - z_new[i] + eta[i] / cfg.sigma;
    const RealVector g = matvec_transposed(pb.a, r);
    const double step = 1.0 / (lambda0 * pb.sigma_n);
    RealVector u(x.size());
    for (std::size_t j = 0; j < u.size(); ++j) u[j] = x[j] - step * g[j];
    return soft_threshold(u, mu / (cfg.sigma * lambda0));
}

RealVector x_steps(std::span<const double> x0, std::span<const double> ax0, std::span<const double> z_new,
                   std::span<const double> eta, double mu, const Problem& pb, const SolverConfig& cfg,
                   double lambda0) {
    RealVector x = x_step(x0, ax0, z_new, eta, mu, pb, cfg, lambda0);
    for (int it = 1; it < cfg.inner_iters; ++it) {
        const RealVector ax = matvec(pb.a, x);
        x = x_step(x, ax, z_new, eta, mu, pb, cfg, lambda0);
    }
    return x;
}

void check_state_dims(const SolverState& s, const Problem& pb) {
    if (s.x.size() != pb.a.cols() || s.z.size() != pb.a.rows() || s.eta.size() != pb.a.rows()) {
        throw DimensionError("solver state does not match problem dimensions");
    }
}

} // namespace

void Problem::validate() const {
    if (a.empty()) throw DimensionError("Problem: empty measurement matrix");
    if (y.size() != a.rows()) {
        throw DimensionError("Problem: y has length " + std::to_string(y.size()) + " but A has " +
                             std::to_string(a.rows()) + " rows");
    }
    require(all_finite(y), "Problem: y has non-finite entries");
    require(sigma_n > 0.0 && std::isfinite(sigma_n), "Problem: sigma_n must be > 0");
}

void SolverConfig::validate() const {
    cmn.validate();
    require(cmn.q == 1.0 || cmn.q == 2.0, "SolverConfig: q must be 1 or 2");
    require(sigma > 0.0, "SolverConfig: sigma must be > 0");
    require(!mu_init || *mu_init >= 0.0, "SolverConfig: mu_init must be >= 0");
    require(xi >= 0.0, "SolverConfig: xi must be >= 0");
    require(mu_min > 0.0, "SolverConfig: mu_min must be > 0");
    require(zeta > 0.0 && zeta <= 1.0, "SolverConfig: zeta must be in (0, 1]");
    require(!lambda0 || *lambda0 > 0.0, "SolverConfig: lambda0 must be > 0");
    require(tol > 0.0, "SolverConfig: tol must be > 0");
    require(max_iter > 0, "SolverConfig: max_iter must be > 0");
    require(inner_iters > 0, "SolverConfig: inner_iters must be > 0");
}

RealVector scaled_residual(const Problem& problem, std::span<const double> x) {
    RealVector r = matvec(problem.a, x);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = (r[i] - problem.y[i]) / problem.sigma_n;
    return r;
}

double resolve_mu_init(const Problem& problem, const SolverConfig& config) {
    if (config.mu_init) return *config.mu_init;
    // λ_max of the ℓ2 data term at x = 0 is ‖Aᵀy‖_∞/σ_n².
    const RealVector aty = matvec_transposed(problem.a, problem.y);
    return config.xi * norm_inf(aty) / (problem.sigma_n * problem.sigma_n);
}

double resolve_lambda0(const Problem& problem, const SolverConfig& config, std::vector<std::string>* warnings) {
    const double bound = spectral_norm_sq(problem.a).value / (problem.sigma_n * problem.sigma_n);
    const double safe = 1.01 * bound;
    if (!config.lambda0) return safe;
    const double given = *config.lambda0;
    if (given > bound) return given;
    const bool raise = config.lambda_policy == LambdaPolicy::auto_raise;
    if (warnings) {
        warnings->push_back("lambda0 = " + std::to_string(given) + " does not exceed ||A||^2/sigma_n^2 = " +
                            std::to_string(bound) + (raise ? "; raised to " + std::to_string(safe) : ""));
    }
    return raise ? safe : given;
}

SolverState initial_state(const Problem& problem, const SolverConfig& config) {
    SolverState s;
    s.x.assign(problem.a.cols(), 0.0);
    s.z.resize(problem.y.size());
    for (std::size_t i = 0; i < s.z.size(); ++i) s.z[i] = -problem.y[i] / problem.sigma_n;
    s.eta.assign(problem.y.size(), 0.0);
    s.mu = resolve_mu_init(problem, config);
    return s;
}

RealVector z_update_q1(const SolverState& state, const Problem& problem, const SolverConfig& config) {
    require(config.cmn.q == 1.0 && config.cmn.p_f <= 1.0, "z_update_q1: needs q = 1 and p_f <= 1");
    check_state_dims(state, problem);
    const RealVector ax = matvec(problem.a, state.x);
    return z_step(admm_argument(ax, problem, state.eta, config.sigma), state.z, config);
}

RealVector z_update_q2(const SolverState& state, const Problem& problem, const SolverConfig& config) {
    require(config.cmn.q == 2.0 && config.cmn.p_f <= 2.0, "z_update_q2: needs q = 2 and p_f <= 2");
    check_state_dims(state, problem);
    const RealVector ax = matvec(problem.a, state.x);
    return z_step(admm_argument(ax, problem, state.eta, config.sigma), state.z, config);
}

RealVector x_update(const SolverState& state, std::span<const double> z_new, const Problem& problem,
                    const SolverConfig& config, double lambda0) {
    check_state_dims(state, problem);
    if (z_new.size() != problem.a.rows()) throw DimensionError("x_update: z has wrong length");
    const RealVector ax = matvec(problem.a, state.x);
    return x_steps(state.x, ax, z_new, state.eta, state.mu, problem, config, lambda0);
}

RealVector eta_update(const SolverState& state, std::span<const double> z_new, std::span<const double> x_new,
                      const Problem& problem, const SolverConfig& config) {
    if (z_new.size() != state.eta.size()) throw DimensionError("eta_update: z has wrong length");
    const RealVector r = scaled_residual(problem, x_new);
    RealVector eta(state.eta);
    for (std::size_t i = 0; i < eta.size(); ++i) eta[i] += config.sigma * (r[i] - z_new[i]);
    return eta;
}

Residuals residuals(const SolverState& prev, const SolverState& next, const Problem& problem,
                    const SolverConfig& config) {
    RealVector r = scaled_residual(problem, next.x);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= next.z[i];
    RealVector dz(next.z.size());
    for (std::size_t i = 0; i < dz.size(); ++i) dz[i] = next.z[i] - prev.z[i];
    return {norm2(r), config.sigma / problem.sigma_n * norm2(matvec_transposed(problem.a, dz))};
}

double z_subproblem_objective(std::span<const double> z, std::span<const double> z_ref, std::span<const double> v,
                              const SolverConfig& config) {
    if (z.size() != z_ref.size() || z.size() != v.size()) throw DimensionError("z_subproblem_objective: length mismatch");
    double sum = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        const double w = phi_weight(std::abs(z_ref[i]), config.cmn);
        const double d = v[i] - z[i];
        sum += std::pow(std::abs(z[i]), config.cmn.q) * w + 0.5 * config.sigma * d * d;
    }
    return sum;
}

double x_subproblem_objective(std::span<const double> x, std::span<const double> z_new, std::span<const double> eta,
                              double mu, const Problem& problem, const SolverConfig& config) {
    RealVector r = scaled_residual(problem, x);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += -z_new[i] + eta[i] / config.sigma;
    return 0.5 * config.sigma * norm2_sq(r) + mu * norm1(x);
}

SolveReport solve_cmn_alm(const Problem& problem, const SolverConfig& config, const IterateObserver& observer) {
    problem.validate();
    config.validate();

    SolveReport report;
    report.lambda0 = resolve_lambda0(problem, config, &report.warnings);
    SolverState state = initial_state(problem, config);
    report.mu_init = state.mu;
    report.history.reserve(static_cast<std::size_t>(config.max_iter));

    RealVector ax = matvec(problem.a, state.x);
    for (int k = 0; k < config.max_iter; ++k) {
        SolverState next;
        next.mu = state.mu;
        next.k = k + 1;
        next.z = z_step(admm_argument(ax, problem, state.eta, config.sigma), state.z, config);
        next.x = x_steps(state.x, ax, next.z, state.eta, state.mu, problem, config, report.lambda0);

        RealVector ax_next = matvec(problem.a, next.x);
        RealVector primal(ax_next.size());
        next.eta = state.eta;
        for (std::size_t i = 0; i < primal.size(); ++i) {
            primal[i] = (ax_next[i] - problem.y[i]) / problem.sigma_n - next.z[i];
            next.eta[i] += config.sigma * primal[i];
        }
        RealVector dz(next.z.size());
        for (std::size_t i = 0; i < dz.size(); ++i) dz[i] = next.z[i] - state.z[i];

        IterationRecord rec;
        rec.primal = norm2(primal);
        rec.dual = config.sigma / problem.sigma_n * norm2(matvec_transposed(problem.a, dz));
        rec.mu = state.mu;
        {
            RealVector r(ax_next.size());
            for (std::size_t i = 0; i < r.size(); ++i) r[i] = (ax_next[i] - problem.y[i]) / problem.sigma_n;
            rec.objective = cmn_value(r, config.cmn) + state.mu * norm1(next.x);
        }

        if (!all_finite(next.x) || !all_finite(next.z) || !all_finite(next.eta) || !std::isfinite(rec.objective)) {
            throw SolverError("non-finite iterate at iteration " + std::to_string(k + 1), k + 1);
        }
        report.history.push_back(rec);
        if (observer) observer(state, next);

        state = std::move(next);
        ax = std::move(ax_next);
        state.mu = std::max(config.zeta * state.mu, config.mu_min);
        if (rec.primal <= config.tol && rec.dual <= config.tol) {
            report.converged = true;
            break;
        }
    }
    report.iterations = static_cast<int>(report.history.size());
    report.x_hat = std::move(state.x);
    return report;
}

SolverConfig lp_config(double p, const SolverConfig& config) {
    if (!(p > 0.0 && p <= 2.0)) throw std::invalid_argument("solve_lp_admm: p must be in (0, 2]");
    SolverConfig cfg = config;
    cfg.cmn.p_s = p;
    cfg.cmn.p_f = p;
    cfg.cmn.q = p <= 1.0 ? 1.0 : 2.0;
    return cfg;
}

SolveReport solve_lp_admm(const Problem& problem, double p, const SolverConfig& config,
                          const IterateObserver& observer) {
    return solve_cmn_alm(problem, lp_config(p, config), observer);
}

} // namespace cmnalm
