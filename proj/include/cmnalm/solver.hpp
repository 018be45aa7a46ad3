#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cmnalm/cmn.hpp"
#include "cmnalm/linalg.hpp"

namespace cmnalm {

// y = A x + n, observed with noise scale sigma_n.
struct Problem {
    DenseMatrix a;
    RealVector y;
    double sigma_n = 1.0;

    void validate() const;
};

enum class LambdaPolicy {
    auto_raise, // bump λ0 to 1.01‖A‖²/σ_n² (with a warning) when it is too small
    warn,       // keep the given λ0, record a warning
};

struct SolverConfig {
    CmnParams cmn;
    double sigma = 1.0;            // augmented Lagrangian penalty
    std::optional<double> mu_init; // empty: ξ ‖Aᵀy‖_∞ / σ_n²
    double xi = 0.1;
    double mu_min = 0.5;
    double zeta = 0.95;            // continuation factor μ ← max(ζμ, μ_min)
    std::optional<double> lambda0; // empty: 1.01 ‖A‖² / σ_n²
    LambdaPolicy lambda_policy = LambdaPolicy::auto_raise;
    double tol = 1e-5;
    int max_iter = 100;
    int inner_iters = 1;           // MM steps per z- and x-update

    void validate() const;
};

struct SolverState {
    RealVector x;
    RealVector z;
    RealVector eta;
    double mu = 0.0;
    int k = 0;
};

struct IterationRecord {
    double primal = 0.0;
    double dual = 0.0;
    double objective = 0.0; // ε-regularized ℓ((Ax − y)/σ_n) + μ‖x‖₁
    double mu = 0.0;
};

struct SolveReport {
    RealVector x_hat;
    int iterations = 0;
    bool converged = false;
    std::vector<IterationRecord> history;
    double lambda0 = 0.0;
    double mu_init = 0.0;
    std::vector<std::string> warnings;
};

// Raised when an iterate stops being finite.
class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, int iteration)
        : std::runtime_error(what), iteration_(iteration) {}
    int iteration() const noexcept { return iteration_; }

private:
    int iteration_;
};

struct Residuals {
    double primal = 0.0;
    double dual = 0.0;
};

/// Called once per outer iteration with the state before and after the
/// z/x/η updates. Both carry the μ used by that iteration's x-update.
using IterateObserver = std::function<void(const SolverState& before, const SolverState& after)>;

/// (Ax − y)/σ_n
RealVector scaled_residual(const Problem& problem, std::span<const double> x);

/// Initial state: x = 0, z = −y/σ_n, η = 0, μ = resolved μ_init.
SolverState initial_state(const Problem& problem, const SolverConfig& config);

double resolve_mu_init(const Problem& problem, const SolverConfig& config);
double resolve_lambda0(const Problem& problem, const SolverConfig& config,
                       std::vector<std::string>* warnings = nullptr);

// Single ADMM steps. The z-updates use the weights φ(|z^k| + ε).
RealVector z_update_q1(const SolverState& state, const Problem& problem, const SolverConfig& config);
RealVector z_update_q2(const SolverState& state, const Problem& problem, const SolverConfig& config);
RealVector x_update(const SolverState& state, std::span<const double> z_new, const Problem& problem,
                    const SolverConfig& config, double lambda0);
RealVector eta_update(const SolverState& state, std::span<const double> z_new, std::span<const double> x_new,
                      const Problem& problem, const SolverConfig& config);

/// primal = ‖(Ax⁺ − y)/σ_n − z⁺‖₂, dual = (σ/σ_n)‖Aᵀ(z⁺ − z)‖₂.
Residuals residuals(const SolverState& prev, const SolverState& next, const Problem& problem,
                    const SolverConfig& config);

/// Σ|z_i|^q φ(|z_ref,i| + ε) + (σ/2)‖v − z‖², the function each z-update minimizes
/// (the constant ψ terms are dropped).
double z_subproblem_objective(std::span<const double> z, std::span<const double> z_ref,
                              std::span<const double> v, const SolverConfig& config);

/// (σ/2)‖(Ax − y)/σ_n − z + η/σ‖² + μ‖x‖₁
double x_subproblem_objective(std::span<const double> x, std::span<const double> z_new,
                              std::span<const double> eta, double mu, const Problem& problem,
                              const SolverConfig& config);

SolveReport solve_cmn_alm(const Problem& problem, const SolverConfig& config,
                          const IterateObserver& observer = {});

/// ℓp-ℓ1 baseline: the degenerate mixed norm p_s = p_f = p, q = 1 for p ≤ 1, else q = 2.
SolveReport solve_lp_admm(const Problem& problem, double p, const SolverConfig& config,
                          const IterateObserver& observer = {});

/// The configuration solve_lp_admm actually runs.
SolverConfig lp_config(double p, const SolverConfig& config);

} // namespace cmnalm
