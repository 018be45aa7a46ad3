#pragma once

#include <span>
#include <stdexcept>

#include "cmnalm/linalg.hpp"

namespace cmnalm {

// Continuous mixed norm ℓ(v) = Σ_i ∫_{p_s}^{p_f} λ(p) |v_i|^p dp with λ uniform
// on [p_s, p_f], together with the quadratic/absolute majorizer used by the
// z-update. When eps > 0 every magnitude is shifted to |v_i| + eps.
struct CmnParams {
    double p_s = 0.0;
    double p_f = 1.0;
    double q = 1.0;
    double eps = 1e-2;

    // 0 ≤ p_s ≤ p_f ≤ q, p_f ≤ 2, q > 0, eps ≥ 0. Throws std::invalid_argument.
    void validate() const;
    bool degenerate() const noexcept { return p_f - p_s < 1e-9; }
};

class SingularityError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Majorizer weight φ(|z| + eps) = (1/(p_f − p_s)) ∫ (p/q) |z'|^{p−q} dp.
/// Finite and positive for |z| + eps > 0; throws SingularityError at 0.
double phi_weight(double z_abs, const CmnParams& params);

/// Same as phi_weight but evaluated at the already-shifted magnitude u.
double phi_at(double u, const CmnParams& params);

/// Per-coordinate CMN value (1/(p_f − p_s)) ∫ u^p dp at u = |v| + eps.
double cmn_element(double v, const CmnParams& params);

double cmn_value(std::span<const double> v, const CmnParams& params);

/// Weights φ(|z_i| + eps) for every coordinate.
RealVector phi_weights(std::span<const double> z, const CmnParams& params);

/// ℓ_S(z, z_ref) = Σ_i u_i^q φ(u'_i) + ψ(u'_i) with u = |z| + eps, u' = |z_ref| + eps
/// and ψ chosen so that ℓ_S(z, z) = ℓ(z). Majorizes cmn_value for every z.
double surrogate_value(std::span<const double> z, std::span<const double> z_ref, const CmnParams& params);

} // namespace cmnalm
