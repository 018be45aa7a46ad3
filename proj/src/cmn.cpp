#include "cmnalm/cmn.hpp"

#include <cmath>
#include <string>

namespace cmnalm {

namespace {

// Below this |s| = |(p_f − p_s)/2 · ln u| the closed forms lose digits to
// cancellation; the midpoint series is used instead.
constexpr double kSeriesLimit = 0.5;

// sinh(s)/s
double sinhc(double s) {
    const double s2 = s * s;
    double term = 1.0, sum = 1.0;
    for (int j = 1; j < 30; ++j) {
        term *= s2 / ((2.0 * j) * (2.0 * j + 1.0));
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
}

// (s cosh s − sinh s)/s² = Σ_{j≥1} 2j s^{2j−1}/(2j+1)!
double sinh_moment(double s) {
    const double s2 = s * s;
    double pow_over_fact = s / 6.0; // s^{2j−1}/(2j+1)! at j = 1
    double sum = 2.0 * pow_over_fact;
    for (int j = 2; j < 30; ++j) {
        pow_over_fact *= s2 / ((2.0 * j) * (2.0 * j + 1.0));
        const double term = 2.0 * j * pow_over_fact;
        sum += term;
        if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
    }
    return sum;
}

} // namespace

void CmnParams::validate() const {
    if (!(p_s >= 0.0 && p_s <= p_f && p_f <= q && p_f <= 2.0 && q > 0.0) || !std::isfinite(q)) {
        throw std::invalid_argument("CmnParams: need 0 <= p_s <= p_f <= q, p_f <= 2 (got p_s=" +
                                    std::to_string(p_s) + ", p_f=" + std::to_string(p_f) +
                                    ", q=" + std::to_string(q) + ")");
    }
    if (!(eps >= 0.0) || !std::isfinite(eps)) throw std::invalid_argument("CmnParams: eps must be >= 0");
}

double phi_at(double u, const CmnParams& pr) {
    if (!(u > 0.0)) {
        throw SingularityError("phi_weight: weight is singular at |z| + eps = 0 (use eps > 0)");
    }
    if (std::isinf(u)) return 0.0;
    const double ln_u = std::log(u);
    const double half = 0.5 * (pr.p_f - pr.p_s);
    const double mid = 0.5 * (pr.p_f + pr.p_s);
    const double s = half * ln_u;
    if (std::abs(s) < kSeriesLimit) {
        // ∫_{c−h}^{c+h} p e^{(p−q)L} dp / (2h q) = e^{(c−q)L}/q · [c sinhc(s) + h moment(s)]
        return std::exp((mid - pr.q) * ln_u) / pr.q * (mid * sinhc(s) + half * sinh_moment(s));
    }
    const double hi = std::exp((pr.p_f - pr.q) * ln_u) * (pr.p_f * ln_u - 1.0);
    const double lo = std::exp((pr.p_s - pr.q) * ln_u) * (pr.p_s * ln_u - 1.0);
    return (hi - lo) / ((pr.p_f - pr.p_s) * pr.q * ln_u * ln_u);
}

double phi_weight(double z_abs, const CmnParams& params) {
    if (!(z_abs >= 0.0)) throw std::invalid_argument("phi_weight: magnitude must be >= 0");
    return phi_at(z_abs + params.eps, params);
}

double cmn_element(double v, const CmnParams& pr) {
    const double u = std::abs(v) + pr.eps;
    // p = 0 is a measure-zero point of the integral, so u = 0 contributes 0.
    if (u == 0.0) return 0.0;
    if (std::isinf(u)) return u;
    const double ln_u = std::log(u);
    const double half = 0.5 * (pr.p_f - pr.p_s);
    const double mid = 0.5 * (pr.p_f + pr.p_s);
    const double s = half * ln_u;
    if (std::abs(s) < kSeriesLimit) return std::exp(mid * ln_u) * sinhc(s);
    return (std::exp(pr.p_f * ln_u) - std::exp(pr.p_s * ln_u)) / ((pr.p_f - pr.p_s) * ln_u);
}

double cmn_value(std::span<const double> v, const CmnParams& params) {
    double sum = 0.0;
    for (double x : v) sum += cmn_element(x, params);
    return sum;
}

RealVector phi_weights(std::span<const double> z, const CmnParams& params) {
    RealVector w(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) w[i] = phi_at(std::abs(z[i]) + params.eps, params);
    return w;
}

double surrogate_value(std::span<const double> z, std::span<const double> z_ref, const CmnParams& pr) {
    if (z.size() != z_ref.size()) throw DimensionError("surrogate_value: length mismatch");
    double sum = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        const double u = std::abs(z[i]) + pr.eps;
        const double u_ref = std::abs(z_ref[i]) + pr.eps;
        // ψ + u^q φ written as ℓ(u') + φ (u^q − u'^q) so tangency is exact.
        const double w = phi_at(u_ref, pr);
        sum += cmn_element(z_ref[i], pr) + w * (std::pow(u, pr.q) - std::pow(u_ref, pr.q));
    }
    return sum;
}

} // namespace cmnalm
