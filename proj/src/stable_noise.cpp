#include "cmnalm/stable_noise.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

#include "cmnalm/rng.hpp"

namespace cmnalm {

void StableNoiseParams::validate() const {
    if (!(alpha > 0.0 && alpha <= 2.0)) {
        throw std::invalid_argument("StableNoiseParams: alpha must be in (0, 2], got " + std::to_string(alpha));
    }
    if (!(gamma > 0.0) || !std::isfinite(gamma)) {
        throw std::invalid_argument("StableNoiseParams: gamma must be > 0, got " + std::to_string(gamma));
    }
}

RealVector sample_sas(const StableNoiseParams& params, std::size_t count, std::uint64_t seed) {
    params.validate();
    constexpr double half_pi = std::numbers::pi / 2.0;
    auto rng = make_rng(seed);
    std::uniform_real_distribution<double> angle(-half_pi, half_pi);
    std::exponential_distribution<double> expo(1.0);

    const double a = params.alpha;
    const bool cauchy = a == 1.0;
    const double inv_a = 1.0 / a;
    const double tail_exp = (1.0 - a) / a;

    RealVector out(count);
    for (auto& x : out) {
        double v = angle(rng);
        while (v == -half_pi) v = angle(rng);
        if (cauchy) {
            x = params.gamma * std::tan(v);
            continue;
        }
        double w = expo(rng);
        while (w == 0.0) w = expo(rng);
        const double c = std::cos(v);
        x = params.gamma * std::sin(a * v) / std::pow(c, inv_a) * std::pow(std::cos(v - a * v) / w, tail_exp);
    }
    return out;
}

double ggd_pdf(double x, double alpha, double sigma_n) {
    if (!(alpha > 0.0) || !(sigma_n > 0.0)) throw std::invalid_argument("ggd_pdf: alpha and sigma_n must be > 0");
    return alpha / (2.0 * sigma_n * std::tgamma(1.0 / alpha)) * std::exp(-std::pow(std::abs(x) / sigma_n, alpha));
}

} // namespace cmnalm
