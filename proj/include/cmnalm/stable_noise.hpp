#pragma once

#include <cstdint>

#include "cmnalm/linalg.hpp"

namespace cmnalm {

// Symmetric α-stable law S(α, 0, γ, 0).
struct StableNoiseParams {
    double alpha = 1.5;
    double gamma = 1e-3;

    void validate() const;
};

/// i.i.d. SαS draws via the Chambers–Mallows–Stuck transform. Deterministic in seed.
RealVector sample_sas(const StableNoiseParams& params, std::size_t count, std::uint64_t seed);

/// Generalized Gaussian approximation α/(2σ_n Γ(1/α)) · exp(−|x|^α / σ_n^α).
double ggd_pdf(double x, double alpha, double sigma_n);

} // namespace cmnalm
