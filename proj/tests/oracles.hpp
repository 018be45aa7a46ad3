#pragma once

// Reference implementations used only by the tests. They go through
// numerical quadrature or brute force on purpose, sharing no code with the
// library's closed forms.

#include <algorithm>
#include <array>
#include <limits>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "cmnalm/cmn.hpp"
#include "cmnalm/linalg.hpp"

namespace oracle {

// Adaptive tanh-sinh quadrature; throws when the error estimate exceeds
// `abs_tol` scaled by max(1, |value|).
template <class F>
double integrate(F f, double a, double b, double abs_tol = 1e-12) {
    static boost::math::quadrature::tanh_sinh<double> rule;
    double err = 0.0;
    const double v = rule.integrate(f, a, b, 1e-14, &err);
    if (!(err <= abs_tol * std::max(1.0, std::abs(v)))) throw std::runtime_error("oracle quadrature did not converge");
    return v;
}

// Same over [a, ∞).
template <class F>
double integrate_to_infinity(F f, double a, double abs_tol = 1e-12) {
    static boost::math::quadrature::exp_sinh<double> rule;
    double err = 0.0;
    const double v = rule.integrate([&](double t) { return f(a + t); }, 0.0, std::numeric_limits<double>::infinity(),
                                    1e-14, &err);
    if (!(err <= abs_tol * std::max(1.0, std::abs(v)))) throw std::runtime_error("oracle quadrature did not converge");
    return v;
}

// (1/(p_f − p_s)) ∫ (p/q) u^{p−q} dp, or the pointwise limit when the range is empty.
inline double phi(double u, const cmnalm::CmnParams& pr) {
    if (pr.p_f == pr.p_s) return pr.p_s / pr.q * std::pow(u, pr.p_s - pr.q);
    const double I = integrate([&](double p) { return p / pr.q * std::pow(u, p - pr.q); }, pr.p_s, pr.p_f);
    return I / (pr.p_f - pr.p_s);
}

// (1/(p_f − p_s)) ∫ u^p dp at u = |v| + eps.
inline double cmn_element(double v, const cmnalm::CmnParams& pr) {
    const double u = std::abs(v) + pr.eps;
    if (pr.p_f == pr.p_s) return std::pow(u, pr.p_s);
    return integrate([&](double p) { return std::pow(u, p); }, pr.p_s, pr.p_f) / (pr.p_f - pr.p_s);
}

// Eigenvalues of a symmetric 3×3 matrix from the roots of its characteristic
// cubic (trigonometric form), largest first.
inline std::array<double, 3> sym3_eigenvalues(const std::array<double, 9>& m) {
    const double a = m[0], b = m[4], c = m[8];
    const double d = m[1], e = m[5], f = m[2];
    const double p1 = d * d + e * e + f * f;
    const double tr = (a + b + c) / 3.0;
    const double p2 = (a - tr) * (a - tr) + (b - tr) * (b - tr) + (c - tr) * (c - tr) + 2.0 * p1;
    const double p = std::sqrt(p2 / 6.0);
    if (p == 0.0) return {a, b, c};
    const double b00 = (a - tr) / p, b11 = (b - tr) / p, b22 = (c - tr) / p;
    const double b01 = d / p, b12 = e / p, b02 = f / p;
    const double det = b00 * (b11 * b22 - b12 * b12) - b01 * (b01 * b22 - b12 * b02) + b02 * (b01 * b12 - b11 * b02);
    const double r = std::clamp(det / 2.0, -1.0, 1.0);
    const double phi = std::acos(r) / 3.0;
    const double e1 = tr + 2.0 * p * std::cos(phi);
    const double e3 = tr + 2.0 * p * std::cos(phi + 2.0 * std::numbers::pi / 3.0);
    return {e1, 3.0 * tr - e1 - e3, e3};
}

inline cmnalm::DenseMatrix random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng, double scale = 1.0) {
    std::normal_distribution<double> nd(0.0, scale);
    std::vector<double> e(rows * cols);
    for (auto& v : e) v = nd(rng);
    return cmnalm::DenseMatrix(rows, cols, std::move(e));
}

inline std::vector<double> random_vector(std::size_t n, std::mt19937_64& rng, double scale = 1.0) {
    std::normal_distribution<double> nd(0.0, scale);
    std::vector<double> v(n);
    for (auto& x : v) x = nd(rng);
    return v;
}

// Plain loops, no kernels shared with the library.
inline std::vector<double> mul(const cmnalm::DenseMatrix& a, const std::vector<double>& x) {
    std::vector<double> out(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out[i] += a(i, j) * x[j];
    return out;
}

inline std::vector<double> mul_t(const cmnalm::DenseMatrix& a, const std::vector<double>& v) {
    std::vector<double> out(a.cols(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out[j] += a(i, j) * v[i];
    return out;
}

inline double rel_diff(double a, double b) {
    return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

} // namespace oracle
