#include "cmnalm/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cmnalm/rng.hpp"

namespace cmnalm {

namespace {

// Below this many multiply-adds the fork/join overhead dominates.
constexpr std::size_t kParallelWork = 1u << 15;

void check_matvec(const DenseMatrix& a, std::size_t in, std::size_t in_expect, std::size_t out,
                  std::size_t out_expect) {
    if (in != in_expect || out != out_expect) {
        throw DimensionError("matvec: " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                             " matrix with input length " + std::to_string(in) + " and output length " +
                             std::to_string(out));
    }
}

} // namespace

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (entries_.size() != rows_ * cols_) {
        throw DimensionError("DenseMatrix: expected " + std::to_string(rows_ * cols_) + " entries, got " +
                             std::to_string(entries_.size()));
    }
    if (!all_finite(entries_)) throw std::invalid_argument("DenseMatrix: non-finite entry");
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
    std::vector<double> e(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) e[i * n + i] = 1.0;
    return {n, n, std::move(e)};
}

DenseMatrix DenseMatrix::diagonal(std::span<const double> d) {
    const auto n = d.size();
    std::vector<double> e(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) e[i * n + i] = d[i];
    return {n, n, std::move(e)};
}

DenseMatrix DenseMatrix::scaled(double factor) const {
    std::vector<double> e(entries_);
    for (auto& v : e) v *= factor;
    return {rows_, cols_, std::move(e)};
}

namespace serial {

void matvec(const DenseMatrix& a, std::span<const double> x, std::span<double> out) {
    check_matvec(a, x.size(), a.cols(), out.size(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const auto r = a.row(i);
        double s = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) s += r[j] * x[j];
        out[i] = s;
    }
}

void matvec_transposed(const DenseMatrix& a, std::span<const double> v, std::span<double> out) {
    check_matvec(a, v.size(), a.rows(), out.size(), a.cols());
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const auto r = a.row(i);
        const double vi = v[i];
        for (std::size_t j = 0; j < a.cols(); ++j) out[j] += r[j] * vi;
    }
}

} // namespace serial

void matvec(const DenseMatrix& a, std::span<const double> x, std::span<double> out) {
    check_matvec(a, x.size(), a.cols(), out.size(), a.rows());
    const auto rows = static_cast<std::ptrdiff_t>(a.rows());
    const std::size_t cols = a.cols();
#pragma omp parallel for schedule(static) if (a.rows() * cols >= kParallelWork)
    for (std::ptrdiff_t i = 0; i < rows; ++i) {
        const double* r = a.row(static_cast<std::size_t>(i)).data();
        double s = 0.0;
        for (std::size_t j = 0; j < cols; ++j) s += r[j] * x[j];
        out[static_cast<std::size_t>(i)] = s;
    }
}

RealVector matvec(const DenseMatrix& a, std::span<const double> x) {
    RealVector out(a.rows());
    matvec(a, x, out);
    return out;
}

void matvec_transposed(const DenseMatrix& a, std::span<const double> v, std::span<double> out) {
    check_matvec(a, v.size(), a.rows(), out.size(), a.cols());
    // Each thread owns a block of columns and sweeps the rows in order, so the
    // accumulation order per column matches serial::matvec_transposed.
    constexpr std::ptrdiff_t kBlock = 64;
    const auto cols = static_cast<std::ptrdiff_t>(a.cols());
    const std::size_t rows = a.rows();
    const std::ptrdiff_t blocks = (cols + kBlock - 1) / kBlock;
#pragma omp parallel for schedule(static) if (rows * a.cols() >= kParallelWork)
    for (std::ptrdiff_t b = 0; b < blocks; ++b) {
        const std::ptrdiff_t lo = b * kBlock;
        const std::ptrdiff_t hi = std::min(cols, lo + kBlock);
        for (std::ptrdiff_t j = lo; j < hi; ++j) out[static_cast<std::size_t>(j)] = 0.0;
        for (std::size_t i = 0; i < rows; ++i) {
            const double* r = a.row(i).data();
            const double vi = v[i];
            for (std::ptrdiff_t j = lo; j < hi; ++j) out[static_cast<std::size_t>(j)] += r[j] * vi;
        }
    }
}

RealVector matvec_transposed(const DenseMatrix& a, std::span<const double> v) {
    RealVector out(a.cols());
    matvec_transposed(a, v, out);
    return out;
}

double dot(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw DimensionError("dot: length mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2_sq(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return s;
}

double norm2(std::span<const double> v) {
    // Scaled accumulation so heavy-tailed residuals do not overflow.
    double scale = 0.0;
    for (double x : v) scale = std::max(scale, std::abs(x));
    if (scale == 0.0 || !std::isfinite(scale)) return scale;
    double s = 0.0;
    for (double x : v) {
        const double t = x / scale;
        s += t * t;
    }
    return scale * std::sqrt(s);
}

double norm1(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += std::abs(x);
    return s;
}

double norm_inf(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s = std::max(s, std::abs(x));
    return s;
}

bool all_finite(std::span<const double> v) noexcept {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

RealVector soft_threshold(std::span<const double> v, double t) {
    if (!(t >= 0.0)) throw std::invalid_argument("soft_threshold: negative threshold");
    RealVector out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double mag = std::abs(v[i]) - t;
        out[i] = mag > 0.0 ? std::copysign(mag, v[i]) : 0.0;
    }
    return out;
}

RealVector soft_threshold(std::span<const double> v, std::span<const double> t) {
    if (v.size() != t.size()) throw DimensionError("soft_threshold: threshold length mismatch");
    RealVector out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!(t[i] >= 0.0)) throw std::invalid_argument("soft_threshold: negative threshold");
        const double mag = std::abs(v[i]) - t[i];
        out[i] = mag > 0.0 ? std::copysign(mag, v[i]) : 0.0;
    }
    return out;
}

SpectralEstimate spectral_norm_sq(const DenseMatrix& a, int iters, std::uint64_t seed) {
    if (a.empty()) throw DimensionError("spectral_norm_sq: empty matrix");
    auto rng = make_rng(seed);
    std::normal_distribution<double> normal;
    RealVector v(a.cols());
    for (auto& x : v) x = normal(rng);
    RealVector av(a.rows());

    SpectralEstimate est;
    double prev = 0.0;
    for (int it = 0; it < iters; ++it) {
        const double nv = norm2(v);
        if (nv == 0.0) {
            // Start vector in the null space (or A = 0).
            est.value = 0.0;
            est.stabilized = true;
            return est;
        }
        for (auto& x : v) x /= nv;
        matvec(a, v, av);
        const double rq = norm2_sq(av);
        matvec_transposed(a, av, v);
        est.value = rq;
        est.stabilized = it > 0 && std::abs(rq - prev) <= 1e-6 * std::max(rq, 1e-300);
        prev = rq;
    }
    return est;
}

} // namespace cmnalm
