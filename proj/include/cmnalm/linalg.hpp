#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace cmnalm {

using RealVector = std::vector<double>;

class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Dense row-major matrix. Entries are validated finite on construction and
// the object is immutable afterwards.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

    static DenseMatrix identity(std::size_t n);
    static DenseMatrix diagonal(std::span<const double> d);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

    double operator()(std::size_t i, std::size_t j) const noexcept { return entries_[i * cols_ + j]; }
    std::span<const double> row(std::size_t i) const noexcept {
        return {entries_.data() + i * cols_, cols_};
    }
    std::span<const double> entries() const noexcept { return entries_; }

    DenseMatrix scaled(double factor) const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> entries_;
};

// Matrix-vector kernels. These split work across OpenMP threads once the
// matrix is large enough; summation order per output entry is fixed, so the
// result is bit-identical to the serial reference regardless of thread count.
void matvec(const DenseMatrix& a, std::span<const double> x, std::span<double> out);
RealVector matvec(const DenseMatrix& a, std::span<const double> x);

// out = Aᵀ v
void matvec_transposed(const DenseMatrix& a, std::span<const double> v, std::span<double> out);
RealVector matvec_transposed(const DenseMatrix& a, std::span<const double> v);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> v);
double norm2_sq(std::span<const double> v);
double norm1(std::span<const double> v);
double norm_inf(std::span<const double> v);
bool all_finite(std::span<const double> v) noexcept;

/// Elementwise sign(v)·max(|v| − t, 0).
RealVector soft_threshold(std::span<const double> v, double t);
RealVector soft_threshold(std::span<const double> v, std::span<const double> t);

struct SpectralEstimate {
    double value = 0.0;     // estimate of λ_max(AᵀA) = ‖A‖²
    bool stabilized = false; // relative change of the last step below 1e-6
};

/// Power iteration on AᵀA from a seeded Gaussian start vector.
SpectralEstimate spectral_norm_sq(const DenseMatrix& a, int iters = 100, std::uint64_t seed = 0x5eed);

// Single-threaded reference kernels, kept for tests and benchmarks.
namespace serial {
void matvec(const DenseMatrix& a, std::span<const double> x, std::span<double> out);
void matvec_transposed(const DenseMatrix& a, std::span<const double> v, std::span<double> out);
} // namespace serial

} // namespace cmnalm
