#include <doctest.h>

#include <numbers>

#include "cmnalm/cmn.hpp"
#include "oracles.hpp"

using namespace cmnalm;

namespace {

const CmnParams kRanges[] = {
    {0.0, 1.0, 1.0, 0.0},
    {0.0, 1.0, 2.0, 0.0},
    {0.0, 2.0, 2.0, 0.0},
    {0.3, 1.7, 2.0, 0.0},
};

} // namespace

TEST_CASE("params validation") {
    CHECK_NOTHROW((CmnParams{0, 1, 1, 1e-2}.validate()));
    CHECK_THROWS((CmnParams{1.2, 1, 2, 0}.validate()));
    CHECK_THROWS((CmnParams{0, 1.5, 1, 0}.validate()));
    CHECK_THROWS((CmnParams{0, 2.5, 3, 0}.validate()));
    CHECK_THROWS((CmnParams{0, 1, 1, -1}.validate()));
}

TEST_CASE("phi weight examples") {
    const double e = std::numbers::e;
    CHECK(phi_weight(e, {0, 2, 2, 0}) == doctest::Approx((e * e + 1) / (4 * e * e)).epsilon(1e-12));
    CHECK(phi_weight(e, {0, 2, 2, 0}) == doctest::Approx(0.283833).epsilon(1e-6));
    CHECK(phi_weight(1.0, {0, 1, 1, 0}) == doctest::Approx(0.5).epsilon(1e-15));
    for (double z : {1e-3, 0.5, 1.0, 7.0, 1e3}) {
        CHECK(phi_weight(z, {1, 1, 1, 0}) == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(phi_weight(z, {2, 2, 2, 0}) == doctest::Approx(1.0).epsilon(1e-15));
    }
    // eps shifts the magnitude
    CHECK(phi_weight(e - 0.01, {0, 2, 2, 0.01}) == doctest::Approx(phi_weight(e, {0, 2, 2, 0})).epsilon(1e-14));
}

TEST_CASE("phi weight at z' = 1 equals the mean exponent over q") {
    for (const auto& pr : kRanges) CHECK(phi_weight(1.0, pr) == doctest::Approx((pr.p_s + pr.p_f) / (2 * pr.q)).epsilon(1e-14));
}

TEST_CASE("phi weight matches the quadrature oracle") {
    for (const auto& pr : kRanges) {
        for (double lz = -3.0; lz <= 3.0; lz += 0.25) {
            const double z = std::pow(10.0, lz);
            CHECK(oracle::rel_diff(phi_weight(z, pr), oracle::phi(z, pr)) <= 1e-8);
        }
        for (double d : {1e-12, 1e-9, 1e-7, 1e-6, 1e-4, 1e-2}) {
            CHECK(oracle::rel_diff(phi_weight(1.0 + d, pr), oracle::phi(1.0 + d, pr)) <= 1e-8);
            CHECK(oracle::rel_diff(phi_weight(1.0 - d, pr), oracle::phi(1.0 - d, pr)) <= 1e-8);
        }
    }
}

TEST_CASE("phi weight approaches the pointwise weight as the range shrinks") {
    for (double w : {1e-3, 1e-6, 1e-10, 1e-14}) {
        const CmnParams pr{0.7, 0.7 + w, 2.0, 0.0};
        for (double z : {0.01, 0.9, 3.0, 200.0}) {
            const double limit = 0.7 / 2.0 * std::pow(z, 0.7 - 2.0);
            CHECK(oracle::rel_diff(phi_weight(z, pr), limit) <= w * (1.0 / 0.7 + std::abs(std::log(z))) + 1e-13);
        }
    }
}

TEST_CASE("phi weight is continuous across z' = 1") {
    for (const auto& pr : kRanges) {
        const double at = phi_weight(1.0, pr);
        CHECK(std::abs(phi_weight(1.0 + 1e-7, pr) - at) <= 1e-5);
        CHECK(std::abs(phi_weight(1.0 - 1e-7, pr) - at) <= 1e-5);
    }
}

TEST_CASE("phi weight is positive and grows with p_f above z' = 1") {
    for (const auto& pr : kRanges)
        for (double lz = -3.0; lz <= 3.0; lz += 0.5) CHECK(phi_weight(std::pow(10.0, lz), pr) > 0.0);
    for (double z : {1.5, 10.0, 1e3}) {
        double prev = 0.0;
        for (double pf = 0.2; pf <= 2.0; pf += 0.2) {
            const double w = phi_weight(z, {0.0, pf, 2.0, 0.0});
            CHECK(w > prev);
            prev = w;
        }
    }
}

TEST_CASE("phi weight singular point") {
    CHECK_THROWS_AS(phi_weight(0.0, {0, 1, 1, 0}), SingularityError);
    CHECK_THROWS_AS(phi_weight(0.0, {0.5, 1, 1, 0}), SingularityError);
    CHECK_NOTHROW(phi_weight(0.0, {0, 1, 1, 1e-2}));
    CHECK_THROWS_AS(phi_weight(-1.0, {0, 1, 1, 0}), std::invalid_argument);
}

TEST_CASE("cmn value examples") {
    const double e = std::numbers::e;
    CHECK(cmn_value(RealVector{e}, {0, 1, 1, 0}) == doctest::Approx(e - 1.0).epsilon(1e-14));
    const RealVector ones{1.0, -1.0, 1.0, -1.0, 1.0};
    for (const auto& pr : kRanges) CHECK(cmn_value(ones, pr) == doctest::Approx(5.0).epsilon(1e-14));
    const RealVector v{0.3, -2.0, 5.0};
    for (double p : {0.5, 1.0, 1.5, 2.0}) {
        double ref = 0.0;
        for (double x : v) ref += std::pow(std::abs(x), p);
        CHECK(cmn_value(v, {p, p, 2.0, 0.0}) == doctest::Approx(ref).epsilon(1e-14));
    }
}

TEST_CASE("cmn value matches the quadrature oracle") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> lz(-3.0, 3.0);
    for (const auto& base : kRanges) {
        for (double eps : {0.0, 1e-2}) {
            CmnParams pr = base;
            pr.eps = eps;
            for (int t = 0; t < 50; ++t) {
                const double v = std::pow(10.0, lz(rng)) * (t % 2 ? -1.0 : 1.0);
                CHECK(oracle::rel_diff(cmn_element(v, pr), oracle::cmn_element(v, pr)) <= 1e-10);
            }
        }
    }
}

TEST_CASE("cmn value at zero and evenness") {
    const RealVector zero(4, 0.0);
    CHECK(cmn_value(zero, {0.5, 1.0, 1.0, 0.0}) == 0.0);
    CHECK(cmn_value(zero, {0.0, 1.0, 1.0, 0.0}) == 0.0);
    std::mt19937_64 rng(8);
    const auto v = oracle::random_vector(10, rng);
    RealVector neg(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) neg[i] = -v[i];
    for (const auto& pr : kRanges) CHECK(cmn_value(v, pr) == cmn_value(neg, pr));
}

TEST_CASE("surrogate is tangent and majorizes") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> lz(-3.0, 2.0);
    for (const auto& base : kRanges) {
        for (double eps : {0.0, 1e-2}) {
            CmnParams pr = base;
            pr.eps = eps;
            for (int t = 0; t < 2000; ++t) {
                const RealVector z{std::pow(10.0, lz(rng)) * (t % 3 ? 1.0 : -1.0)};
                const RealVector zr{std::pow(10.0, lz(rng))};
                const double f = cmn_value(z, pr);
                CHECK(surrogate_value(z, zr, pr) - f >= -1e-12 * std::max(1.0, f));
                CHECK(std::abs(surrogate_value(z, z, pr) - f) <= 1e-12 * std::max(1.0, f));
            }
        }
    }
}

TEST_CASE("surrogate with p_s = p_f = q = 1 is the l1 norm") {
    const RealVector z{1.5, -0.2, 0.0, 4.0};
    const RealVector zr{0.1, 9.0, -3.0, 0.5};
    CHECK(surrogate_value(z, zr, {1, 1, 1, 0}) == doctest::Approx(5.7).epsilon(1e-14));
    CHECK_THROWS_AS(surrogate_value(z, RealVector{1.0}, {1, 1, 1, 0}), DimensionError);
}
