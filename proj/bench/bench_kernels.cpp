#include <random>

#include <benchmark/benchmark.h>

#include "cmnalm/experiments.hpp"
#include "cmnalm/linalg.hpp"

namespace {

using namespace cmnalm;

DenseMatrix random_matrix(std::size_t m, std::size_t n) {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> g;
    std::vector<double> e(m * n);
    for (auto& v : e) v = g(rng);
    return DenseMatrix(m, n, std::move(e));
}

RealVector random_vector(std::size_t n) {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> g;
    RealVector v(n);
    for (auto& x : v) x = g(rng);
    return v;
}

void BM_matvec_serial(benchmark::State& st) {
    const auto n = static_cast<std::size_t>(st.range(0));
    const auto a = random_matrix(n / 2, n);
    const auto x = random_vector(n);
    RealVector out(n / 2);
    for (auto _ : st) {
        serial::matvec(a, x, out);
        benchmark::DoNotOptimize(out.data());
    }
    st.SetItemsProcessed(st.iterations() * static_cast<long>(a.rows() * a.cols()));
}

void BM_matvec_omp(benchmark::State& st) {
    const auto n = static_cast<std::size_t>(st.range(0));
    const auto a = random_matrix(n / 2, n);
    const auto x = random_vector(n);
    RealVector out(n / 2);
    for (auto _ : st) {
        matvec(a, x, out);
        benchmark::DoNotOptimize(out.data());
    }
    st.SetItemsProcessed(st.iterations() * static_cast<long>(a.rows() * a.cols()));
}

void BM_matvec_t_serial(benchmark::State& st) {
    const auto n = static_cast<std::size_t>(st.range(0));
    const auto a = random_matrix(n / 2, n);
    const auto v = random_vector(n / 2);
    RealVector out(n);
    for (auto _ : st) {
        serial::matvec_transposed(a, v, out);
        benchmark::DoNotOptimize(out.data());
    }
    st.SetItemsProcessed(st.iterations() * static_cast<long>(a.rows() * a.cols()));
}

void BM_matvec_t_omp(benchmark::State& st) {
    const auto n = static_cast<std::size_t>(st.range(0));
    const auto a = random_matrix(n / 2, n);
    const auto v = random_vector(n / 2);
    RealVector out(n);
    for (auto _ : st) {
        matvec_transposed(a, v, out);
        benchmark::DoNotOptimize(out.data());
    }
    st.SetItemsProcessed(st.iterations() * static_cast<long>(a.rows() * a.cols()));
}

// One preference experiment with a small trial count; range(0) is the worker count.
void BM_trials(benchmark::State& st) {
    auto cfg = default_preference_config();
    cfg.trials = 8;
    cfg.grid = {0.5, 1.0, 1.5};
    cfg.workers = static_cast<int>(st.range(0));
    for (auto _ : st) {
        auto r = run_experiment(cfg);
        benchmark::DoNotOptimize(r.rows.data());
    }
}

} // namespace

BENCHMARK(BM_matvec_serial)->Arg(128)->Arg(512)->Arg(2048)->Arg(4096);
BENCHMARK(BM_matvec_omp)->Arg(128)->Arg(512)->Arg(2048)->Arg(4096);
BENCHMARK(BM_matvec_t_serial)->Arg(128)->Arg(512)->Arg(2048)->Arg(4096);
BENCHMARK(BM_matvec_t_omp)->Arg(128)->Arg(512)->Arg(2048)->Arg(4096);
BENCHMARK(BM_trials)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
