// Micro-benchmarks for the hot paths: scalar tail functions, the
// peak-amplitude equation solve, PMEPR evaluation, and the output-entropy
// quadrature behind the capacity solver.

#include "peakbound/papr_converse.hpp"
#include "peakbound/philox.hpp"
#include "peakbound/ofdm_pmepr.hpp"
#include "peakbound/smith_capacity.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

using namespace peakbound;

static void BM_QFunction(benchmark::State& state) {
    double x = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(q_function(x));
        x = x < 30.0 ? x + 1e-3 : 0.0;
    }
}
BENCHMARK(BM_QFunction);

static void BM_QInverse(benchmark::State& state) {
    double p = 1e-12;
    for (auto _ : state) {
        benchmark::DoNotOptimize(q_inverse(p));
        p = p < 0.4 ? p * 1.001 : 1e-12;
    }
}
BENCHMARK(BM_QInverse);

static void BM_MinPeakAmplitude(benchmark::State& state) {
    double log_M = rate_fraction_to_log_M_nats(10000, 100.0, 0.99);
    for (auto _ : state)
        benchmark::DoNotOptimize(min_peak_amplitude(10000, log_M, 1e-3, 100.0));
}
BENCHMARK(BM_MinPeakAmplitude);

static void BM_Pmepr(benchmark::State& state) {
    Philox rng(1, 0);
    ComplexCodeword x(static_cast<size_t>(state.range(0)));
    for (auto& v : x) v = {rng.next_normal(), rng.next_normal()};
    for (auto _ : state) benchmark::DoNotOptimize(pmepr(x, 16));
}
BENCHMARK(BM_Pmepr)->Arg(64)->Arg(256)->Arg(1024);

static void BM_MutualInfoTwoPoint(benchmark::State& state) {
    std::vector<double> s{-1.0, 1.0}, p{0.5, 0.5};
    for (auto _ : state) benchmark::DoNotOptimize(mutual_info_discrete_awgn(s, p));
}
BENCHMARK(BM_MutualInfoTwoPoint);

BENCHMARK_MAIN();
