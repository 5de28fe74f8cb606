#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "wavebif/bifurcation.hpp"
#include "wavebif/linear_operator.hpp"
#include "wavebif/range_solver.hpp"
#include "wavebif/sampling.hpp"

namespace {

using namespace wavebif;

ModelParams model() { return ModelParams::make(1, parse_mass("sqrt2")); }

void BM_OddPower(benchmark::State& state) {
    ModelParams P = model();
    P.product.backend = static_cast<ProductBackend>(state.range(0));
    std::mt19937_64 rng(1);
    SampleSpec spec;
    spec.max_n = 8;
    spec.max_k = 8;
    spec.decay = 3.0;
    const SpectralField f = random_field(rng, spec);
    ProductOptions opts = P.product;
    for (auto _ : state) benchmark::DoNotOptimize(odd_power(f, 3, opts));
}
BENCHMARK(BM_OddPower)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_ApplyA(benchmark::State& state) {
    const ModelParams P = model();
    const double rho = 1e-2, w = P.omega1();
    const SpectralField v = solve_range(rho, w, leading_alpha(rho, w, P), P).v;
    for (auto _ : state) benchmark::DoNotOptimize(apply_A(v, rho, w, leading_alpha(rho, w, P), P));
}
BENCHMARK(BM_ApplyA)->Unit(benchmark::kMillisecond);

void BM_SolveRange(benchmark::State& state) {
    const ModelParams P = model();
    const double rho = 1e-2, w = P.omega1();
    for (auto _ : state) benchmark::DoNotOptimize(solve_range(rho, w, leading_alpha(rho, w, P), P));
}
BENCHMARK(BM_SolveRange)->Unit(benchmark::kMillisecond);

void BM_SolvePoint(benchmark::State& state) {
    ModelParams P = model();
    P.trunc = {static_cast<int>(state.range(0)), static_cast<int>(state.range(0))};
    for (auto _ : state) benchmark::DoNotOptimize(solve_point(1e-2, P));
}
BENCHMARK(BM_SolvePoint)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_KernelScan(benchmark::State& state) {
    const double m = parse_mass("sqrt2").value;
    for (auto _ : state) benchmark::DoNotOptimize(kernel_scan(m, std::sqrt(1 + m), static_cast<int>(state.range(0))));
}
BENCHMARK(BM_KernelScan)->Arg(100)->Arg(500)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
