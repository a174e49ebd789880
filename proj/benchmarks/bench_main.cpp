#include <benchmark/benchmark.h>

#include <cmath>

#include "thfield/covariance.hpp"
#include "thfield/kernels.hpp"
#include "thfield/simulate.hpp"
#include "thfield/specfun.hpp"
#include "thfield/tfcalc.hpp"

using namespace thfield;

namespace {

void BM_BesselK(benchmark::State& state) {
    const double nu = 0.35;
    double x = 0.011;
    for (auto _ : state) {
        benchmark::DoNotOptimize(bessel_k(nu, x));
        x = (x < 40.0) ? x * 1.37 : 0.011;
    }
}
BENCHMARK(BM_BesselK);

void BM_Covariance(benchmark::State& state) {
    const FieldParams p{static_cast<int>(state.range(0)), 0.75, 0.75, 1.0, 1.0};
    for (auto _ : state)
        benchmark::DoNotOptimize(covariance(p, {{1.0, 1.0}, {0.7, 1.3}}));
}
BENCHMARK(BM_Covariance)->Arg(1)->Arg(2);

void BM_KernelNormSq(benchmark::State& state) {
    const FieldParams p{static_cast<int>(state.range(0)), 0.75, 0.75, 1.0, 1.0};
    for (auto _ : state)
        benchmark::DoNotOptimize(kernel_l2_norm_sq(p, 1.0, 1.0));
}
BENCHMARK(BM_KernelNormSq)->Arg(1)->Arg(2);

void BM_FracIntegralFourier(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Grid2D g{-8.0, -8.0, 16.0 / n, 16.0 / n, n, n};
    const Field2D f = tabulate(g, [](double x, double y) { return std::exp(-(x * x + y * y)); });
    const FracOrder o{0.3, 0.3, 1.0, 1.0};
    for (auto _ : state)
        benchmark::DoNotOptimize(frac_integral_fourier(o, Side::plus, f));
}
BENCHMARK(BM_FracIntegralFourier)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_FracIntegralTime(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Grid2D g{-8.0, -8.0, 16.0 / n, 16.0 / n, n, n};
    const Field2D f = tabulate(g, [](double x, double y) { return std::exp(-(x * x + y * y)); });
    const FracOrder o{0.3, 0.3, 1.0, 1.0};
    for (auto _ : state)
        benchmark::DoNotOptimize(frac_integral(o, Side::plus, f));
}
BENCHMARK(BM_FracIntegralTime)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_CholeskySample(benchmark::State& state) {
    const FieldParams p{1, 0.7, 0.7, 1.0, 1.0};
    const Grid2D anchors{0.25, 0.25, 0.25, 0.25, 8, 8};
    const Order1CholeskySampler sampler(p, anchors);
    std::uint64_t s = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(sampler.sample({1, s++}));
}
BENCHMARK(BM_CholeskySample);

void BM_MovingAverageK2(benchmark::State& state) {
    const FieldParams p{2, 0.75, 0.75, 1.0, 1.0};
    const Grid2D anchors{1.0, 1.0, 1.0, 1.0, 1, 1};
    const Grid2D ng{1.0 - 64 * 0.125, 1.0 - 64 * 0.125, 0.125, 0.125, 64, 64};
    std::vector<int> ba, bb;
    const TimeQuadrature q = quadrature_for_anchors(p, anchors, ng, &ba, &bb);
    const MovingAverageScheme scheme(p, q, ng);
    std::uint64_t s = 0;
    for (auto _ : state) {
        const NoiseGrid noise = make_noise_grid(ng, {2, s++});
        benchmark::DoNotOptimize(scheme.field_node_major(noise, ba, bb));
    }
}
BENCHMARK(BM_MovingAverageK2)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
