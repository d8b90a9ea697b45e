#include <cmath>

#include <benchmark/benchmark.h>

#include <rbit/rbit.hpp>

namespace {

void BM_NormalQuantile(benchmark::State& state) {
    rbit::BitSource src(1);
    const int p = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(rbit::normal_quantile(rbit::sample_dyadic_uniform(src, p).value()));
}
BENCHMARK(BM_NormalQuantile)->Arg(20)->Arg(52);

void BM_NormalQuantileGrid(benchmark::State& state) {
    rbit::BitSource src(1);
    const int p = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(rbit::normal_quantile(rbit::sample_dyadic_uniform(src, p)));
}
BENCHMARK(BM_NormalQuantileGrid)->Arg(8)->Arg(16)->Arg(63);

void BM_CellSqError(benchmark::State& state) {
    double x = 1.25;
    for (auto _ : state) {
        benchmark::DoNotOptimize(rbit::normal_cell_sq_error(x - 1e-4, x + 1e-4, x));
        x += 1e-9;
    }
}
BENCHMARK(BM_CellSqError);

void BM_SampleBridge(benchmark::State& state) {
    rbit::BitSource src(2);
    const int level = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(rbit::sample_bridge(src, level).coeffs.data());
    state.SetItemsProcessed(state.iterations() * ((int64_t{1} << level) - 1));
}
BENCHMARK(BM_SampleBridge)->Arg(6)->Arg(10)->Arg(14);

void BM_SampleKL(benchmark::State& state) {
    rbit::BitSource src(3);
    const auto spec = rbit::EigenSpec::analytic(2, 0);
    const auto m = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(rbit::sample_kl(src, m, spec).coeffs.data());
}
BENCHMARK(BM_SampleKL)->Arg(64)->Arg(4096);

void BM_MLMCRun(benchmark::State& state) {
    const auto params = rbit::mlmc_params(std::ldexp(1.0, -static_cast<int>(state.range(0))), 2, 0);
    const auto f = rbit::norm_functional();
    std::uint64_t seed = 0;
    for (auto _ : state) {
        rbit::BitSource src(seed++);
        benchmark::DoNotOptimize(rbit::mlmc_estimate(f, rbit::MLMCModel::bridge(), params, src).estimate);
    }
}
BENCHMARK(BM_MLMCRun)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_RbitMilstein(benchmark::State& state) {
    rbit::BitSource src(4);
    const auto model = rbit::SDEModel::geometric(0.05, 0.2, 1.0);
    for (auto _ : state)
        benchmark::DoNotOptimize(rbit::rbit_milstein_path(src, model, 1024, 16).values.back());
}
BENCHMARK(BM_RbitMilstein);

} // namespace

BENCHMARK_MAIN();
