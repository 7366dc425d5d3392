#include <cpd/cusum.hpp>
#include <cpd/localise.hpp>
#include <cpd/nn.hpp>
#include <cpd/robust.hpp>
#include <cpd/simgen.hpp>
#include <cpd/train.hpp>

#include <benchmark/benchmark.h>

#include <random>

namespace {

cpd::Series gaussian(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> z;
    std::vector<double> v(n);
    for (auto& x : v) x = z(rng);
    return cpd::Series(std::move(v));
}

void BM_CusumStatistic(benchmark::State& state) {
    auto x = gaussian(static_cast<std::size_t>(state.range(0)), 1);
    for (auto _ : state) benchmark::DoNotOptimize(cpd::cusum_statistic(x));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_CusumStatistic)->RangeMultiplier(4)->Range(16, 4096)->Complexity();

void BM_CusumStarStatistic(benchmark::State& state) {
    auto x = gaussian(static_cast<std::size_t>(state.range(0)), 2);
    auto grid = cpd::dyadic_grid(x.size());
    for (auto _ : state) benchmark::DoNotOptimize(cpd::cusum_star_statistic(x, grid));
}
BENCHMARK(BM_CusumStarStatistic)->RangeMultiplier(4)->Range(16, 4096);

void BM_WilcoxonFast(benchmark::State& state) {
    auto x = gaussian(static_cast<std::size_t>(state.range(0)), 3);
    for (auto _ : state) benchmark::DoNotOptimize(cpd::wilcoxon_statistic(x));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_WilcoxonFast)->RangeMultiplier(2)->Range(16, 1024)->Complexity();

void BM_WilcoxonDirect(benchmark::State& state) {
    auto x = gaussian(static_cast<std::size_t>(state.range(0)), 3);
    for (auto _ : state) benchmark::DoNotOptimize(cpd::wilcoxon_statistic_direct(x));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_WilcoxonDirect)->RangeMultiplier(2)->Range(16, 1024)->Complexity();

void BM_Forward(benchmark::State& state) {
    auto n = static_cast<std::size_t>(state.range(0));
    auto net = cpd::init_network({n, {2 * n - 2}, 1}, 4);
    auto x = gaussian(n, 5);
    std::vector<double> input(x.begin(), x.end());
    for (auto _ : state) benchmark::DoNotOptimize(cpd::forward(net, input));
}
BENCHMARK(BM_Forward)->Arg(100)->Arg(400);

void BM_LossAndGradient(benchmark::State& state) {
    auto n = static_cast<std::size_t>(state.range(0));
    auto net = cpd::init_network({n, {64, 64}, 1}, 6);
    auto data = cpd::gen_scenario({cpd::Scenario::S1, n, 32, cpd::Role::train}, 7);
    auto batch = cpd::make_batch(data, cpd::Preprocess::unit());
    for (auto _ : state) benchmark::DoNotOptimize(cpd::loss_and_gradient(net, batch));
}
BENCHMARK(BM_LossAndGradient)->Arg(100)->Arg(400);

void BM_Localise(benchmark::State& state) {
    std::vector<double> means{0.0, 3.0, -1.0};
    auto series = cpd::gen_piecewise(static_cast<std::size_t>(state.range(0)), {800, 1600}, means, 1.0, 200, 8);
    auto psi = cpd::cusum_window(100, cpd::null_threshold(100, 0.05));
    for (auto _ : state) benchmark::DoNotOptimize(cpd::localise(series.x, psi));
}
BENCHMARK(BM_Localise)->Arg(2400)->Arg(4800);

} // namespace

BENCHMARK_MAIN();
