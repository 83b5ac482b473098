// Serial reference vs OpenMP kernels.
#include "chainspill/econometrics/garch.hpp"
#include "chainspill/kernels.hpp"
#include "chainspill/synth.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace chainspill;

namespace {

struct Panel {
    kernels::PortfolioMatrices m;
    std::vector<std::string> ids;
};

Panel make_panel(std::size_t periods, std::size_t assets) {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> ret(0.0, 0.03);
    std::uniform_real_distribution<double> cap(1e5, 1e9);
    std::bernoulli_distribution in(0.8);
    Panel p;
    p.m.periods = periods;
    p.m.assets = assets;
    p.m.returns.resize(periods * assets);
    p.m.caps_prev.resize(periods * assets);
    p.m.member.resize(periods * assets);
    for (std::size_t k = 0; k < periods * assets; ++k) {
        p.m.returns[k] = ret(rng);
        p.m.caps_prev[k] = cap(rng);
        p.m.member[k] = in(rng) ? 1 : 0;
    }
    for (std::size_t a = 0; a < assets; ++a) p.ids.push_back("asset" + std::to_string(a));
    return p;
}

void BM_weighted_returns_serial(benchmark::State& state) {
    const auto p = make_panel(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)));
    for (auto _ : state) benchmark::DoNotOptimize(kernels::weighted_returns_serial(p.m, p.ids));
    state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(1));
}

void BM_weighted_returns_omp(benchmark::State& state) {
    const auto p = make_panel(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)));
    for (auto _ : state) benchmark::DoNotOptimize(kernels::weighted_returns_omp(p.m));
    state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(1));
}

// A batch of small GJR fits, the unit of work the study fans out.
std::vector<econ::DesignMatrix> fit_batch() {
    econ::GjrParams g;
    g.omega = 0.05;
    g.alpha = {0.1};
    g.gamma = {0.1};
    g.beta = {0.8};
    std::vector<econ::DesignMatrix> out;
    for (std::uint64_t s = 0; s < 8; ++s) out.push_back(synth::simulate_gjr_regression(800, 0.5, g, s));
    return out;
}

void BM_fits_serial(benchmark::State& state) {
    const auto batch = fit_batch();
    for (auto _ : state) {
        kernels::serial_for(batch.size(), [&](std::size_t i) {
            benchmark::DoNotOptimize(econ::fit_garch_regression(batch[i], {1, 1, 1}, {1, 0}));
        });
    }
}

void BM_fits_parallel(benchmark::State& state) {
    const auto batch = fit_batch();
    for (auto _ : state) {
        kernels::parallel_for(batch.size(), 0, [&](std::size_t i) {
            benchmark::DoNotOptimize(econ::fit_garch_regression(batch[i], {1, 1, 1}, {1, 0}));
        });
    }
}

}  // namespace

BENCHMARK(BM_weighted_returns_serial)->Args({1500, 50})->Args({1500, 400})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_weighted_returns_omp)->Args({1500, 50})->Args({1500, 400})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_fits_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_fits_parallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
