#include <benchmark/benchmark.h>

#include "stochosc/grid.hpp"
#include "stochosc/integrator.hpp"
#include "stochosc/lyapunov.hpp"
#include "stochosc/models.hpp"

using namespace stochosc;

namespace {

const PhaseSystem& duffing() {
    static const PhaseSystem sys = reduce_to_phase_system(find_model("duffing").build());
    return sys;
}

IntegrationConfig short_run() {
    IntegrationConfig c;
    c.dt = 1e-3;
    c.T = 2.0;
    c.initial = PhasePoint({1.0}, {0.0});
    return c;
}

void BM_EnsembleSerial(benchmark::State& state) {
    const auto c = short_run();
    for (auto _ : state) benchmark::DoNotOptimize(simulate_ensemble_serial(duffing(), c, state.range(0)));
    state.SetItemsProcessed(state.iterations() * state.range(0) * static_cast<std::int64_t>(c.n_steps()));
}

void BM_EnsembleParallel(benchmark::State& state) {
    const auto c = short_run();
    for (auto _ : state) benchmark::DoNotOptimize(simulate_ensemble(duffing(), c, state.range(0)));
    state.SetItemsProcessed(state.iterations() * state.range(0) * static_cast<std::int64_t>(c.n_steps()));
}

MultiPolynomial scan_target() {
    const auto model = find_model("vector_duffing").build();
    return apply_generator(reduce_to_phase_system(model), build_energy_lyapunov(model));
}

void BM_GridScanSerial(benchmark::State& state) {
    const SampleGrid grid(4, VerificationDomain{});
    const auto f = scan_target().compile();
    for (auto _ : state)
        benchmark::DoNotOptimize(scan_min_serial(grid, [&](std::span<const double> z) { return f(z); }));
}

void BM_GridScanParallel(benchmark::State& state) {
    const SampleGrid grid(4, VerificationDomain{});
    const auto f = scan_target().compile();
    for (auto _ : state) benchmark::DoNotOptimize(scan_min(grid, [&](std::span<const double> z) { return f(z); }));
}

}  // namespace

BENCHMARK(BM_EnsembleSerial)->Arg(64)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EnsembleParallel)->Arg(64)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GridScanSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GridScanParallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
