#include <ilcbench/ilcbench.hpp>

#include <benchmark/benchmark.h>

using namespace ilcbench;

namespace {

constexpr double kTs = 1e-3;

Signal reference(std::size_t n) {
    return embed(fourth_order_profile(0.1, {0.4, 4.0, 200.0, 2e4}, kTs), 100, n).position;
}

void BM_simulate(benchmark::State& state) {
    const auto sc = default_printer_scenario();
    const auto r = reference(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(simulate(sc.sensitivity(), r));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_simulate)->Arg(2000)->Arg(20000);

void BM_apply_noncausal(benchmark::State& state) {
    const auto sc = default_printer_scenario();
    const auto L = design_inverse_L(sc.process_sensitivity(), 2000).filter;
    const auto r = reference(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(apply_noncausal(L, r));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_apply_noncausal)->Arg(2000)->Arg(20000);

void BM_design_inverse_L(benchmark::State& state) {
    const auto gs = default_printer_scenario().process_sensitivity();
    for (auto _ : state) benchmark::DoNotOptimize(design_inverse_L(gs, 2000));
}
BENCHMARK(BM_design_inverse_L);

void BM_design_Q(benchmark::State& state) {
    const auto sc = default_printer_scenario();
    const auto grid = default_grid(kTs);
    const auto frf = freq_response(sc.process_sensitivity(), grid);
    const auto L = rigid_body_learning_filter(1.0, sc.controller());
    for (auto _ : state) benchmark::DoNotOptimize(design_Q(frf, L, full_mask(grid)));
}
BENCHMARK(BM_design_Q)->Unit(benchmark::kMillisecond);

void BM_run_ilc(benchmark::State& state) {
    const auto sc = default_printer_scenario();
    const auto grid = default_grid(kTs);
    const auto L = rigid_body_learning_filter(1.0, sc.controller());
    const auto Q = design_Q(freq_response(sc.process_sensitivity(), grid), L, full_mask(grid)).filter;
    const auto r = reference(2000);
    for (auto _ : state) benchmark::DoNotOptimize(run_ilc(sc, r, L, Q, {.n_iter = 10, .keep_signals = false}));
}
BENCHMARK(BM_run_ilc)->Unit(benchmark::kMillisecond);

void BM_lifted_oracle(benchmark::State& state) {
    const auto sc = default_printer_scenario();
    const auto L = rigid_body_learning_filter(1.0, sc.controller());
    const auto Q = NoncausalFilter::identity(kTs);
    const auto n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(lifted_contraction_oracle(sc, L, Q, n));
}
BENCHMARK(BM_lifted_oracle)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_fourth_order_profile(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(fourth_order_profile(0.1, {0.4, 4.0, 200.0, 2e4}, kTs));
}
BENCHMARK(BM_fourth_order_profile);

} // namespace

BENCHMARK_MAIN();
