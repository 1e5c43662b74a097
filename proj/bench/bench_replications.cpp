#include "aodvtune/mc_eval.hpp"

#include <benchmark/benchmark.h>

using namespace aodvtune;

namespace {

EvalConfig make_config(std::size_t parallelism) {
    static const auto scenario =
        PreparedScenario::make(load_scenario(std::string(AODVTUNE_SOURCE_DIR) + "/scenarios/G1_20_512.txt"));
    EvalConfig c;
    c.replications = 24;
    c.parallelism = parallelism;
    c.base_seed = 1;
    c.scenario = scenario;
    return c;
}

void BM_serial(benchmark::State& state) {
    const auto cfg = make_config(1);
    const Genome g = ParamSpace::aodv().rfc_default();
    for (auto _ : state) benchmark::DoNotOptimize(run_replications_serial(g, cfg));
    state.SetItemsProcessed(state.iterations() * 24);
}

void BM_openmp(benchmark::State& state) {
    const auto cfg = make_config(static_cast<std::size_t>(state.range(0)));
    const Genome g = ParamSpace::aodv().rfc_default();
    for (auto _ : state) benchmark::DoNotOptimize(run_replications(g, cfg));
    state.SetItemsProcessed(state.iterations() * 24);
}

} // namespace

BENCHMARK(BM_serial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_openmp)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
