#include <benchmark/benchmark.h>

#include "pfalab/experiment.hpp"
#include "pfalab/kernels.hpp"
#include "pfalab/sbox_analysis.hpp"

using namespace pfalab;

namespace {

const SBoxAnalysis& analysis()
{
    static const SBoxAnalysis a = analyze_sbox(SBoxTable::aes());
    return a;
}

Execution mode(const benchmark::State& state)
{
    return state.range(0) == 0 ? Execution::Serial : Execution::Parallel;
}

void BM_DetectionSweep(benchmark::State& state)
{
    const SBoxTable s = SBoxTable::aes();
    for (auto _ : state)
        benchmark::DoNotOptimize(sweep_single_fault_detection(s, analysis().pair, true, mode(state)));
    state.SetItemsProcessed(state.iterations() * static_cast<long>(kSingleFaults));
}

void BM_CorrectionSweep(benchmark::State& state)
{
    const SBoxTable s = SBoxTable::aes();
    for (auto _ : state)
        benchmark::DoNotOptimize(sweep_single_fault_correction(s, analysis().tables, analysis().pair, {}, mode(state)));
    state.SetItemsProcessed(state.iterations() * static_cast<long>(kSingleFaults));
}

void BM_OriTrials(benchmark::State& state)
{
    ExperimentConfig cfg;
    cfg.n_trials = 8;
    cfg.execution = mode(state);
    for (auto _ : state)
        benchmark::DoNotOptimize(run_experiment(cfg));
    state.SetItemsProcessed(state.iterations() * static_cast<long>(cfg.n_trials * cfg.n_ciphertexts));
}

} // namespace

BENCHMARK(BM_DetectionSweep)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CorrectionSweep)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_OriTrials)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
