// OpenMP kernels against their serial references. Thread count follows
// OMP_NUM_THREADS.
#include <random>

#include <benchmark/benchmark.h>

#include "maskagent/edt.hpp"
#include "maskagent/eval.hpp"
#include "maskagent/improve.hpp"
#include "maskagent/policy.hpp"
#include "maskagent/segmenter.hpp"
#include "maskagent/synth.hpp"
#include "maskagent/trajectory.hpp"

using namespace maskagent;

namespace {

BitMask noisy_mask(int side) {
    std::mt19937_64 rng(42);
    std::bernoulli_distribution on(0.3);
    BitMask m(side, side);
    for (int y = 0; y < side; ++y)
        for (int x = 0; x < side; ++x) m.set(x, y, on(rng));
    return m;
}

const std::vector<Task>& tasks() {
    static const auto t = synth_tasks(64, 96, 5);
    return t;
}

void BM_edt(benchmark::State& state) {
    const auto m = noisy_mask(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(edt_sq(m));
    state.SetItemsProcessed(state.iterations() * static_cast<long>(m.size()));
}

void BM_edt_serial(benchmark::State& state) {
    const auto m = noisy_mask(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(edt_sq_serial(m));
    state.SetItemsProcessed(state.iterations() * static_cast<long>(m.size()));
}

template <bool Parallel>
void BM_gen_traj(benchmark::State& state) {
    const OracleSegmenter seg;
    const EnvConfig cfg;
    const auto inits = plan_inits(tasks(), InitMix{0.1, 0.1}, 1);
    for (auto _ : state) {
        if constexpr (Parallel)
            benchmark::DoNotOptimize(generate_trajectories(tasks(), seg, cfg, inits));
        else
            benchmark::DoNotOptimize(generate_trajectories_serial(tasks(), seg, cfg, inits));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(tasks().size()));
}

template <bool Parallel>
void BM_rollout(benchmark::State& state) {
    const OracleSegmenter seg;
    const NoisyExpertPolicy policy(NoiseConfig{0.1, 0.2, 3});
    const EnvConfig cfg;
    for (auto _ : state) {
        if constexpr (Parallel)
            benchmark::DoNotOptimize(rollout(policy, tasks(), seg, cfg, 9));
        else
            benchmark::DoNotOptimize(rollout_serial(policy, tasks(), seg, cfg, 9));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(tasks().size()));
}

template <bool Parallel>
void BM_noc(benchmark::State& state) {
    const OracleSegmenter seg;
    for (auto _ : state) {
        if constexpr (Parallel)
            benchmark::DoNotOptimize(noc_batch(tasks(), seg, 0.9, 20));
        else
            benchmark::DoNotOptimize(noc_batch_serial(tasks(), seg, 0.9, 20));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(tasks().size()));
}

}  // namespace

BENCHMARK(BM_edt)->Arg(128)->Arg(512)->Arg(1024)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_edt_serial)->Arg(128)->Arg(512)->Arg(1024)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_gen_traj<true>)->Name("BM_gen_traj")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_gen_traj<false>)->Name("BM_gen_traj_serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_rollout<true>)->Name("BM_rollout")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_rollout<false>)->Name("BM_rollout_serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_noc<true>)->Name("BM_noc")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_noc<false>)->Name("BM_noc_serial")->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
