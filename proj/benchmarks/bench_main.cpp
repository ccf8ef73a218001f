#include <benchmark/benchmark.h>

#include "ubac/channel.hpp"
#include "ubac/code_spec.hpp"
#include "ubac/decoder.hpp"
#include "ubac/density_evolution.hpp"
#include "ubac/gf2.hpp"
#include "ubac/rng.hpp"
#include "ubac/tanner.hpp"

namespace {

void BM_SampleGraph(benchmark::State& state) {
    const auto spec = ubac::preset_code(2).ensemble;
    const int n = static_cast<int>(state.range(0));
    std::uint64_t seed = 1;
    for (auto _ : state) {
        auto g = ubac::sample_graph(spec, n, seed++);
        benchmark::DoNotOptimize(g.vn_to_cn.data());
    }
    state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_SampleGraph)->Arg(10000)->Arg(50000);

void BM_DecodePattern(benchmark::State& state) {
    const auto spec = ubac::preset_code(2).ensemble;
    const int n = static_cast<int>(state.range(0));
    const auto g = ubac::sample_graph(spec, n, 7);
    const auto adj = ubac::build_cn_adjacency(g);
    std::uint64_t seed = 1;
    for (auto _ : state) {
        const auto pattern = ubac::sample_erasure_pattern(n, 1, seed++);
        const auto r = ubac::decode_erasure_pattern(g, 1, pattern, 200, ubac::Schedule::synced,
                                                    &adj);
        benchmark::DoNotOptimize(r.iterations_used);
    }
    state.SetItemsProcessed(state.iterations() * g.edge_count());
}
BENCHMARK(BM_DecodePattern)->Arg(4096)->Arg(16384)->Arg(50000);

void BM_DeRun(benchmark::State& state) {
    const auto spec = ubac::preset_code(2).ensemble;
    const ubac::DeSystem sys(spec.vn, spec.cn);
    for (auto _ : state) {
        const auto t = ubac::de_run(sys, 2000, 1e-8);
        benchmark::DoNotOptimize(t.p.data());
    }
}
BENCHMARK(BM_DeRun);

void BM_Gf2Rank(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    ubac::Rng rng(5);
    const auto m = ubac::Gf2Matrix::random(n, n, rng);
    for (auto _ : state) benchmark::DoNotOptimize(ubac::gf2_rank(m));
}
BENCHMARK(BM_Gf2Rank)->Arg(64)->Arg(256)->Arg(512);

void BM_StoppingSetScan(benchmark::State& state) {
    const auto spec = ubac::preset_code(2).ensemble;
    const int n = static_cast<int>(state.range(0));
    const auto g = ubac::sample_graph(spec, n, 11);
    for (auto _ : state) {
        const auto reports = ubac::find_deg1_stopping_sets(g, 3, 3);
        benchmark::DoNotOptimize(reports.size());
    }
}
BENCHMARK(BM_StoppingSetScan)->Arg(10000)->Arg(50000);

}  // namespace

BENCHMARK_MAIN();
