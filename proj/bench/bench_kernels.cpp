// Parallel kernels against their serial references: behaviour generation
// over the input domain, and property checking over all components.

#include <benchmark/benchmark.h>

#include "nmpl/hyper.hpp"
#include "nmpl/interp.hpp"
#include "support.hpp"

using namespace nmpl;

namespace {

const LabelModel& model() {
    static const LabelModel m = LabelModel::four_point();
    return m;
}

// Loops whose trip counts depend on every input, so runs differ in length.
CmdPtr workload() {
    return parse_program(
        "while a { a := a - 1; b := b + 1 };"
        "pdown(Pub,Trd) { while y { y := y - 1; s := s + y } };"
        "while b < 6 { b := b + 1 }",
        model());
}

std::vector<std::uint64_t> domain(std::int64_t n) {
    std::vector<std::uint64_t> d;
    for (std::int64_t v = 0; v < n; ++v) d.push_back(static_cast<std::uint64_t>(v));
    return d;
}

void BM_behav_parallel(benchmark::State& state) {
    auto c = workload();
    auto ctx = testing::standard_ctx(model());
    auto d = domain(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(behav(c, ctx, d));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(enumerate_memories(ctx, d).size()));
}

void BM_behav_serial(benchmark::State& state) {
    auto c = workload();
    auto ctx = testing::standard_ctx(model());
    auto d = domain(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(behav_serial(c, ctx, d));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(enumerate_memories(ctx, d).size()));
}

void BM_check_all_parallel(benchmark::State& state) {
    auto ctx = testing::standard_ctx(model());
    auto runs = behav(workload(), ctx, domain(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(check_all(runs, ctx, Property::NMPL, model()));
}

void BM_check_all_serial(benchmark::State& state) {
    auto ctx = testing::standard_ctx(model());
    auto runs = behav(workload(), ctx, domain(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(check_all_serial(runs, ctx, Property::NMPL, model()));
}

}  // namespace

BENCHMARK(BM_behav_parallel)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_behav_serial)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_check_all_parallel)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_check_all_serial)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
