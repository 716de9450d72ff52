#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "lagrangeflow/flow_catalog.hpp"
#include "lagrangeflow/martingale_lab.hpp"
#include "lagrangeflow/noether.hpp"
#include "lagrangeflow/reduce.hpp"
#include "lagrangeflow/sde_engine.hpp"

namespace {

using namespace lagrangeflow;

void BM_SimulateReference(benchmark::State& state) {
    const auto fc = make_case("lamb_oseen");
    for (auto _ : state) benchmark::DoNotOptimize(reference::simulate_pu(fc, state.range(0), 100, 7));
    state.SetItemsProcessed(state.iterations() * state.range(0) * 100);
}

void BM_SimulateParallel(benchmark::State& state) {
    const auto fc = make_case("lamb_oseen");
    for (auto _ : state) benchmark::DoNotOptimize(simulate_pu(fc, state.range(0), 100, 7));
    state.SetItemsProcessed(state.iterations() * state.range(0) * 100);
}

std::vector<double> noise(std::size_t n) {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    std::vector<double> xs(n);
    for (auto& x : xs) x = g(rng);
    return xs;
}

void BM_TreeSumSerial(benchmark::State& state) {
    const auto xs = noise(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(tree_sum_serial(xs));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_TreeSumParallel(benchmark::State& state) {
    const auto xs = noise(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(tree_sum(xs));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

struct MartingaleFixture {
    FlowCase fc = make_case("taylor_green");
    PathEnsemble pu = simulate_pu(fc, 5000, 50, 7);
    ProcessSample proc = component(el_process(fc, pu), 0);
    std::vector<TestFunction> dict = default_test_dictionary();
};

void BM_MartingaleSerial(benchmark::State& state) {
    static const MartingaleFixture f;
    for (auto _ : state) benchmark::DoNotOptimize(martingale_test_serial(f.proc, f.pu, f.dict));
}

void BM_MartingaleParallel(benchmark::State& state) {
    static const MartingaleFixture f;
    for (auto _ : state) benchmark::DoNotOptimize(martingale_test(f.proc, f.pu, f.dict));
}

}  // namespace

BENCHMARK(BM_SimulateReference)->Arg(2000)->Arg(20000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SimulateParallel)->Arg(2000)->Arg(20000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TreeSumSerial)->Arg(1 << 16)->Arg(1 << 22);
BENCHMARK(BM_TreeSumParallel)->Arg(1 << 16)->Arg(1 << 22);
BENCHMARK(BM_MartingaleSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MartingaleParallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
