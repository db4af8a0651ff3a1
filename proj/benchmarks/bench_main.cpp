#include <benchmark/benchmark.h>

#include "gwalk/electric.hpp"
#include "gwalk/harmonic.hpp"
#include "gwalk/tree.hpp"
#include "gwalk/walk.hpp"

using namespace gwalk;

namespace {

const offspring_distribution& mixed() {
    static auto d = make_distribution({{1, 0.5}, {3, 0.5}});
    return d;
}

const w_pool& mixed_pool() {
    static w_pool p = [] {
        random_stream rs(1);
        return build_w_pool(mixed(), 20000, 30, rs);
    }();
    return p;
}

void bm_sample_degree(benchmark::State& state) {
    random_stream rs(2);
    for (auto _ : state) benchmark::DoNotOptimize(mixed().sample(degree_mode::size_biased, rs));
}
BENCHMARK(bm_sample_degree);

void bm_walk_steps(benchmark::State& state) {
    tree t(tree_kind::igw, mixed(), mixed_pool(), random_stream(3));
    random_stream rs(4);
    node_id cur = t.root();
    for (auto _ : state) {
        cur = transition(t, cur, 2.0, rs);
        benchmark::DoNotOptimize(cur);
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(bm_walk_steps);

void bm_quadratic_variation(benchmark::State& state) {
    tree t(tree_kind::igwr, mixed(), mixed_pool(), random_stream(5));
    random_stream rs(6);
    node_id cur = t.root();
    for (auto _ : state) {
        benchmark::DoNotOptimize(quadratic_variation_step(t, cur));
        cur = transition(t, cur, 2.0, rs);
    }
}
BENCHMARK(bm_quadratic_variation);

void bm_w_pool_round(benchmark::State& state) {
    random_stream rs(7);
    for (auto _ : state)
        benchmark::DoNotOptimize(build_w_pool(mixed(), 10000, int(state.range(0)), rs));
}
BENCHMARK(bm_w_pool_round)->Arg(1)->Arg(8);

void bm_conductance(benchmark::State& state) {
    tree t(tree_kind::gw, mixed(), mixed_pool(), random_stream(8));
    for (auto _ : state)
        benchmark::DoNotOptimize(effective_conductance(t, int(state.range(0)), 2.0));
}
BENCHMARK(bm_conductance)->Arg(6)->Arg(10);

}  // namespace

BENCHMARK_MAIN();
