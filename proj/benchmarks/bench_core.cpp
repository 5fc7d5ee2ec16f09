#include <benchmark/benchmark.h>

#include "dsbn/dsbn.hpp"

namespace {

using namespace dsbn;

MassFunction random_mass(const Scope& s, Rng& rng, std::size_t k) {
  FocalMap focal;
  for (std::size_t i = 0; i < k; ++i) {
    Bitset b(s.config_count());
    do {
      for (std::size_t c = 0; c < s.config_count(); ++c)
        if (rng.coin()) b.set(c);
    } while (b.none());
    focal[b] += 0.05 + rng.uniform();
  }
  return MassFunction::from_focal(s, std::move(focal), true);
}

// focal count per operand
void BM_Combine(benchmark::State& state) {
  const auto f = make_frame(4, {2});
  Rng rng(1);
  const auto a = random_mass(f->full_scope(), rng, state.range(0));
  const auto b = random_mass(f->full_scope(), rng, state.range(0));
  for (auto _ : state) {
    try {
      benchmark::DoNotOptimize(combine(a, b));
    } catch (const ConflictError&) {
    }
  }
}
BENCHMARK(BM_Combine)->Arg(4)->Arg(16)->Arg(64);

// configurations of the pair scope: 2x2, 2x4, 4x4
void BM_MkConditional(benchmark::State& state) {
  const std::size_t d = state.range(0);
  const auto f = make_frame(2, {2, d});
  Rng rng(2);
  const auto m = random_mass(f->full_scope(), rng, 8);
  const Scope cond = f->scope({0});
  for (auto _ : state) {
    try {
      benchmark::DoNotOptimize(solve_mk_conditional(m, cond));
    } catch (const NoSolutionError&) {
    }
  }
}
BENCHMARK(BM_MkConditional)->Arg(2)->Arg(4)->Arg(8);

ScoreContext tree_context(std::size_t n, std::uint64_t seed) {
  const auto f = make_frame(n, {2});
  const auto dag = random_tree_structure(n, seed);
  return ScoreContext::from_joint(underlying_distribution(random_network(dag, f, {}, seed)));
}

void BM_Dep0(benchmark::State& state) {
  const std::size_t n = state.range(0);
  for (auto _ : state) {
    state.PauseTiming();
    const auto ctx = tree_context(n, 3);  // fresh marginal cache
    state.ResumeTiming();
    benchmark::DoNotOptimize(dep0(ctx, 0, 1));
  }
}
BENCHMARK(BM_Dep0)->Arg(4)->Arg(6)->Arg(8)->Unit(benchmark::kMicrosecond);

void BM_LearnTree(benchmark::State& state) {
  const std::size_t n = state.range(0);
  for (auto _ : state) {
    state.PauseTiming();
    const auto ctx = tree_context(n, 5);
    state.ResumeTiming();
    benchmark::DoNotOptimize(learn_tree(ctx));
  }
}
BENCHMARK(BM_LearnTree)->Arg(5)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_UnderlyingDistribution(benchmark::State& state) {
  const std::size_t n = state.range(0);
  const auto f = make_frame(n, {2});
  const auto net = random_network(random_polytree_structure(n, 7), f, {}, 7);
  for (auto _ : state) benchmark::DoNotOptimize(underlying_distribution(net));
}
BENCHMARK(BM_UnderlyingDistribution)->Arg(4)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_ConditionPopulation(benchmark::State& state) {
  const auto f = make_frame(6, {2});
  const auto joint = underlying_distribution(random_network(random_tree_structure(6, 9), f, {}, 9));
  const auto ds = sample_population(joint, state.range(0), 1);
  const Scope x1 = f->scope({0});
  const ConfigSet event = cylinder_set(ConfigSet::of_tuples(x1, {{"v0"}}), f->full_scope());
  for (auto _ : state) benchmark::DoNotOptimize(condition_population(ds, event));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ConditionPopulation)->Arg(1000)->Arg(100000);

}  // namespace

BENCHMARK_MAIN();
