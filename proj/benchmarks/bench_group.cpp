#include <benchmark/benchmark.h>

#include "proplab/fuchsian.hpp"
#include "proplab/symrep.hpp"

using namespace proplab;

static void BM_conjugacy_enumeration(benchmark::State& state) {
  const auto grp = fuchsian::schottky_group(4.0, 1.0);
  const int maxlen = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(fuchsian::enumerate_conjugacy_classes(grp, maxlen));
  }
}
BENCHMARK(BM_conjugacy_enumeration)->Arg(4)->Arg(6);

static void BM_sym_power(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const halfplane::Moebius g(2.0, 0.3, 0.5, (1.0 + 0.3 * 0.5) / 2.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(symrep::sym_power_rep(g, n));
  }
}
BENCHMARK(BM_sym_power)->Arg(2)->Arg(5);

static void BM_word_evaluation(benchmark::State& state) {
  const auto grp = fuchsian::genus2_group();
  const auto w = fuchsian::parse_word("abABcdCD", 4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate(grp, w));
  }
}
BENCHMARK(BM_word_evaluation);

BENCHMARK_MAIN();
