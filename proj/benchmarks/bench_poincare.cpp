#include <benchmark/benchmark.h>

#include "proplab/cocycle.hpp"

using namespace proplab;
using halfplane::Complex;

static void BM_series_build(benchmark::State& state) {
  const int depth = static_cast<int>(state.range(0));
  const auto grp = fuchsian::schottky_group(4.0, 1.0);
  for (auto _ : state) {
    cocycle::PoincareSeries series(grp, 2, 0, depth);
    benchmark::DoNotOptimize(series.element_count());
  }
}
BENCHMARK(BM_series_build)->Arg(4)->Arg(6);

static void BM_phi_eval(benchmark::State& state) {
  const int depth = static_cast<int>(state.range(0));
  static const auto grp = fuchsian::schottky_group(4.0, 1.0);
  const cocycle::PoincareSeries series(grp, 2, 0, depth);
  Complex z(0.3, 1.1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(series.phi(z));
    z += Complex(1e-6, 0.0);
  }
}
BENCHMARK(BM_phi_eval)->Arg(4)->Arg(6)->Arg(8);

static void BM_f_integral(benchmark::State& state) {
  static const auto grp = fuchsian::schottky_group(4.0, 1.0);
  static const cocycle::PoincareSeries series(grp, 2, 0, 6);
  const auto w = fuchsian::parse_word("ab", 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        cocycle::closed_geodesic_f_integral(series, w, grp, static_cast<int>(state.range(0))));
  }
}
BENCHMARK(BM_f_integral)->Arg(200)->Arg(1000);
