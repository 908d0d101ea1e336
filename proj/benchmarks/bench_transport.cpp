#include <benchmark/benchmark.h>

#include "proplab/flatbundle.hpp"

using namespace proplab;
using halfplane::Point;

static void BM_transport_matrix(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto path = flatbundle::transport_along(
      halfplane::geodesic(Point(0.3, 0.9), Point(-0.8, 2.1)), 1e-3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(flatbundle::transport_matrix(n, path));
  }
}
BENCHMARK(BM_transport_matrix)->Arg(1)->Arg(3)->Arg(5);

static void BM_flatness_residual(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto loop = flatbundle::square_loop(Point(0.0, 1.0), 0.5, 1e-2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(flatbundle::flatness_residual(n, loop));
  }
}
BENCHMARK(BM_flatness_residual)->Arg(2)->Arg(5);

static void BM_holonomy_rep(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const halfplane::Moebius g(2.0, 0.3, 0.5, (1.0 + 0.3 * 0.5) / 2.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(flatbundle::holonomy_rep(g, n, Point(0.0, 1.0), 1e-2));
  }
}
BENCHMARK(BM_holonomy_rep)->Arg(1)->Arg(4);
