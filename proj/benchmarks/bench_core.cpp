#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "rdopt/cohesive_chain.hpp"
#include "rdopt/dataset.hpp"
#include "rdopt/design_space.hpp"
#include "rdopt/rng.hpp"
#include "rdopt/sampling.hpp"
#include "rdopt/smoothing.hpp"

using namespace rdopt;

namespace {

void BM_SobolGenerate(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  std::vector<double> point(d);
  for (auto _ : state) {
    SobolGenerator gen(d);
    for (int i = 0; i < 4096; ++i) {
      gen.next(point.data());
      benchmark::DoNotOptimize(point.data());
    }
  }
  state.SetItemsProcessed(state.iterations() * 4096);
}
BENCHMARK(BM_SobolGenerate)->Arg(2)->Arg(8)->Arg(32);

void BM_NormalQuantile(benchmark::State& state) {
  double u = 1e-6;
  double acc = 0.0;
  for (auto _ : state) {
    acc += normal_quantile(u);
    u += 1e-6;
    if (u >= 1.0) u -= 1.0 - 1e-6;
  }
  benchmark::DoNotOptimize(acc);
}
BENCHMARK(BM_NormalQuantile);

void BM_NNQuery(benchmark::State& state) {
  const DesignSpace space({{-2.0, 2.0, false, 0.2},
                           {0.0, 10.0, true, 1.0},
                           {0.0, 5.0, false, 0.5}});
  NNIndex data(space);
  SeededStream rng(1, 0);
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  for (std::size_t i = 0; i < n; ++i) {
    Vec site(3);
    for (int j = 0; j < 3; ++j)
      site[j] = rng.uniform() * space.internal_width(j);
    data.insert({site, rng.uniform(), 0, RecordTag::doe});
  }
  data.prepare();
  Vec q(3);
  for (auto _ : state) {
    for (int j = 0; j < 3; ++j) q[j] = rng.uniform() * space.internal_width(j);
    benchmark::DoNotOptimize(data.nearest(q));
  }
}
BENCHMARK(BM_NNQuery)->Arg(100)->Arg(1000)->Arg(10000);

void BM_EstimateGradient(benchmark::State& state) {
  const int d = 4;
  SmoothedEstimator est(d, state.range(0));
  const Vec x(d, 0.3), sig(d, 0.5);
  auto field = [](const double* z) {
    double s = 0.0;
    for (int j = 0; j < 4; ++j) s += (j + 1) * z[j] * z[j];
    return s;
  };
  for (auto _ : state) {
    benchmark::DoNotOptimize(est.gradient(x, sig, field));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EstimateGradient)->Arg(1 << 12)->Arg(1 << 16);

void BM_ChainSimulate(benchmark::State& state) {
  ChainConfig cfg;
  cfg.load_steps = static_cast<int>(state.range(0));
  const ChainModel model(cfg);
  const Vec design{1.0, 1.2};
  for (auto _ : state) {
    benchmark::DoNotOptimize(mechanical_work(model.simulate(design)));
  }
}
BENCHMARK(BM_ChainSimulate)->Arg(25)->Arg(100);

}  // namespace

BENCHMARK_MAIN();
