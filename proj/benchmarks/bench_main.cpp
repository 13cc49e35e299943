#include <benchmark/benchmark.h>

#include "bhadv/attack.hpp"
#include "bhadv/bh.hpp"
#include "bhadv/bounds.hpp"
#include "bhadv/gauss.hpp"
#include "bhadv/rng.hpp"

namespace {

using namespace bhadv;

InstanceDraw draw_instance(int n, int n0, double q, double mu1, std::uint64_t seed) {
  std::mt19937_64 rng = make_stream(seed, 0);
  return generate_instance(GaussianAltModel::create(n, n0, q, mu1), rng);
}

void BM_GenerateInstance(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const GaussianAltModel model = GaussianAltModel::create(n, n * 9 / 10, 0.1, 1.0);
  std::uint64_t rep = 0;
  for (auto _ : state) {
    std::mt19937_64 rng = make_stream(1, rep++);
    benchmark::DoNotOptimize(generate_instance(model, rng));
  }
}
BENCHMARK(BM_GenerateInstance)->Arg(1000)->Arg(10000);

void BM_BhSorted(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const InstanceDraw draw = draw_instance(n, n * 9 / 10, 0.1, 1.0, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(bh_sorted(draw.pv, 0.1));
  }
}
BENCHMARK(BM_BhSorted)->Arg(1000)->Arg(100000);

void BM_BhBins(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const InstanceDraw draw = draw_instance(n, n * 9 / 10, 0.1, 1.0, 3);
  const BinSystem bins = BinSystem::create(n, 0.1);
  for (auto _ : state) {
    const BinLoads loads = compute_loads(draw.pv, bins);
    benchmark::DoNotOptimize(bh_bins(loads));
  }
}
BENCHMARK(BM_BhBins)->Arg(1000)->Arg(100000);

void BM_IncreaseC(benchmark::State& state) {
  const InstanceDraw draw = draw_instance(1000, 900, 0.1, 1.0, 4);
  const int c = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(increase_c(draw.pv, 0.1, c));
  }
}
BENCHMARK(BM_IncreaseC)->Arg(1)->Arg(100);

void BM_Move1(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const InstanceDraw draw = draw_instance(n, n * 9 / 10, 0.1, 1.0, 5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(move_1(draw.pv, 0.1));
  }
}
BENCHMARK(BM_Move1)->Arg(1000)->Arg(10000);

void BM_LowerBound(benchmark::State& state) {
  const GaussianAltModel model =
      GaussianAltModel::create(static_cast<int>(state.range(0)), state.range(0) * 9 / 10, 0.1, 0.25);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fdr_increase_lower_bound(model, 1));
  }
}
BENCHMARK(BM_LowerBound)->Arg(1000)->Arg(10000);

void BM_NormalQuantile(benchmark::State& state) {
  double u = 0.001;
  for (auto _ : state) {
    benchmark::DoNotOptimize(std_normal_quantile(u));
    u += 0.0001;
    if (u >= 1.0) u = 0.001;
  }
}
BENCHMARK(BM_NormalQuantile);

}  // namespace

BENCHMARK_MAIN();
