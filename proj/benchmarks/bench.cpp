// Microbenchmarks for the hot paths: per-sample estimator updates, the
// sliding-window oracle, stream generation, and the inverse CDF used for
// ground truth. Run with --benchmark_min_time=... to tighten timings.

#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "qtrack/distributions.hpp"
#include "qtrack/estimator.hpp"
#include "qtrack/random.hpp"
#include "qtrack/streams.hpp"
#include "qtrack/window_oracle.hpp"

namespace {

using namespace qtrack;

constexpr std::size_t kPoolSize = 1 << 14;
constexpr std::size_t kPoolMask = kPoolSize - 1;

std::vector<double> sample_pool(std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> xs(kPoolSize);
  for (double& x : xs) x = rng.chi_squared(6.0);
  return xs;
}

QuantileBank make_bank(Variant variant, double step, int count) {
  EstimatorConfig cfg;
  cfg.variant = variant;
  cfg.step = step;
  const auto targets = build_targets(DistributionSpec::Family::Chi2, Placement::Median, count);
  const auto pool = sample_pool(7);
  return QuantileBank::from_samples(targets, cfg,
                                    std::span<const double>(pool.data(), kDefaultInitSamples));
}

void BM_CoupledObserve(benchmark::State& state) {
  auto bank = make_bank(Variant::Mdumiqe, 0.2, static_cast<int>(state.range(0)));
  const auto pool = sample_pool(42);
  std::size_t i = 0;
  for (auto _ : state) {
    bank.observe(pool[i++ & kPoolMask]);
  }
  benchmark::DoNotOptimize(bank.quantile(0));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_CoupledObserve)->Arg(3)->Arg(9);

void BM_IndependentObserve(benchmark::State& state) {
  auto bank = make_bank(Variant::DumiqeMult, 0.05, static_cast<int>(state.range(0)));
  const auto pool = sample_pool(42);
  std::size_t i = 0;
  for (auto _ : state) {
    bank.observe(pool[i++ & kPoolMask]);
  }
  benchmark::DoNotOptimize(bank.quantile(0));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_IndependentObserve)->Arg(3)->Arg(9);

void BM_WindowOracleUpdate(benchmark::State& state) {
  WindowOracle oracle(static_cast<std::size_t>(state.range(0)));
  const auto pool = sample_pool(42);
  std::size_t i = 0;
  for (auto _ : state) {
    oracle.update(pool[i++ & kPoolMask]);
  }
  benchmark::DoNotOptimize(oracle.quantile(0.5));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_WindowOracleUpdate)->Arg(1000)->Arg(10000);

void BM_StreamNext(benchmark::State& state) {
  StreamConfig cfg;
  cfg.kind = StreamKind::SinChi2;
  cfg.period = 800;
  const auto targets = build_targets(DistributionSpec::Family::Chi2, Placement::Median, 9);
  SyntheticStream stream(cfg, targets);
  double sink = 0.0;
  for (auto _ : state) {
    sink += stream.next().x;
  }
  benchmark::DoNotOptimize(sink);
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_StreamNext);

void BM_Chi2InvCdf(benchmark::State& state) {
  double p = 0.001;
  double sink = 0.0;
  for (auto _ : state) {
    sink += chi2_inv_cdf(p, 6.0);
    p += 0.001;
    if (p >= 0.999) p = 0.001;
  }
  benchmark::DoNotOptimize(sink);
}
BENCHMARK(BM_Chi2InvCdf);

}  // namespace

BENCHMARK_MAIN();
