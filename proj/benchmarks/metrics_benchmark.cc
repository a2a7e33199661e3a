#include <vector>

#include <benchmark/benchmark.h>

#include "cmc/metrics.h"
#include "cmc/random.h"

namespace {

cmc::FeatureMatrix RandomFeatures(std::size_t n, std::size_t d, std::uint64_t seed) {
  cmc::Rng rng(seed);
  std::vector<double> v(n * d);
  for (auto& x : v) x = rng.uniform(-1.0, 1.0);
  return cmc::FeatureMatrix(n, d, v);
}

void BM_Fid(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  const cmc::GaussianStats a = cmc::gaussian_stats(RandomFeatures(4 * d, d, 1));
  const cmc::GaussianStats b = cmc::gaussian_stats(RandomFeatures(4 * d, d, 2));
  for (auto _ : state) benchmark::DoNotOptimize(cmc::fid(a, b));
}
BENCHMARK(BM_Fid)->Arg(16)->Arg(64)->Arg(256);

void BM_GaussianStats(benchmark::State& state) {
  const auto f = RandomFeatures(1000, static_cast<std::size_t>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(cmc::gaussian_stats(f));
}
BENCHMARK(BM_GaussianStats)->Arg(64)->Arg(256);

void BM_InceptionScore(benchmark::State& state) {
  const std::size_t n = 5000, k = 1000;
  cmc::Rng rng(4);
  std::vector<double> v(n * k);
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (std::size_t c = 0; c < k; ++c) sum += v[i * k + c] = rng.uniform();
    for (std::size_t c = 0; c < k; ++c) v[i * k + c] /= sum;
  }
  const cmc::ProbMatrix p(n, k, v);
  for (auto _ : state) benchmark::DoNotOptimize(cmc::inception_score(p, 10));
}
BENCHMARK(BM_InceptionScore);

void BM_MatchingScore(benchmark::State& state) {
  const auto words = RandomFeatures(16, 256, 5);
  const auto regions = RandomFeatures(289, 256, 6);
  for (auto _ : state) benchmark::DoNotOptimize(cmc::matching_score(words, regions));
}
BENCHMARK(BM_MatchingScore);

}  // namespace
