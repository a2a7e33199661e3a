#include <benchmark/benchmark.h>

#include "cmc/caption.h"
#include "cmc/harness.h"
#include "cmc/scene.h"

namespace {

void BM_Render(benchmark::State& state) {
  cmc::Rng rng(1);
  const cmc::SceneGraph scene = cmc::random_anchored_scene(rng);
  const int dim = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(cmc::render(scene, dim, dim));
}
BENCHMARK(BM_Render)->Arg(128)->Arg(256);

void BM_Analyze(benchmark::State& state) {
  const auto corpus = cmc::make_corpus(16, 2, {}, static_cast<int>(state.range(0)),
                                       static_cast<int>(state.range(0)));
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(cmc::analyze(corpus[i++ % corpus.size()].image));
}
BENCHMARK(BM_Analyze)->Arg(128)->Arg(256);

void BM_ParseCaption(benchmark::State& state) {
  const auto captions = cmc::make_caption_corpus(256, 3);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(cmc::parse_caption(captions[i++ % captions.size()]));
  }
}
BENCHMARK(BM_ParseCaption);

void BM_CmcPipeline(benchmark::State& state) {
  const cmc::Codebook cb = cmc::train_codebook(cmc::make_caption_corpus(10000, 1));
  const auto corpus = cmc::make_corpus(16, 4);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(cmc::run_cmc_pipeline(corpus[i++ % corpus.size()].image, cb));
  }
}
BENCHMARK(BM_CmcPipeline);

}  // namespace
