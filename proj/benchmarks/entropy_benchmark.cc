#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "cmc/entropy.h"
#include "cmc/harness.h"

namespace {

const cmc::Codebook& CaptionCodebook() {
  static const cmc::Codebook cb = cmc::train_codebook(cmc::make_caption_corpus(10000, 1));
  return cb;
}

void BM_TrainCodebook(benchmark::State& state) {
  const auto captions = cmc::make_caption_corpus(static_cast<std::size_t>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(cmc::train_codebook(captions));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TrainCodebook)->Arg(1000)->Arg(10000);

void BM_EncodeCaption(benchmark::State& state) {
  const auto captions = cmc::make_caption_corpus(256, 3);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(cmc::encode_text(captions[i++ % captions.size()], CaptionCodebook()));
  }
}
BENCHMARK(BM_EncodeCaption);

void BM_DecodeCaption(benchmark::State& state) {
  std::vector<cmc::Bitstream> streams;
  for (const auto& c : cmc::make_caption_corpus(256, 4)) {
    streams.push_back(cmc::encode_text(c, CaptionCodebook()));
  }
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(cmc::decode_text(streams[i++ % streams.size()], CaptionCodebook()));
  }
}
BENCHMARK(BM_DecodeCaption);

void BM_DecodeBytes(benchmark::State& state) {
  std::string text(static_cast<std::size_t>(state.range(0)), '\0');
  for (std::size_t i = 0; i < text.size(); ++i) text[i] = static_cast<char>(i * 131 % 256);
  const cmc::Bitstream bits = cmc::encode_text(text, CaptionCodebook());
  for (auto _ : state) benchmark::DoNotOptimize(cmc::decode_text(bits, CaptionCodebook()));
  state.SetBytesProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_DecodeBytes)->Arg(1 << 10)->Arg(1 << 16);

}  // namespace
