#include <benchmark/benchmark.h>

#include "cmc/baseline_dct.h"

namespace {

void BM_Dct8x8RoundTrip(benchmark::State& state) {
  cmc::Block block;
  for (int i = 0; i < 64; ++i) block[i] = (i * 37 % 255) - 128.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(block = cmc::dct8x8_forward(block));
    block = cmc::dct8x8_inverse(block);
  }
}
BENCHMARK(BM_Dct8x8RoundTrip);

void BM_EncodeImage(benchmark::State& state) {
  const cmc::Image img = cmc::photo_like_image(256, 256, 1);
  const cmc::QuantizerConfig cfg(static_cast<int>(state.range(0)));
  const auto& cb = cmc::default_token_codebooks();
  for (auto _ : state) benchmark::DoNotOptimize(cmc::encode_image(img, cfg, cb));
}
BENCHMARK(BM_EncodeImage)->Arg(10)->Arg(50)->Arg(90);

void BM_DecodeImage(benchmark::State& state) {
  const cmc::Image img = cmc::photo_like_image(256, 256, 1);
  const auto& cb = cmc::default_token_codebooks();
  const cmc::Bitstream bits =
      cmc::encode_image(img, cmc::QuantizerConfig(static_cast<int>(state.range(0))), cb);
  for (auto _ : state) benchmark::DoNotOptimize(cmc::decode_image(bits, cb));
}
BENCHMARK(BM_DecodeImage)->Arg(10)->Arg(50)->Arg(90);

}  // namespace
