#include <cmath>
#include <limits>
#include <vector>

#include <gtest/gtest.h>

#include "cmc/baseline_dct.h"
#include "cmc/bitio.h"
#include "cmc/error.h"
#include "cmc/metrics.h"
#include "cmc/random.h"
#include "oracles.h"
#include "test_util.h"

namespace cmc {
namespace {

using ::cmc::testing::CodeOf;

Block RandomBlock(Rng& rng) {
  Block b;
  for (auto& v : b) v = rng.uniform(-128.0, 128.0);
  return b;
}

Image ConstantBlocks(int width, int height, Rng& rng) {
  Image img(width, height);
  for (int by = 0; by < height; by += 8) {
    for (int bx = 0; bx < width; bx += 8) {
      const Rgb c = {static_cast<std::uint8_t>(rng.below(256)),
                     static_cast<std::uint8_t>(rng.below(256)),
                     static_cast<std::uint8_t>(rng.below(256))};
      for (int y = by; y < by + 8; ++y) {
        for (int x = bx; x < bx + 8; ++x) img.at(x, y) = c;
      }
    }
  }
  return img;
}

TEST(DctTest, ConstantBlock) {
  Block b;
  b.fill(128.0);
  const Block c = dct8x8_forward(b);
  EXPECT_NEAR(c[0], 1024.0, 1e-9);
  for (int k = 1; k < 64; ++k) EXPECT_NEAR(c[k], 0.0, 1e-9);
}

TEST(DctTest, ZeroBlock) {
  const Block c = dct8x8_forward(Block{});
  for (double v : c) EXPECT_EQ(v, 0.0);
}

TEST(DctTest, MatchesDirectSummation) {
  Rng rng(1);
  for (int i = 0; i < 100; ++i) {
    const Block x = RandomBlock(rng);
    const Block c = dct8x8_forward(x);
    const auto ref = oracle::dct_direct({x.begin(), x.end()});
    const Block back = dct8x8_inverse(c);
    const auto ref_back = oracle::idct_direct({c.begin(), c.end()});
    for (int k = 0; k < 64; ++k) {
      EXPECT_NEAR(c[k], ref[k], 1e-9);
      EXPECT_NEAR(back[k], ref_back[k], 1e-9);
      EXPECT_NEAR(back[k], x[k], 1e-9);
    }
  }
}

TEST(DctTest, Parseval) {
  Rng rng(2);
  for (int i = 0; i < 100; ++i) {
    const Block x = RandomBlock(rng);
    const Block c = dct8x8_forward(x);
    double ex = 0.0, ec = 0.0;
    for (int k = 0; k < 64; ++k) {
      ex += x[k] * x[k];
      ec += c[k] * c[k];
    }
    EXPECT_NEAR(ec / ex, 1.0, 1e-6);
  }
}

TEST(ZigzagTest, IsPermutationStartingAtDc) {
  const auto& z = zigzag_order();
  std::vector<bool> seen(64, false);
  for (auto idx : z) seen[idx] = true;
  for (bool s : seen) EXPECT_TRUE(s);
  EXPECT_EQ(z[0], 0);
  EXPECT_EQ(z[1], 1);
  EXPECT_EQ(z[2], 8);
  EXPECT_EQ(z[3], 16);
  EXPECT_EQ(z[63], 63);
}

TEST(QuantizerTest, Steps) {
  EXPECT_EQ(QuantizerConfig(50).steps(), QuantizerConfig::base_table());
  for (auto s : QuantizerConfig(100).steps()) EXPECT_EQ(s, 1);
  EXPECT_EQ(QuantizerConfig(10).steps()[0], 80);  // 16 * 5
  EXPECT_EQ(CodeOf([] { QuantizerConfig(0); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(CodeOf([] { QuantizerConfig(101); }), ErrorCode::kInvalidArgument);
}

TEST(BaselineCodecTest, ConstantImageAtQuality100IsExact) {
  const Image img(64, 48, Rgb{37, 140, 251});
  const auto& cb = default_token_codebooks();
  const Bitstream b = encode_image(img, QuantizerConfig(100), cb);
  const Image back = decode_image(b, cb);
  EXPECT_EQ(back, img);
  EXPECT_EQ(psnr(img, back), std::numeric_limits<double>::infinity());
}

TEST(BaselineCodecTest, ConstantBlocksAtQuality100AreExact) {
  Rng rng(3);
  const auto& cb = default_token_codebooks();
  for (int i = 0; i < 5; ++i) {
    const Image img = ConstantBlocks(64, 64, rng);
    EXPECT_EQ(decode_image(encode_image(img, QuantizerConfig(100), cb), cb), img);
  }
}

TEST(BaselineCodecTest, RateAndPsnrMonotoneInQuality) {
  const auto& cb = default_token_codebooks();
  const Image img = photo_like_image(128, 128, 12345);
  double prev_rate = 0.0, prev_psnr = 0.0;
  for (int q : default_quality_grid()) {
    const Bitstream b = encode_image(img, QuantizerConfig(q), cb);
    const double rate = static_cast<double>(b.serialized_size());
    const double p = psnr(img, decode_image(b, cb));
    EXPECT_GT(rate, prev_rate) << "q" << q;
    EXPECT_GE(p, prev_psnr) << "q" << q;
    prev_rate = rate;
    prev_psnr = p;
  }
}

TEST(BaselineCodecTest, DimensionsPreserved) {
  const auto& cb = default_token_codebooks();
  for (auto [w, h] : {std::pair{8, 8}, {13, 21}, {64, 40}, {1, 1}, {100, 3}}) {
    const Image img = photo_like_image(w, h, w * 31 + h);
    for (int q : {1, 10, 50, 90, 100}) {
      const Image back = decode_image(encode_image(img, QuantizerConfig(q), cb), cb);
      EXPECT_EQ(back.width(), w);
      EXPECT_EQ(back.height(), h);
    }
  }
}

TEST(BaselineCodecTest, HeaderAndIds) {
  const auto& cb = default_token_codebooks();
  const Bitstream b = encode_image(Image(16, 8), QuantizerConfig(42), cb);
  EXPECT_EQ(b.codec(), CodecId::kBaselineDct);
  EXPECT_EQ(b.codebook_id(), cb.id());
  BitReader r(b.payload(), b.payload_bit_length());
  EXPECT_EQ(r.read_bits(8), 42u);
  EXPECT_EQ(r.read_bits(16), 16u);
  EXPECT_EQ(r.read_bits(16), 8u);
}

TEST(BaselineCodecTest, ErrorClasses) {
  const auto& cb = default_token_codebooks();
  const Image img = photo_like_image(32, 32, 1);
  const Bitstream b = encode_image(img, QuantizerConfig(50), cb);

  const std::size_t half = b.payload().size() / 2;
  const Bitstream truncated(b.codec(), b.codebook_id(), static_cast<std::uint32_t>(half * 8),
                            std::vector<std::uint8_t>(b.payload().begin(),
                                                      b.payload().begin() + half));
  EXPECT_EQ(CodeOf([&] { decode_image(truncated, cb); }), ErrorCode::kFormat);

  const Bitstream wrong_id(b.codec(), b.codebook_id() + 1, b.payload_bit_length(),
                           std::vector<std::uint8_t>(b.payload().begin(), b.payload().end()));
  EXPECT_EQ(CodeOf([&] { decode_image(wrong_id, cb); }), ErrorCode::kWrongCodebook);

  const Bitstream text(CodecId::kCmcText, b.codebook_id(), b.payload_bit_length(),
                       std::vector<std::uint8_t>(b.payload().begin(), b.payload().end()));
  EXPECT_EQ(CodeOf([&] { decode_image(text, cb); }), ErrorCode::kUnsupportedCodec);

  EXPECT_EQ(CodeOf([&] { decode_image(b, QuantizerConfig(60), cb); }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(decode_image(b, QuantizerConfig(50), cb), decode_image(b, cb));
}

TEST(BaselineCodecTest, GarbledStreamsFailCleanly) {
  const auto& cb = default_token_codebooks();
  const Bitstream b = encode_image(photo_like_image(32, 32, 2), QuantizerConfig(50), cb);
  Rng rng(4);
  for (int i = 0; i < 300; ++i) {
    std::vector<std::uint8_t> payload(b.payload().begin(), b.payload().end());
    const std::size_t pos = 5 + rng.below(payload.size() - 6);
    payload[pos] ^= static_cast<std::uint8_t>(1u << rng.below(8));
    const Bitstream garbled(b.codec(), b.codebook_id(), static_cast<std::uint32_t>(payload.size() * 8),
                            payload);
    try {
      const Image img = decode_image(garbled, cb);
      EXPECT_EQ(img.width(), 32);
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kFormat);
    }
  }
}

TEST(TokenCodebooksTest, DefaultIsDeterministic) {
  const auto corpus = calibration_corpus();
  ASSERT_EQ(corpus.size(), 10u);
  const auto grid = default_quality_grid();
  EXPECT_EQ(train_token_codebooks(corpus, grid).id(), default_token_codebooks().id());
  EXPECT_EQ(calibration_corpus(), corpus);
}

}  // namespace
}  // namespace cmc
