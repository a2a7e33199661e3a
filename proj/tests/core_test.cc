#include <cmath>
#include <cstdint>
#include <vector>

#include <gtest/gtest.h>

#include "cmc/bitio.h"
#include "cmc/bitstream.h"
#include "cmc/error.h"
#include "cmc/image.h"
#include "cmc/ppm.h"
#include "cmc/random.h"
#include "cmc/rate.h"
#include "test_util.h"

namespace cmc {
namespace {

using ::cmc::testing::CodeOf;

TEST(CompressionRatioTest, Examples) {
  EXPECT_NEAR(compression_ratio(256, 256, 36.69), 5358.6, 0.1);
  EXPECT_NEAR(compression_ratio(256, 256, 36.69), 5358.6263, 1e-4);
  EXPECT_DOUBLE_EQ(compression_ratio(256, 256, 196608), 1.0);
  EXPECT_DOUBLE_EQ(compression_ratio(8, 8, 96), 2.0);
}

TEST(CompressionRatioTest, DecreasesWithSize) {
  double prev = compression_ratio(64, 64, 1.0);
  for (double bytes = 2.0; bytes < 1000.0; bytes *= 1.7) {
    const double r = compression_ratio(64, 64, bytes);
    EXPECT_LT(r, prev);
    prev = r;
  }
}

TEST(CompressionRatioTest, RejectsNonPositive) {
  EXPECT_EQ(CodeOf([] { compression_ratio(256, 256, 0.0); }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(CodeOf([] { compression_ratio(0, 256, 10.0); }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(CodeOf([] { make_rd_point(0.0, 1.0, "psnr", "cmc"); }),
            ErrorCode::kInvalidArgument);
}

TEST(BitsPerPixelTest, Basic) {
  EXPECT_DOUBLE_EQ(bits_per_pixel(8, 8, 8), 1.0);
}

TEST(BitWriterTest, MsbFirst) {
  BitWriter w;
  w.write_bits(0b101, 3);
  EXPECT_EQ(w.bit_length(), 3u);
  ASSERT_EQ(w.bytes().size(), 1u);
  EXPECT_EQ(w.bytes()[0], 0b10100000);
}

TEST(BitReaderTest, TruncationIsReported) {
  const std::vector<std::uint8_t> bytes = {0xFF};
  BitReader r(bytes, 5);
  EXPECT_EQ(r.read_bits(5), 0b11111u);
  EXPECT_EQ(CodeOf([&] { r.read_bit(); }), ErrorCode::kTruncation);
}

TEST(BitstreamTest, EmptyPayloadHeader) {
  const Bitstream b(CodecId::kCmcText, 7, 0, {});
  const auto bytes = serialize_bitstream(b);
  const std::vector<std::uint8_t> expected = {'C', 'M', 'C', '1', 1, 0, 7, 0,
                                              0,   0,   0,   0,   0, 0};
  EXPECT_EQ(bytes, expected);
  EXPECT_EQ(b.serialized_size(), 14u);
}

TEST(BitstreamTest, ThreeBitPayload) {
  BitWriter w;
  w.write_bit(true);
  w.write_bit(false);
  w.write_bit(true);
  const Bitstream b(CodecId::kCmcText, 1, 3, std::move(w).take_bytes());
  const auto bytes = serialize_bitstream(b);
  ASSERT_EQ(bytes.size(), 15u);
  EXPECT_EQ(bytes.back(), 0b10100000);
}

TEST(BitstreamTest, RandomRoundTrip) {
  Rng rng(42);
  for (int trial = 0; trial < 50; ++trial) {
    BitWriter w;
    for (int i = 0; i < 1000; ++i) w.write_bit(rng.below(2));
    const Bitstream b(trial % 2 ? CodecId::kBaselineDct : CodecId::kCmcText,
                      static_cast<std::uint32_t>(rng.next()), 1000,
                      std::move(w).take_bytes());
    const auto bytes = serialize_bitstream(b);
    EXPECT_EQ(bytes.size(), 14u + 125u);
    EXPECT_EQ(deserialize_bitstream(bytes), b);
  }
}

TEST(BitstreamTest, SizeIsHeaderPlusCeilBytes) {
  for (std::uint32_t bits = 0; bits < 40; ++bits) {
    BitWriter w;
    for (std::uint32_t i = 0; i < bits; ++i) w.write_bit(i % 3 == 0);
    const Bitstream b(CodecId::kCmcText, 0, bits, std::move(w).take_bytes());
    EXPECT_EQ(serialize_bitstream(b).size(), 14u + (bits + 7) / 8);
  }
}

TEST(BitstreamTest, ConstructorValidatesPayload) {
  EXPECT_EQ(CodeOf([] { Bitstream(CodecId::kCmcText, 0, 9, {0xFF}); }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(CodeOf([] { Bitstream(CodecId::kCmcText, 0, 3, {0xFF}); }),
            ErrorCode::kInvalidArgument);
}

TEST(BitstreamTest, DeserializeErrors) {
  const Bitstream b(CodecId::kCmcText, 5, 8, {0x5A});
  const auto good = serialize_bitstream(b);

  auto bad_magic = good;
  bad_magic[0] = 'X';
  EXPECT_EQ(CodeOf([&] { deserialize_bitstream(bad_magic); }), ErrorCode::kFormat);

  auto bad_version = good;
  bad_version[4] = 2;
  EXPECT_EQ(CodeOf([&] { deserialize_bitstream(bad_version); }), ErrorCode::kFormat);

  auto bad_codec = good;
  bad_codec[5] = 9;
  EXPECT_EQ(CodeOf([&] { deserialize_bitstream(bad_codec); }),
            ErrorCode::kUnsupportedCodec);

  auto trailing = good;
  trailing.push_back(0);
  EXPECT_EQ(CodeOf([&] { deserialize_bitstream(trailing); }), ErrorCode::kFormat);

  const std::vector<std::uint8_t> short_header(good.begin(), good.begin() + 10);
  EXPECT_EQ(CodeOf([&] { deserialize_bitstream(short_header); }), ErrorCode::kTruncation);
}

TEST(BitstreamTest, ClaimedLengthBeyondPayloadIsTruncation) {
  const Bitstream b(CodecId::kCmcText, 0, 32, {1, 2, 3, 4});
  auto bytes = serialize_bitstream(b);
  bytes[10] = 64;  // bit-length field, low byte
  EXPECT_EQ(CodeOf([&] { deserialize_bitstream(bytes); }), ErrorCode::kTruncation);
}

TEST(BitstreamTest, NonzeroPaddingIsFormatError) {
  const Bitstream b(CodecId::kCmcText, 0, 3, {0xA0});
  auto bytes = serialize_bitstream(b);
  bytes.back() |= 0x01;
  EXPECT_EQ(CodeOf([&] { deserialize_bitstream(bytes); }), ErrorCode::kFormat);
}

TEST(PpmTest, RoundTrip) {
  Rng rng(3);
  std::vector<Rgb> pixels(13 * 7);
  for (auto& p : pixels) {
    p = {static_cast<std::uint8_t>(rng.below(256)), static_cast<std::uint8_t>(rng.below(256)),
         static_cast<std::uint8_t>(rng.below(256))};
  }
  const Image img(13, 7, pixels);
  EXPECT_EQ(decode_ppm(encode_ppm(img)), img);
}

TEST(PpmTest, RejectsMalformed) {
  const std::string text = "P5\n2 2\n255\n";
  const std::vector<std::uint8_t> bytes(text.begin(), text.end());
  EXPECT_EQ(CodeOf([&] { decode_ppm(bytes); }), ErrorCode::kFormat);
  auto truncated = encode_ppm(Image(4, 4));
  truncated.pop_back();
  EXPECT_EQ(CodeOf([&] { decode_ppm(truncated); }), ErrorCode::kTruncation);
}

TEST(ImageTest, RejectsBadDimensions) {
  EXPECT_EQ(CodeOf([] { Image(0, 4); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(CodeOf([] { Image(2, 2, std::vector<Rgb>(3)); }),
            ErrorCode::kInvalidArgument);
}

}  // namespace
}  // namespace cmc
