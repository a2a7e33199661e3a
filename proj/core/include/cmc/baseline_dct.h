#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "cmc/bitstream.h"
#include "cmc/entropy.h"
#include "cmc/image.h"

namespace cmc {

using Block = std::array<double, 64>;  // row-major 8x8

// Orthonormal 2-D DCT-II and its inverse.
Block dct8x8_forward(const Block& samples);
Block dct8x8_inverse(const Block& coefficients);

// zigzag_order()[k] is the row-major index of the k-th coefficient in scan
// order.
const std::array<std::uint8_t, 64>& zigzag_order();

// Effective step = clamp(round(base * scale(q)), 1, 255) with
// scale(q) = 50 / q below 50 and (100 - q) / 50 otherwise.
class QuantizerConfig {
 public:
  explicit QuantizerConfig(int quality);  // 1..100, else kInvalidArgument

  int quality() const noexcept { return quality_; }
  const std::array<std::uint16_t, 64>& steps() const noexcept { return steps_; }

  // Conventional JPEG luminance table, row-major.
  static const std::array<std::uint16_t, 64>& base_table();

 private:
  int quality_;
  std::array<std::uint16_t, 64> steps_{};
};

// Huffman codes for the token alphabet. DC symbols are magnitude
// categories of the DC difference; AC symbols are (run << 4) | category,
// with 0x00 as end-of-block and 0xF0 as a run of sixteen zeros.
struct TokenCodebooks {
  Codebook dc;
  Codebook ac;

  // Identifier recorded in the container's codebook_id field.
  std::uint32_t id() const;
};

TokenCodebooks train_token_codebooks(std::span<const Image> images,
                                     std::span<const int> qualities);

// Token codebooks trained on calibration_corpus() over the default quality
// grid. Computed once; deterministic.
const TokenCodebooks& default_token_codebooks();

// Default sweep grid: 10, 20, ..., 90.
std::vector<int> default_quality_grid();

// Smooth gradients, oriented waves, hard-edged blobs and mild noise.
Image photo_like_image(int width, int height, std::uint64_t seed);

// The fixed ten-image calibration corpus (128x128).
std::vector<Image> calibration_corpus();

// Payload layout, MSB-first: quality u8 | width u16 | height u16, then
// channels r, g, b in turn, each as its blocks in raster order. A block is
// the DC category symbol + DC difference bits followed by AC tokens up to
// end-of-block. Sizes that are not multiples of 8 are padded by edge
// replication and cropped on decode.
Bitstream encode_image(const Image& image, const QuantizerConfig& config,
                       const TokenCodebooks& codebooks);

// Errors: kUnsupportedCodec, kWrongCodebook, kInvalidArgument (quality
// differs from `config`), kFormat (malformed or truncated token stream).
Image decode_image(const Bitstream& bitstream, const QuantizerConfig& config,
                   const TokenCodebooks& codebooks);
// Same, taking the quality from the payload header.
Image decode_image(const Bitstream& bitstream, const TokenCodebooks& codebooks);

}  // namespace cmc
