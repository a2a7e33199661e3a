#include "cmc/baseline_dct.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "cmc/bitio.h"
#include "cmc/error.h"
#include "cmc/random.h"

namespace cmc {
namespace {

constexpr int kN = 8;
constexpr unsigned kEndOfBlock = 0x00;
constexpr unsigned kZeroRun16 = 0xF0;
constexpr unsigned kMaxCategory = 15;
constexpr int kMaxDimension = 65535;

// basis[u][x] = c(u) cos((2x + 1) u pi / 16), c(0) = sqrt(1/8), else 1/2.
const std::array<std::array<double, kN>, kN>& basis() {
  static const auto table = [] {
    std::array<std::array<double, kN>, kN> t{};
    for (int u = 0; u < kN; ++u) {
      const double c = u == 0 ? std::sqrt(1.0 / kN) : std::sqrt(2.0 / kN);
      for (int x = 0; x < kN; ++x) {
        t[u][x] = c * std::cos((2 * x + 1) * u * std::numbers::pi / (2 * kN));
      }
    }
    return t;
  }();
  return table;
}

// Separable transform: rows then columns.
Block transform(const Block& in, bool forward) {
  const auto& b = basis();
  Block tmp{}, out{};
  for (int r = 0; r < kN; ++r) {
    for (int k = 0; k < kN; ++k) {
      double acc = 0;
      for (int n = 0; n < kN; ++n) {
        acc += in[r * kN + n] * (forward ? b[k][n] : b[n][k]);
      }
      tmp[r * kN + k] = acc;
    }
  }
  for (int c = 0; c < kN; ++c) {
    for (int k = 0; k < kN; ++k) {
      double acc = 0;
      for (int n = 0; n < kN; ++n) {
        acc += tmp[n * kN + c] * (forward ? b[k][n] : b[n][k]);
      }
      out[k * kN + c] = acc;
    }
  }
  return out;
}

unsigned category(int value) {
  unsigned magnitude = static_cast<unsigned>(std::abs(value));
  unsigned bits = 0;
  while (magnitude != 0) {
    ++bits;
    magnitude >>= 1;
  }
  return bits;
}

// JPEG-style amplitude bits: negative values are stored as value + 2^n - 1.
std::uint64_t amplitude_bits(int value, unsigned n) {
  return value >= 0 ? static_cast<std::uint64_t>(value)
                    : static_cast<std::uint64_t>(value + (1 << n) - 1);
}

int amplitude_value(std::uint64_t bits, unsigned n) {
  if (n == 0) return 0;
  if (bits >> (n - 1)) return static_cast<int>(bits);
  return static_cast<int>(bits) - (1 << n) + 1;
}

// Quantized coefficient blocks of one channel, in raster block order, from
// the edge-replicated padded image.
std::vector<std::array<int, 64>> quantize_channel(const Image& image, int channel,
                                                  const QuantizerConfig& config) {
  const int bx = (image.width() + kN - 1) / kN;
  const int by = (image.height() + kN - 1) / kN;
  std::vector<std::array<int, 64>> blocks;
  blocks.reserve(static_cast<std::size_t>(bx) * by);
  for (int j = 0; j < by; ++j) {
    for (int i = 0; i < bx; ++i) {
      Block samples{};
      for (int y = 0; y < kN; ++y) {
        const int sy = std::min(j * kN + y, image.height() - 1);
        for (int x = 0; x < kN; ++x) {
          const int sx = std::min(i * kN + x, image.width() - 1);
          samples[y * kN + x] = image.sample(sx, sy, channel) - 128.0;
        }
      }
      const Block coeffs = dct8x8_forward(samples);
      std::array<int, 64> q{};
      for (int k = 0; k < 64; ++k) {
        q[k] = static_cast<int>(std::round(coeffs[k] / config.steps()[k]));
      }
      blocks.push_back(q);
    }
  }
  return blocks;
}

// Walks the token sequence of an image. The visitor receives
// (is_dc, symbol, amplitude_bits, amplitude_bit_count).
template <typename Visitor>
void tokenize(const Image& image, const QuantizerConfig& config, Visitor&& visit) {
  const auto& zz = zigzag_order();
  for (int channel = 0; channel < 3; ++channel) {
    int previous_dc = 0;
    for (const auto& q : quantize_channel(image, channel, config)) {
      const int diff = q[0] - previous_dc;
      previous_dc = q[0];
      const unsigned dc_cat = category(diff);
      visit(true, dc_cat, amplitude_bits(diff, dc_cat), dc_cat);

      int run = 0;
      for (int k = 1; k < 64; ++k) {
        const int v = q[zz[k]];
        if (v == 0) {
          ++run;
          continue;
        }
        while (run >= 16) {
          visit(false, kZeroRun16, 0, 0);
          run -= 16;
        }
        const unsigned cat = category(v);
        visit(false, (static_cast<unsigned>(run) << 4) | cat, amplitude_bits(v, cat), cat);
        run = 0;
      }
      if (run > 0) visit(false, kEndOfBlock, 0, 0);
    }
  }
}

void check_encodable(const Image& image) {
  if (image.width() > kMaxDimension || image.height() > kMaxDimension) {
    throw Error(ErrorCode::kInvalidArgument, "image dimensions exceed 65535");
  }
}

struct Header {
  int quality;
  int width;
  int height;
};

Header read_header(BitReader& in) {
  Header h{};
  h.quality = static_cast<int>(in.read_bits(8));
  h.width = static_cast<int>(in.read_bits(16));
  h.height = static_cast<int>(in.read_bits(16));
  if (h.quality < 1 || h.quality > 100 || h.width == 0 || h.height == 0) {
    throw Error(ErrorCode::kFormat, "invalid baseline payload header");
  }
  return h;
}

Image decode_payload(BitReader& in, const Header& header,
                     const TokenCodebooks& codebooks) {
  const QuantizerConfig config(header.quality);
  const auto& zz = zigzag_order();
  const int bx = (header.width + kN - 1) / kN;
  const int by = (header.height + kN - 1) / kN;
  Image image(header.width, header.height);

  for (int channel = 0; channel < 3; ++channel) {
    int previous_dc = 0;
    for (int j = 0; j < by; ++j) {
      for (int i = 0; i < bx; ++i) {
        std::array<int, 64> q{};
        const unsigned dc_cat = codebooks.dc.read_symbol(in);
        if (dc_cat > kMaxCategory) throw Error(ErrorCode::kFormat, "bad DC symbol");
        previous_dc += amplitude_value(in.read_bits(dc_cat), dc_cat);
        q[0] = previous_dc;
        for (int k = 1; k < 64;) {
          const unsigned symbol = codebooks.ac.read_symbol(in);
          if (symbol == kEndOfBlock) break;
          if (symbol > 0xFF) throw Error(ErrorCode::kFormat, "bad AC symbol");
          const unsigned run = symbol >> 4;
          const unsigned cat = symbol & 0x0F;
          if (cat == 0 && symbol != kZeroRun16) {
            throw Error(ErrorCode::kFormat, "bad AC symbol");
          }
          k += static_cast<int>(run);
          if (symbol == kZeroRun16) {
            k += 1;
            if (k >= 64) throw Error(ErrorCode::kFormat, "zero run past block end");
            continue;
          }
          if (k >= 64) throw Error(ErrorCode::kFormat, "AC run past block end");
          q[zz[k]] = amplitude_value(in.read_bits(cat), cat);
          ++k;
        }

        Block coeffs{};
        for (int k = 0; k < 64; ++k) {
          coeffs[k] = static_cast<double>(q[k]) * config.steps()[k];
        }
        const Block samples = dct8x8_inverse(coeffs);
        for (int y = 0; y < kN; ++y) {
          for (int x = 0; x < kN; ++x) {
            const int px = i * kN + x, py = j * kN + y;
            if (px >= header.width || py >= header.height) continue;
            const double v = std::clamp(std::round(samples[y * kN + x] + 128.0), 0.0, 255.0);
            Rgb& p = image.at(px, py);
            (channel == 0 ? p.r : channel == 1 ? p.g : p.b) = static_cast<std::uint8_t>(v);
          }
        }
      }
    }
  }
  if (in.remaining() != 0) {
    throw Error(ErrorCode::kFormat, "unexpected bits after the last block");
  }
  return image;
}

}  // namespace

Block dct8x8_forward(const Block& samples) { return transform(samples, true); }
Block dct8x8_inverse(const Block& coefficients) { return transform(coefficients, false); }

const std::array<std::uint8_t, 64>& zigzag_order() {
  static const auto order = [] {
    std::array<std::uint8_t, 64> z{};
    int index = 0;
    for (int s = 0; s < 2 * kN - 1; ++s) {
      // Odd diagonals run top-right to bottom-left, even ones the reverse.
      for (int i = 0; i < kN; ++i) {
        const int row = (s % 2 == 0) ? s - i : i;
        const int col = s - row;
        if (row < 0 || row >= kN || col < 0 || col >= kN) continue;
        z[index++] = static_cast<std::uint8_t>(row * kN + col);
      }
    }
    return z;
  }();
  return order;
}

const std::array<std::uint16_t, 64>& QuantizerConfig::base_table() {
  static constexpr std::array<std::uint16_t, 64> kLuminance = {
      16, 11, 10, 16, 24,  40,  51,  61,   //
      12, 12, 14, 19, 26,  58,  60,  55,   //
      14, 13, 16, 24, 40,  57,  69,  56,   //
      14, 17, 22, 29, 51,  87,  80,  62,   //
      18, 22, 37, 56, 68,  109, 103, 77,   //
      24, 35, 55, 64, 81,  104, 113, 92,   //
      49, 64, 78, 87, 103, 121, 120, 101,  //
      72, 92, 95, 98, 112, 100, 103, 99};
  return kLuminance;
}

QuantizerConfig::QuantizerConfig(int quality) : quality_(quality) {
  if (quality < 1 || quality > 100) {
    throw Error(ErrorCode::kInvalidArgument,
                "quality must be in 1..100, got " + std::to_string(quality));
  }
  const double scale = quality < 50 ? 50.0 / quality : (100.0 - quality) / 50.0;
  for (int k = 0; k < 64; ++k) {
    const double step = std::round(base_table()[k] * scale);
    steps_[k] = static_cast<std::uint16_t>(std::clamp(step, 1.0, 255.0));
  }
}

std::uint32_t TokenCodebooks::id() const {
  std::array<std::uint8_t, 8> bytes{};
  for (int i = 0; i < 4; ++i) {
    bytes[i] = static_cast<std::uint8_t>(dc.id() >> (8 * i));
    bytes[4 + i] = static_cast<std::uint8_t>(ac.id() >> (8 * i));
  }
  return fnv1a32(bytes);
}

TokenCodebooks train_token_codebooks(std::span<const Image> images,
                                     std::span<const int> qualities) {
  SymbolCounts dc, ac;
  dc.fill(1);
  ac.fill(1);
  for (const Image& image : images) {
    for (int q : qualities) {
      tokenize(image, QuantizerConfig(q),
               [&](bool is_dc, unsigned symbol, std::uint64_t, unsigned) {
                 ++(is_dc ? dc : ac)[symbol];
               });
    }
  }
  return {Codebook::from_counts(dc), Codebook::from_counts(ac)};
}

const TokenCodebooks& default_token_codebooks() {
  static const TokenCodebooks codebooks = [] {
    const auto corpus = calibration_corpus();
    const auto grid = default_quality_grid();
    return train_token_codebooks(corpus, grid);
  }();
  return codebooks;
}

std::vector<int> default_quality_grid() {
  return {10, 20, 30, 40, 50, 60, 70, 80, 90};
}

Image photo_like_image(int width, int height, std::uint64_t seed) {
  Rng rng(seed);
  struct Wave {
    double fx, fy, phase, amp;
  };
  std::array<double, 3> base{}, gx{}, gy{};
  std::array<std::array<Wave, 3>, 3> waves{};
  for (int c = 0; c < 3; ++c) {
    base[c] = rng.uniform(60, 190);
    gx[c] = rng.uniform(-60, 60) / width;
    gy[c] = rng.uniform(-60, 60) / height;
    for (auto& w : waves[c]) {
      w = {rng.uniform(0.01, 0.25), rng.uniform(0.01, 0.25),
           rng.uniform(0, 2 * std::numbers::pi), rng.uniform(5, 30)};
    }
  }
  struct Blob {
    double cx, cy, rx, ry;
    std::array<double, 3> color;
  };
  std::vector<Blob> blobs(4);
  for (auto& b : blobs) {
    b = {rng.uniform(0, width), rng.uniform(0, height), rng.uniform(6, width / 4.0),
         rng.uniform(6, height / 4.0),
         {rng.uniform(0, 255), rng.uniform(0, 255), rng.uniform(0, 255)}};
  }

  Image image(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      std::array<double, 3> v{};
      for (int c = 0; c < 3; ++c) {
        v[c] = base[c] + gx[c] * x + gy[c] * y;
        for (const Wave& w : waves[c]) v[c] += w.amp * std::sin(w.fx * x + w.fy * y + w.phase);
      }
      for (const Blob& b : blobs) {
        const double dx = (x - b.cx) / b.rx, dy = (y - b.cy) / b.ry;
        if (dx * dx + dy * dy <= 1.0) {
          for (int c = 0; c < 3; ++c) v[c] = 0.3 * v[c] + 0.7 * b.color[c];
        }
      }
      const double noise = rng.uniform(-6, 6);
      auto to_u8 = [](double s) {
        return static_cast<std::uint8_t>(std::clamp(std::round(s), 0.0, 255.0));
      };
      image.at(x, y) = {to_u8(v[0] + noise), to_u8(v[1] + noise), to_u8(v[2] + noise)};
    }
  }
  return image;
}

std::vector<Image> calibration_corpus() {
  std::vector<Image> corpus;
  for (std::uint64_t i = 0; i < 10; ++i) {
    corpus.push_back(photo_like_image(128, 128, 0xC0FFEE + i));
  }
  return corpus;
}

Bitstream encode_image(const Image& image, const QuantizerConfig& config,
                       const TokenCodebooks& codebooks) {
  check_encodable(image);
  BitWriter out;
  out.write_bits(static_cast<std::uint64_t>(config.quality()), 8);
  out.write_bits(static_cast<std::uint64_t>(image.width()), 16);
  out.write_bits(static_cast<std::uint64_t>(image.height()), 16);
  tokenize(image, config,
           [&](bool is_dc, unsigned symbol, std::uint64_t bits, unsigned nbits) {
             (is_dc ? codebooks.dc : codebooks.ac).write_symbol(out, symbol);
             out.write_bits(bits, nbits);
           });
  if (out.bit_length() > UINT32_MAX) {
    throw Error(ErrorCode::kInvalidArgument, "encoded image exceeds 2^32 bits");
  }
  return Bitstream(CodecId::kBaselineDct, codebooks.id(),
                   static_cast<std::uint32_t>(out.bit_length()),
                   std::move(out).take_bytes());
}

Image decode_image(const Bitstream& bitstream, const QuantizerConfig& config,
                   const TokenCodebooks& codebooks) {
  if (bitstream.codec() != CodecId::kBaselineDct) {
    throw Error(ErrorCode::kUnsupportedCodec, "not a baseline DCT bitstream");
  }
  if (bitstream.codebook_id() != codebooks.id()) {
    throw Error(ErrorCode::kWrongCodebook, "token codebook mismatch");
  }
  BitReader in(bitstream.payload(), bitstream.payload_bit_length());
  try {
    const Header header = read_header(in);
    if (header.quality != config.quality()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "stream quality " + std::to_string(header.quality) +
                      " differs from configured quality " +
                      std::to_string(config.quality()));
    }
    return decode_payload(in, header, codebooks);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kTruncation) {
      throw Error(ErrorCode::kFormat, std::string("truncated token stream: ") + e.what());
    }
    throw;
  }
}

Image decode_image(const Bitstream& bitstream, const TokenCodebooks& codebooks) {
  if (bitstream.codec() != CodecId::kBaselineDct) {
    throw Error(ErrorCode::kUnsupportedCodec, "not a baseline DCT bitstream");
  }
  BitReader in(bitstream.payload(), bitstream.payload_bit_length());
  try {
    return decode_image(bitstream, QuantizerConfig(read_header(in).quality), codebooks);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kTruncation) {
      throw Error(ErrorCode::kFormat, std::string("truncated token stream: ") + e.what());
    }
    throw;
  }
}

}  // namespace cmc
