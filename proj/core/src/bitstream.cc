#include "cmc/bitstream.h"

#include <algorithm>
#include <array>
#include <string>
#include <utility>

#include "cmc/error.h"

namespace cmc {
namespace {

constexpr std::array<std::uint8_t, 4> kMagic = {'C', 'M', 'C', '1'};

std::size_t bytes_for_bits(std::uint64_t bits) { return (bits + 7) / 8; }

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(std::span<const std::uint8_t> in, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(in[at + i]) << (8 * i);
  return v;
}

// Mask of the bits in the final byte that lie beyond the bit length.
std::uint8_t padding_mask(std::uint32_t bit_length) {
  const unsigned used = bit_length % 8;
  return used == 0 ? 0 : static_cast<std::uint8_t>(0xFFu >> used);
}

}  // namespace

Bitstream::Bitstream(CodecId codec, std::uint32_t codebook_id,
                     std::uint32_t payload_bit_length,
                     std::vector<std::uint8_t> payload)
    : codec_(codec),
      codebook_id_(codebook_id),
      bit_length_(payload_bit_length),
      payload_(std::move(payload)) {
  if (payload_.size() != bytes_for_bits(bit_length_)) {
    throw Error(ErrorCode::kInvalidArgument,
                "payload holds " + std::to_string(payload_.size()) +
                    " bytes but bit length " + std::to_string(bit_length_) +
                    " needs " + std::to_string(bytes_for_bits(bit_length_)));
  }
  if (!payload_.empty() && (payload_.back() & padding_mask(bit_length_)) != 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "padding bits after the payload bit length must be zero");
  }
}

std::vector<std::uint8_t> serialize_bitstream(const Bitstream& bitstream) {
  std::vector<std::uint8_t> out(kMagic.begin(), kMagic.end());
  out.reserve(bitstream.serialized_size());
  out.push_back(kContainerVersion);
  out.push_back(static_cast<std::uint8_t>(bitstream.codec()));
  put_u32(out, bitstream.codebook_id());
  put_u32(out, bitstream.payload_bit_length());
  out.insert(out.end(), bitstream.payload().begin(), bitstream.payload().end());
  return out;
}

Bitstream deserialize_bitstream(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kMagic.size() ||
      !std::equal(kMagic.begin(), kMagic.end(), bytes.begin())) {
    throw Error(ErrorCode::kFormat, "bad container magic");
  }
  if (bytes.size() < kContainerHeaderBytes) {
    throw Error(ErrorCode::kTruncation, "container header is truncated");
  }
  if (bytes[4] != kContainerVersion) {
    throw Error(ErrorCode::kFormat,
                "unsupported container version " + std::to_string(bytes[4]));
  }
  const std::uint8_t codec = bytes[5];
  if (codec > static_cast<std::uint8_t>(CodecId::kBaselineDct)) {
    throw Error(ErrorCode::kUnsupportedCodec,
                "unknown codec id " + std::to_string(codec));
  }
  const std::uint32_t codebook_id = get_u32(bytes, 6);
  const std::uint32_t bit_length = get_u32(bytes, 10);
  const std::size_t need = bytes_for_bits(bit_length);
  const std::size_t have = bytes.size() - kContainerHeaderBytes;
  if (have < need) {
    throw Error(ErrorCode::kTruncation,
                "payload claims " + std::to_string(bit_length) + " bits but only " +
                    std::to_string(have) + " bytes are present");
  }
  if (have > need) {
    throw Error(ErrorCode::kFormat, "unexpected bytes after the payload");
  }
  std::vector<std::uint8_t> payload(bytes.begin() + kContainerHeaderBytes,
                                    bytes.end());
  if (!payload.empty() && (payload.back() & padding_mask(bit_length)) != 0) {
    throw Error(ErrorCode::kFormat, "nonzero padding bits after the payload");
  }
  return Bitstream(static_cast<CodecId>(codec), codebook_id, bit_length,
                   std::move(payload));
}

}  // namespace cmc
