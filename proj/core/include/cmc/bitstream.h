#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace cmc {

enum class CodecId : std::uint8_t {
  kCmcText = 0,
  kBaselineDct = 1,
};

// Container layout (multi-byte fields little-endian):
//   "CMC1" | version u8 = 1 | codec_id u8 | codebook_id u32 |
//   payload_bit_length u32 | payload bytes (MSB-first bit packing)
inline constexpr std::size_t kContainerHeaderBytes = 14;
inline constexpr std::uint8_t kContainerVersion = 1;

class Bitstream {
 public:
  // Throws Error(kInvalidArgument) unless payload.size() ==
  // ceil(bit_length / 8) and the unused low bits of the last byte are zero.
  Bitstream(CodecId codec, std::uint32_t codebook_id,
            std::uint32_t payload_bit_length,
            std::vector<std::uint8_t> payload);

  CodecId codec() const noexcept { return codec_; }
  std::uint32_t codebook_id() const noexcept { return codebook_id_; }
  std::uint32_t payload_bit_length() const noexcept { return bit_length_; }
  std::span<const std::uint8_t> payload() const noexcept { return payload_; }

  // Size of the serialized container in bytes.
  std::size_t serialized_size() const noexcept {
    return kContainerHeaderBytes + payload_.size();
  }

  friend bool operator==(const Bitstream&, const Bitstream&) = default;

 private:
  CodecId codec_;
  std::uint32_t codebook_id_;
  std::uint32_t bit_length_;
  std::vector<std::uint8_t> payload_;
};

std::vector<std::uint8_t> serialize_bitstream(const Bitstream& bitstream);

// Errors: kFormat (bad magic, version, padding or trailing bytes),
// kTruncation (input shorter than the header, or fewer payload bytes than
// the bit length implies),
// kUnsupportedCodec (unknown codec id).
Bitstream deserialize_bitstream(std::span<const std::uint8_t> bytes);

}  // namespace cmc
