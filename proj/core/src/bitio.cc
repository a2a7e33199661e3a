#include "cmc/bitio.h"

#include "cmc/error.h"

namespace cmc {

void BitWriter::write_bit(bool bit) {
  const std::size_t bit_in_byte = bit_length_ % 8;
  if (bit_in_byte == 0) bytes_.push_back(0);
  if (bit) bytes_.back() |= static_cast<std::uint8_t>(0x80u >> bit_in_byte);
  ++bit_length_;
}

void BitWriter::write_bits(std::uint64_t value, unsigned count) {
  for (unsigned i = count; i-- > 0;) write_bit((value >> i) & 1u);
}

BitReader::BitReader(std::span<const std::uint8_t> bytes,
                     std::size_t bit_length)
    : bytes_(bytes), bit_length_(bit_length) {
  if (bit_length > bytes.size() * 8) {
    throw Error(ErrorCode::kTruncation,
                "bit length exceeds the available payload bytes");
  }
}

bool BitReader::read_bit() {
  if (position_ >= bit_length_) {
    throw Error(ErrorCode::kTruncation, "bitstream exhausted");
  }
  const bool bit = (bytes_[position_ / 8] >> (7 - position_ % 8)) & 1u;
  ++position_;
  return bit;
}

std::uint64_t BitReader::read_bits(unsigned count) {
  std::uint64_t value = 0;
  for (unsigned i = 0; i < count; ++i) value = (value << 1) | read_bit();
  return value;
}

}  // namespace cmc
