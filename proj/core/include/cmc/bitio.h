#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace cmc {

// MSB-first bit packing: the first bit written lands in bit 7 of byte 0.
class BitWriter {
 public:
  void write_bit(bool bit);
  // Writes the low `count` bits of `value`, most significant first.
  void write_bits(std::uint64_t value, unsigned count);

  std::size_t bit_length() const noexcept { return bit_length_; }
  const std::vector<std::uint8_t>& bytes() const noexcept { return bytes_; }
  std::vector<std::uint8_t> take_bytes() && { return std::move(bytes_); }

 private:
  std::vector<std::uint8_t> bytes_;
  std::size_t bit_length_ = 0;
};

// Reads at most `bit_length` bits. Reading past the end throws
// Error(kTruncation).
class BitReader {
 public:
  BitReader(std::span<const std::uint8_t> bytes, std::size_t bit_length);

  bool read_bit();
  std::uint64_t read_bits(unsigned count);

  std::size_t position() const noexcept { return position_; }
  std::size_t remaining() const noexcept { return bit_length_ - position_; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t bit_length_;
  std::size_t position_ = 0;
};

}  // namespace cmc
