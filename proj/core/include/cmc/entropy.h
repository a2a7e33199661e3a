#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cmc/bitio.h"
#include "cmc/bitstream.h"

namespace cmc {

// 256 byte values plus an end-of-text symbol.
inline constexpr std::size_t kAlphabetSize = 257;
inline constexpr unsigned kEndOfText = 256;
inline constexpr unsigned kMaxCodeLength = 64;

using SymbolCounts = std::array<std::uint64_t, kAlphabetSize>;

// Canonical Huffman code over the 257-symbol alphabet. Symbols with a zero
// count get no codeword; trained codebooks are add-one smoothed, so every
// symbol is codable. Immutable after construction.
class Codebook {
 public:
  // Builds the Huffman code for `counts`. Tree ties are broken by the
  // smallest symbol index in each subtree, then codewords are assigned in
  // (length, symbol) order. Throws Error(kInvalidArgument) if fewer than two
  // symbols have nonzero counts, the total overflows, or a codeword would
  // exceed 64 bits.
  static Codebook from_counts(const SymbolCounts& counts);

  const SymbolCounts& counts() const noexcept { return counts_; }
  std::uint64_t total() const noexcept { return total_; }
  // FNV-1a over the little-endian count block.
  std::uint32_t id() const noexcept { return id_; }

  // 0 when the symbol has no codeword.
  unsigned code_length(unsigned symbol) const { return lengths_.at(symbol); }
  std::uint64_t code(unsigned symbol) const { return codes_.at(symbol); }
  bool codable(unsigned symbol) const { return code_length(symbol) != 0; }

  // Throws Error(kInvalidArgument) for a symbol without a codeword.
  void write_symbol(BitWriter& out, unsigned symbol) const;
  // Throws Error(kTruncation) if the input ends mid-codeword.
  unsigned read_symbol(BitReader& in) const;

  friend bool operator==(const Codebook& a, const Codebook& b) {
    return a.counts_ == b.counts_;
  }

 private:
  Codebook() = default;

  SymbolCounts counts_{};
  std::uint64_t total_ = 0;
  std::uint32_t id_ = 0;
  std::array<std::uint8_t, kAlphabetSize> lengths_{};
  std::array<std::uint64_t, kAlphabetSize> codes_{};

  // Canonical decoding tables, indexed by code length.
  std::array<std::uint64_t, kMaxCodeLength + 1> first_code_{};
  std::array<std::uint32_t, kMaxCodeLength + 1> length_count_{};
  std::array<std::uint32_t, kMaxCodeLength + 1> first_index_{};
  std::vector<std::uint16_t> sorted_symbols_;
  unsigned max_length_ = 0;
};

// Counts every byte of every document plus one end-of-text per document,
// then adds one to every symbol.
SymbolCounts count_symbols(std::span<const std::string> documents);
Codebook train_codebook(std::span<const std::string> documents);

// Codewords of every byte followed by the end-of-text codeword.
Bitstream encode_text(std::string_view text, const Codebook& codebook);

// Errors: kUnsupportedCodec (not a caption stream), kWrongCodebook,
// kTruncation (no end-of-text), kTrailingGarbage (bits after end-of-text).
std::string decode_text(const Bitstream& bitstream, const Codebook& codebook);

// Shannon entropy, in bits per symbol, of a count table.
double shannon_entropy(std::span<const std::uint64_t> counts);
double codebook_entropy(const Codebook& codebook);
// Mean codeword length weighted by the codebook's own probabilities.
double expected_code_length(const Codebook& codebook);

std::uint32_t fnv1a32(std::span<const std::uint8_t> bytes);

// Codebook file: "CBK1" | version u8 = 1 | 257 x u64 LE counts | u32 LE id.
std::vector<std::uint8_t> serialize_codebook(const Codebook& codebook);
// Errors: kFormat (magic, version, size, zero-total or id mismatch).
Codebook deserialize_codebook(std::span<const std::uint8_t> bytes);
Codebook read_codebook(const std::filesystem::path& path);
void write_codebook(const std::filesystem::path& path, const Codebook& codebook);

}  // namespace cmc
