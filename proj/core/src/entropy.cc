#include "cmc/entropy.h"

#include <algorithm>
#include <cmath>
#include <queue>
#include <utility>

#include "cmc/error.h"
#include "cmc/ppm.h"

namespace cmc {
namespace {

constexpr std::array<std::uint8_t, 4> kCodebookMagic = {'C', 'B', 'K', '1'};
constexpr std::uint8_t kCodebookVersion = 1;
constexpr std::size_t kCountBlockBytes = kAlphabetSize * 8;
constexpr std::size_t kCodebookFileBytes = 4 + 1 + kCountBlockBytes + 4;
// Keeps sums of all counts far from 64-bit overflow.
constexpr std::uint64_t kMaxTotal = std::uint64_t{1} << 62;

std::vector<std::uint8_t> count_block(const SymbolCounts& counts) {
  std::vector<std::uint8_t> out;
  out.reserve(kCountBlockBytes);
  for (std::uint64_t c : counts) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(c >> (8 * i)));
  }
  return out;
}

struct Node {
  std::uint64_t weight;
  unsigned min_symbol;
  int left = -1;
  int right = -1;
};

// Code length per symbol from a Huffman tree over the nonzero counts.
std::array<unsigned, kAlphabetSize> huffman_lengths(const SymbolCounts& counts) {
  std::vector<Node> nodes;
  using Key = std::pair<std::pair<std::uint64_t, unsigned>, int>;
  std::priority_queue<Key, std::vector<Key>, std::greater<>> heap;
  for (unsigned s = 0; s < kAlphabetSize; ++s) {
    if (counts[s] == 0) continue;
    nodes.push_back({counts[s], s});
    heap.push({{counts[s], s}, static_cast<int>(nodes.size() - 1)});
  }
  // (weight, smallest symbol in subtree) is unique per node, so the merge
  // order does not depend on the heap implementation.
  while (heap.size() > 1) {
    const int a = heap.top().second;
    heap.pop();
    const int b = heap.top().second;
    heap.pop();
    Node parent{nodes[a].weight + nodes[b].weight,
                std::min(nodes[a].min_symbol, nodes[b].min_symbol), a, b};
    nodes.push_back(parent);
    heap.push({{parent.weight, parent.min_symbol}, static_cast<int>(nodes.size() - 1)});
  }

  std::array<unsigned, kAlphabetSize> lengths{};
  std::vector<std::pair<int, unsigned>> stack = {{heap.top().second, 0u}};
  while (!stack.empty()) {
    const auto [index, depth] = stack.back();
    stack.pop_back();
    const Node& n = nodes[index];
    if (n.left < 0) {
      lengths[n.min_symbol] = depth;
    } else {
      stack.push_back({n.left, depth + 1});
      stack.push_back({n.right, depth + 1});
    }
  }
  return lengths;
}

}  // namespace

Codebook Codebook::from_counts(const SymbolCounts& counts) {
  Codebook cb;
  cb.counts_ = counts;
  std::size_t nonzero = 0;
  for (std::uint64_t c : counts) {
    if (c > kMaxTotal - cb.total_) {
      throw Error(ErrorCode::kInvalidArgument, "symbol counts overflow");
    }
    cb.total_ += c;
    nonzero += c != 0;
  }
  if (nonzero < 2) {
    throw Error(ErrorCode::kInvalidArgument,
                "a Huffman code needs at least two symbols with nonzero counts");
  }
  cb.id_ = fnv1a32(count_block(counts));

  const auto lengths = huffman_lengths(counts);
  std::vector<std::uint16_t> order;
  for (unsigned s = 0; s < kAlphabetSize; ++s) {
    if (lengths[s] == 0) continue;
    if (lengths[s] > kMaxCodeLength) {
      throw Error(ErrorCode::kInvalidArgument, "codeword longer than 64 bits");
    }
    order.push_back(static_cast<std::uint16_t>(s));
  }
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
    return lengths[a] < lengths[b];
  });

  // Canonical assignment: consecutive codes within a length, shifting left
  // whenever the length grows.
  std::uint64_t next = 0;
  unsigned current = lengths[order.front()];
  for (std::size_t i = 0; i < order.size(); ++i) {
    const unsigned s = order[i];
    if (lengths[s] != current) {
      next <<= (lengths[s] - current);
      current = lengths[s];
    }
    if (cb.length_count_[current] == 0) {
      cb.first_code_[current] = next;
      cb.first_index_[current] = static_cast<std::uint32_t>(i);
    }
    ++cb.length_count_[current];
    cb.lengths_[s] = static_cast<std::uint8_t>(current);
    cb.codes_[s] = next;
    ++next;
  }
  cb.max_length_ = current;
  cb.sorted_symbols_ = std::move(order);
  return cb;
}

void Codebook::write_symbol(BitWriter& out, unsigned symbol) const {
  const unsigned len = code_length(symbol);
  if (len == 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "symbol " + std::to_string(symbol) + " has no codeword");
  }
  out.write_bits(codes_[symbol], len);
}

unsigned Codebook::read_symbol(BitReader& in) const {
  std::uint64_t code = 0;
  for (unsigned len = 1; len <= max_length_; ++len) {
    code = (code << 1) | in.read_bit();
    const std::uint32_t n = length_count_[len];
    if (n != 0 && code >= first_code_[len] && code - first_code_[len] < n) {
      return sorted_symbols_[first_index_[len] + (code - first_code_[len])];
    }
  }
  // Unreachable for a complete code; kept for codebooks whose counts were
  // built by hand.
  throw Error(ErrorCode::kFormat, "invalid codeword");
}

SymbolCounts count_symbols(std::span<const std::string> documents) {
  SymbolCounts counts;
  counts.fill(1);
  for (const std::string& doc : documents) {
    for (unsigned char c : doc) ++counts[c];
    ++counts[kEndOfText];
  }
  return counts;
}

Codebook train_codebook(std::span<const std::string> documents) {
  return Codebook::from_counts(count_symbols(documents));
}

Bitstream encode_text(std::string_view text, const Codebook& codebook) {
  BitWriter out;
  for (unsigned char c : text) codebook.write_symbol(out, c);
  codebook.write_symbol(out, kEndOfText);
  const auto bits = out.bit_length();
  if (bits > UINT32_MAX) {
    throw Error(ErrorCode::kInvalidArgument, "text too long for one bitstream");
  }
  return Bitstream(CodecId::kCmcText, codebook.id(),
                   static_cast<std::uint32_t>(bits), std::move(out).take_bytes());
}

std::string decode_text(const Bitstream& bitstream, const Codebook& codebook) {
  if (bitstream.codec() != CodecId::kCmcText) {
    throw Error(ErrorCode::kUnsupportedCodec, "not a caption bitstream");
  }
  if (bitstream.codebook_id() != codebook.id()) {
    throw Error(ErrorCode::kWrongCodebook,
                "stream was coded with codebook " +
                    std::to_string(bitstream.codebook_id()) + ", got " +
                    std::to_string(codebook.id()));
  }
  BitReader in(bitstream.payload(), bitstream.payload_bit_length());
  std::string text;
  for (;;) {
    unsigned symbol;
    try {
      symbol = codebook.read_symbol(in);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kTruncation) throw;
      throw Error(ErrorCode::kTruncation, "bitstream ended before end-of-text");
    }
    if (symbol == kEndOfText) break;
    text.push_back(static_cast<char>(symbol));
  }
  if (in.remaining() != 0) {
    throw Error(ErrorCode::kTrailingGarbage,
                std::to_string(in.remaining()) + " bits after end-of-text");
  }
  return text;
}

double shannon_entropy(std::span<const std::uint64_t> counts) {
  double total = 0.0;
  for (std::uint64_t c : counts) total += static_cast<double>(c);
  if (total <= 0.0) return 0.0;
  double h = 0.0;
  for (std::uint64_t c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / total;
    h -= p * std::log2(p);
  }
  return h;
}

double codebook_entropy(const Codebook& codebook) {
  return shannon_entropy(codebook.counts());
}

double expected_code_length(const Codebook& codebook) {
  const double total = static_cast<double>(codebook.total());
  double mean = 0.0;
  for (unsigned s = 0; s < kAlphabetSize; ++s) {
    mean += static_cast<double>(codebook.counts()[s]) / total * codebook.code_length(s);
  }
  return mean;
}

std::uint32_t fnv1a32(std::span<const std::uint8_t> bytes) {
  std::uint32_t hash = 2166136261u;
  for (std::uint8_t b : bytes) {
    hash ^= b;
    hash *= 16777619u;
  }
  return hash;
}

std::vector<std::uint8_t> serialize_codebook(const Codebook& codebook) {
  std::vector<std::uint8_t> out(kCodebookMagic.begin(), kCodebookMagic.end());
  out.push_back(kCodebookVersion);
  const auto block = count_block(codebook.counts());
  out.insert(out.end(), block.begin(), block.end());
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(codebook.id() >> (8 * i)));
  return out;
}

Codebook deserialize_codebook(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4 ||
      !std::equal(kCodebookMagic.begin(), kCodebookMagic.end(), bytes.begin())) {
    throw Error(ErrorCode::kFormat, "bad codebook magic");
  }
  if (bytes.size() != kCodebookFileBytes) {
    throw Error(ErrorCode::kFormat, "codebook file has the wrong size");
  }
  if (bytes[4] != kCodebookVersion) {
    throw Error(ErrorCode::kFormat, "unsupported codebook version");
  }
  SymbolCounts counts{};
  for (std::size_t s = 0; s < kAlphabetSize; ++s) {
    std::uint64_t c = 0;
    for (int i = 0; i < 8; ++i) c |= static_cast<std::uint64_t>(bytes[5 + 8 * s + i]) << (8 * i);
    counts[s] = c;
  }
  std::uint32_t stored_id = 0;
  for (int i = 0; i < 4; ++i) {
    stored_id |= static_cast<std::uint32_t>(bytes[5 + kCountBlockBytes + i]) << (8 * i);
  }
  const std::uint32_t computed = fnv1a32(bytes.subspan(5, kCountBlockBytes));
  if (stored_id != computed) {
    throw Error(ErrorCode::kFormat, "codebook id does not match its counts");
  }
  try {
    return Codebook::from_counts(counts);
  } catch (const Error& e) {
    throw Error(ErrorCode::kFormat, e.what());
  }
}

Codebook read_codebook(const std::filesystem::path& path) {
  return deserialize_codebook(read_file_bytes(path));
}

void write_codebook(const std::filesystem::path& path, const Codebook& codebook) {
  write_file_bytes(path, serialize_codebook(codebook));
}

}  // namespace cmc
