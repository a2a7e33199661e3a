#include "cmc/metric_io.h"

#include <array>
#include <bit>
#include <cstring>
#include <string>

#include "cmc/error.h"
#include "cmc/ppm.h"

namespace cmc {
namespace {

constexpr std::size_t kHeaderBytes = 12;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(std::span<const std::uint8_t> in, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(in[at + i]) << (8 * i);
  return v;
}

std::vector<std::uint8_t> serialize(const FeatureMatrix& m, const char* magic) {
  if (m.rows() > UINT32_MAX || m.cols() > UINT32_MAX) {
    throw Error(ErrorCode::kInvalidArgument, "matrix too large for the file format");
  }
  std::vector<std::uint8_t> out(magic, magic + 4);
  out.reserve(kHeaderBytes + 4 * m.values().size());
  put_u32(out, static_cast<std::uint32_t>(m.rows()));
  put_u32(out, static_cast<std::uint32_t>(m.cols()));
  for (double v : m.values()) put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
  return out;
}

FeatureMatrix deserialize(std::span<const std::uint8_t> bytes, const char* magic) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), magic, 4) != 0) {
    throw Error(ErrorCode::kFormat, std::string("expected magic ") + magic);
  }
  if (bytes.size() < kHeaderBytes) {
    throw Error(ErrorCode::kTruncation, "matrix header is truncated");
  }
  const std::uint64_t n = get_u32(bytes, 4);
  const std::uint64_t d = get_u32(bytes, 8);
  if (n == 0 || d == 0) throw Error(ErrorCode::kFormat, "matrix needs n >= 1 and d >= 1");
  if (d > (bytes.size() - kHeaderBytes) / 4 / n) {
    throw Error(ErrorCode::kTruncation, "matrix data is truncated");
  }
  const std::uint64_t expected = kHeaderBytes + 4 * n * d;
  if (bytes.size() < expected) throw Error(ErrorCode::kTruncation, "matrix data is truncated");
  if (bytes.size() > expected) throw Error(ErrorCode::kFormat, "trailing bytes after matrix data");
  std::vector<double> values(n * d);
  for (std::size_t i = 0; i < values.size(); ++i) {
    values[i] = std::bit_cast<float>(get_u32(bytes, kHeaderBytes + 4 * i));
  }
  try {
    return FeatureMatrix(n, d, std::move(values));
  } catch (const Error& e) {
    throw Error(ErrorCode::kFormat, e.what());
  }
}

}  // namespace

std::vector<std::uint8_t> serialize_feature_matrix(const FeatureMatrix& m) {
  return serialize(m, "FMAT");
}

FeatureMatrix deserialize_feature_matrix(std::span<const std::uint8_t> bytes) {
  return deserialize(bytes, "FMAT");
}

std::vector<std::uint8_t> serialize_prob_matrix(const ProbMatrix& m) {
  return serialize(m.matrix(), "PMAT");
}

ProbMatrix deserialize_prob_matrix(std::span<const std::uint8_t> bytes) {
  FeatureMatrix values = deserialize(bytes, "PMAT");
  try {
    return ProbMatrix(std::move(values));
  } catch (const Error& e) {
    throw Error(ErrorCode::kFormat, e.what());
  }
}

FeatureMatrix read_feature_matrix(const std::filesystem::path& path) {
  return deserialize_feature_matrix(read_file_bytes(path));
}

void write_feature_matrix(const std::filesystem::path& path, const FeatureMatrix& m) {
  write_file_bytes(path, serialize_feature_matrix(m));
}

ProbMatrix read_prob_matrix(const std::filesystem::path& path) {
  return deserialize_prob_matrix(read_file_bytes(path));
}

void write_prob_matrix(const std::filesystem::path& path, const ProbMatrix& m) {
  write_file_bytes(path, serialize_prob_matrix(m));
}

}  // namespace cmc
