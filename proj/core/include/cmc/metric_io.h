#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "cmc/metrics.h"

namespace cmc {

// Feature file: "FMAT" | n u32 LE | d u32 LE | n*d float32 LE, row-major.
// Probability files share the layout under the magic "PMAT".
std::vector<std::uint8_t> serialize_feature_matrix(const FeatureMatrix& m);
FeatureMatrix deserialize_feature_matrix(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> serialize_prob_matrix(const ProbMatrix& m);
ProbMatrix deserialize_prob_matrix(std::span<const std::uint8_t> bytes);

FeatureMatrix read_feature_matrix(const std::filesystem::path& path);
void write_feature_matrix(const std::filesystem::path& path, const FeatureMatrix& m);
ProbMatrix read_prob_matrix(const std::filesystem::path& path);
void write_prob_matrix(const std::filesystem::path& path, const ProbMatrix& m);

}  // namespace cmc
