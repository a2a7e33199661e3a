#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "cmc/image.h"

namespace cmc {

// Binary PPM (P6, maxval 255) is the only raster interchange format.
std::vector<std::uint8_t> encode_ppm(const Image& image);
Image decode_ppm(std::span<const std::uint8_t> bytes);

Image read_ppm(const std::filesystem::path& path);
void write_ppm(const std::filesystem::path& path, const Image& image);

// Whole-file helpers used by the PPM, codebook and feature-file readers.
std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path,
                      std::span<const std::uint8_t> bytes);

}  // namespace cmc
