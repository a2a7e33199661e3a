#include "cmc/ppm.h"

#include <cctype>
#include <fstream>
#include <iterator>
#include <string>

#include "cmc/error.h"

namespace cmc {
namespace {

class HeaderReader {
 public:
  explicit HeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  // Reads one unsigned decimal field, skipping whitespace and comments.
  long next_number() {
    skip_separators();
    long value = 0;
    std::size_t digits = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > 1'000'000) {
        throw Error(ErrorCode::kFormat, "PPM header field too large");
      }
      ++pos_;
      ++digits;
    }
    if (digits == 0) throw Error(ErrorCode::kFormat, "malformed PPM header");
    return value;
  }

  // Exactly one whitespace byte separates maxval from the raster.
  std::size_t raster_offset() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
      throw Error(ErrorCode::kFormat, "missing separator after PPM header");
    }
    return pos_ + 1;
  }

 private:
  void skip_separators() {
    while (pos_ < bytes_.size()) {
      if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 2;  // after "P6"
};

}  // namespace

std::vector<std::uint8_t> encode_ppm(const Image& image) {
  const std::string header = "P6\n" + std::to_string(image.width()) + " " +
                             std::to_string(image.height()) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.reserve(header.size() + image.pixel_count() * 3);
  for (const Rgb& p : image.pixels()) {
    out.push_back(p.r);
    out.push_back(p.g);
    out.push_back(p.b);
  }
  return out;
}

Image decode_ppm(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '6') {
    throw Error(ErrorCode::kFormat, "not a binary PPM (P6) file");
  }
  HeaderReader reader(bytes);
  const long width = reader.next_number();
  const long height = reader.next_number();
  const long maxval = reader.next_number();
  if (maxval != 255) {
    throw Error(ErrorCode::kFormat, "only maxval 255 is supported");
  }
  if (width <= 0 || height <= 0) {
    throw Error(ErrorCode::kFormat, "PPM dimensions must be positive");
  }
  const std::size_t offset = reader.raster_offset();
  const std::size_t count = static_cast<std::size_t>(width) *
                            static_cast<std::size_t>(height);
  if (bytes.size() - offset < count * 3) {
    throw Error(ErrorCode::kTruncation, "PPM raster is truncated");
  }
  std::vector<Rgb> pixels(count);
  for (std::size_t i = 0; i < count; ++i) {
    pixels[i] = {bytes[offset + 3 * i], bytes[offset + 3 * i + 1],
                 bytes[offset + 3 * i + 2]};
  }
  return Image(static_cast<int>(width), static_cast<int>(height),
               std::move(pixels));
}

Image read_ppm(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  return decode_ppm(bytes);
}

void write_ppm(const std::filesystem::path& path, const Image& image) {
  write_file_bytes(path, encode_ppm(image));
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in),
                                   std::istreambuf_iterator<char>());
}

void write_file_bytes(const std::filesystem::path& path,
                      std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path.string());
}

}  // namespace cmc
