#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace cmc {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const Rgb&, const Rgb&) = default;
};

// 8-bit RGB raster, row-major. Dimensions are always positive and the
// pixel array always holds exactly width * height entries.
class Image {
 public:
  Image(int width, int height, Rgb fill = {});
  Image(int width, int height, std::vector<Rgb> pixels);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t pixel_count() const noexcept { return pixels_.size(); }

  const Rgb& at(int x, int y) const { return pixels_[index(x, y)]; }
  Rgb& at(int x, int y) { return pixels_[index(x, y)]; }

  std::span<const Rgb> pixels() const noexcept { return pixels_; }
  std::span<Rgb> pixels() noexcept { return pixels_; }

  // Channel sample c (0 = r, 1 = g, 2 = b) of pixel (x, y).
  std::uint8_t sample(int x, int y, int c) const;

  friend bool operator==(const Image&, const Image&) = default;

 private:
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_;
  int height_;
  std::vector<Rgb> pixels_;
};

}  // namespace cmc
