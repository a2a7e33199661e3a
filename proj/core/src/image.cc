#include "cmc/image.h"

#include <string>
#include <utility>

#include "cmc/error.h"

namespace cmc {
namespace {

void check_dimensions(int width, int height) {
  if (width <= 0 || height <= 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "image dimensions must be positive, got " +
                    std::to_string(width) + "x" + std::to_string(height));
  }
}

}  // namespace

Image::Image(int width, int height, Rgb fill) : width_(width), height_(height) {
  check_dimensions(width, height);
  pixels_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height),
                 fill);
}

Image::Image(int width, int height, std::vector<Rgb> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  check_dimensions(width, height);
  if (pixels_.size() !=
      static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw Error(ErrorCode::kInvalidArgument,
                "pixel array length " + std::to_string(pixels_.size()) +
                    " does not match " + std::to_string(width) + "x" +
                    std::to_string(height));
  }
}

std::uint8_t Image::sample(int x, int y, int c) const {
  const Rgb& p = at(x, y);
  return c == 0 ? p.r : (c == 1 ? p.g : p.b);
}

}  // namespace cmc
