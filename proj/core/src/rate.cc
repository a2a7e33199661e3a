#include "cmc/rate.h"

#include <cmath>
#include <utility>

#include "cmc/error.h"

namespace cmc {

double compression_ratio(int raw_width, int raw_height,
                         double compressed_bytes) {
  if (raw_width <= 0 || raw_height <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "dimensions must be positive");
  }
  if (!(compressed_bytes > 0.0) || !std::isfinite(compressed_bytes)) {
    throw Error(ErrorCode::kInvalidArgument,
                "compressed size must be positive and finite");
  }
  const double raw_bytes = static_cast<double>(raw_width) * raw_height * 3.0;
  return raw_bytes / compressed_bytes;
}

double bits_per_pixel(int width, int height, double compressed_bytes) {
  if (width <= 0 || height <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "dimensions must be positive");
  }
  return compressed_bytes * 8.0 / (static_cast<double>(width) * height);
}

RDPoint make_rd_point(double rate_bytes, double distortion,
                      std::string metric_name, std::string codec_label) {
  if (!(rate_bytes > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "rate must be positive");
  }
  return {rate_bytes, distortion, std::move(metric_name),
          std::move(codec_label)};
}

}  // namespace cmc
