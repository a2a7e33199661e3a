#pragma once

#include <string>

namespace cmc {

// Raw size is width * height * 3 bytes: three 8-bit channels, no alpha and
// no chroma subsampling.
double compression_ratio(int raw_width, int raw_height,
                         double compressed_bytes);

double bits_per_pixel(int width, int height, double compressed_bytes);

// One operating point of a codec. The rate is an average per image.
struct RDPoint {
  double rate_bytes = 0.0;
  double distortion = 0.0;
  std::string metric_name;
  std::string codec_label;
};

// Builds an RDPoint, rejecting non-positive rates.
RDPoint make_rd_point(double rate_bytes, double distortion,
                      std::string metric_name, std::string codec_label);

}  // namespace cmc
