#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cmc/image.h"

namespace cmc {

enum class Shape : std::uint8_t { kCircle, kSquare, kTriangle };
enum class Color : std::uint8_t {
  kRed, kGreen, kBlue, kYellow, kCyan, kMagenta, kWhite, kBlack,
};
enum class Size : std::uint8_t { kSmall, kLarge };

inline constexpr int kGridSize = 4;
inline constexpr int kMaxObjects = 4;
inline constexpr int kShapeCount = 3;
inline constexpr int kColorCount = 8;
inline constexpr int kSizeCount = 2;

inline constexpr Rgb kBackground = {200, 200, 200};

// Exact palette colors: the eight corners of the RGB cube. The minimum
// pairwise distance is 255 and every entry sits at Chebyshev distance >= 55
// from the background.
Rgb palette_rgb(Color color);

std::string_view to_string(Shape shape);
std::string_view to_string(Color color);
std::string_view to_string(Size size);
std::optional<Shape> shape_from_string(std::string_view word);
std::optional<Color> color_from_string(std::string_view word);
std::optional<Size> size_from_string(std::string_view word);

// Placement on the 4x4 grid.
struct Cell {
  int col = 0;
  int row = 0;

  friend bool operator==(const Cell&, const Cell&) = default;
};

inline bool on_grid(Cell c) {
  return c.col >= 0 && c.col < kGridSize && c.row >= 0 && c.row < kGridSize;
}

struct SceneObject {
  Shape shape = Shape::kCircle;
  Color color = Color::kRed;
  Size size = Size::kSmall;
  Cell cell;

  friend bool operator==(const SceneObject&, const SceneObject&) = default;
};

// 1..4 objects on distinct cells, kept sorted by (row, column).
class SceneGraph {
 public:
  // Sorts into canonical order. Throws Error(kInvalidArgument) for an empty
  // or oversized list, off-grid cells, or two objects sharing a cell.
  explicit SceneGraph(std::vector<SceneObject> objects);

  const std::vector<SceneObject>& objects() const noexcept { return objects_; }
  std::size_t size() const noexcept { return objects_.size(); }

  friend bool operator==(const SceneGraph&, const SceneGraph&) = default;

 private:
  std::vector<SceneObject> objects_;
};

// Deterministic raster of a scene. Each object is centered in its cell;
// large objects span 80% of the cell extent and small ones 40%. Width and
// height must be >= 64 and divisible by 4 (Error(kInvalidArgument)).
Image render(const SceneGraph& scene, int width, int height);

// Sub-cell displacement of one object, in pixels.
struct Jitter {
  double dx = 0.0;
  double dy = 0.0;
};

// render() with object i shifted by offsets[i]. Drawing is clipped to the
// object's cell. `offsets` must hold one entry per object.
Image render_jittered(const SceneGraph& scene, int width, int height,
                      std::span<const Jitter> offsets);

// Recovers the scene graph from a raster produced by render(). Errors:
// kInvalidArgument (dimensions not divisible by 4), kNoObjects,
// kTooManyObjects, kAmbiguousScene (component straddling cells or a
// centroid within 2 px of a grid line).
SceneGraph analyze(const Image& image);

// Minimum-cost matching between object lists: each matched pair costs the
// number of differing attributes among shape, color, size and cell; each
// unmatched object costs 4.
int scene_distance(const SceneGraph& a, const SceneGraph& b);

// Fixture text format: one object per line, "shape color size col row".
std::string format_scene_text(const SceneGraph& scene);
SceneGraph parse_scene_text(std::string_view text);

}  // namespace cmc
