#include "cmc/scene.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <utility>

#include "cmc/error.h"

namespace cmc {
namespace {

constexpr std::array<std::string_view, kShapeCount> kShapeNames = {
    "circle", "square", "triangle"};
constexpr std::array<std::string_view, kColorCount> kColorNames = {
    "red", "green", "blue", "yellow", "cyan", "magenta", "white", "black"};
constexpr std::array<std::string_view, kSizeCount> kSizeNames = {"small",
                                                                 "large"};
constexpr std::array<Rgb, kColorCount> kPalette = {{
    {255, 0, 0}, {0, 255, 0}, {0, 0, 255}, {255, 255, 0},
    {0, 255, 255}, {255, 0, 255}, {255, 255, 255}, {0, 0, 0},
}};

// Rendered extent of an object as a fraction of the cell extent.
constexpr double kLargeFraction = 0.8;
constexpr double kSmallFraction = 0.4;

// Detection thresholds, tuned for rasters produced by render().
constexpr int kBackgroundTolerance = 16;     // Chebyshev distance
constexpr double kCircularityCircle = 0.85;  // 4*pi*area / perimeter^2
constexpr double kFillSquare = 0.9;          // area / bounding-box area
constexpr double kFillTriangleLo = 0.4;
constexpr double kFillTriangleHi = 0.7;
// Midpoint of the small and large extents (0.4 and 0.8 of the cell).
constexpr double kLargeExtentThreshold = 0.6;
constexpr double kBoundaryMargin = 2.0;  // pixels
// Components smaller than this fraction of a cell are speckle (sensor or
// coding noise) and are ignored. The smallest rendered object covers ~8%.
constexpr double kSpeckleFraction = 0.01;

template <typename Enum, std::size_t N>
std::optional<Enum> lookup(const std::array<std::string_view, N>& names,
                           std::string_view word) {
  for (std::size_t i = 0; i < N; ++i) {
    if (names[i] == word) return static_cast<Enum>(i);
  }
  return std::nullopt;
}

bool is_background(const Rgb& p) {
  auto close = [](int a, int b) { return std::abs(a - b) <= kBackgroundTolerance; };
  return close(p.r, kBackground.r) && close(p.g, kBackground.g) &&
         close(p.b, kBackground.b);
}

bool inside_shape(Shape shape, double dx, double dy, double half) {
  switch (shape) {
    case Shape::kCircle:
      return dx * dx + dy * dy <= half * half;
    case Shape::kSquare:
      return std::abs(dx) <= half && std::abs(dy) <= half;
    case Shape::kTriangle:
      // Apex at the top center, base along the bottom edge.
      return dy <= half && std::abs(dx) <= (dy + half) / 2.0;
  }
  return false;
}

struct Component {
  std::vector<std::pair<int, int>> pixels;
  int min_x = std::numeric_limits<int>::max();
  int min_y = std::numeric_limits<int>::max();
  int max_x = -1;
  int max_y = -1;
  double sum_x = 0, sum_y = 0;
  double sum_r = 0, sum_g = 0, sum_b = 0;
};

std::vector<Component> label_components(const Image& image) {
  const int w = image.width();
  const int h = image.height();
  std::vector<int> label(static_cast<std::size_t>(w) * h, -1);
  std::vector<Component> components;
  std::vector<std::pair<int, int>> stack;

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t seed = static_cast<std::size_t>(y) * w + x;
      if (label[seed] != -1 || is_background(image.at(x, y))) continue;
      const int id = static_cast<int>(components.size());
      Component& comp = components.emplace_back();
      label[seed] = id;
      stack.assign(1, {x, y});
      while (!stack.empty()) {
        const auto [px, py] = stack.back();
        stack.pop_back();
        comp.pixels.emplace_back(px, py);
        const Rgb& p = image.at(px, py);
        comp.min_x = std::min(comp.min_x, px);
        comp.min_y = std::min(comp.min_y, py);
        comp.max_x = std::max(comp.max_x, px);
        comp.max_y = std::max(comp.max_y, py);
        comp.sum_x += px + 0.5;
        comp.sum_y += py + 0.5;
        comp.sum_r += p.r;
        comp.sum_g += p.g;
        comp.sum_b += p.b;
        for (int ny = py - 1; ny <= py + 1; ++ny) {
          for (int nx = px - 1; nx <= px + 1; ++nx) {
            if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
            const std::size_t n = static_cast<std::size_t>(ny) * w + nx;
            if (label[n] != -1 || is_background(image.at(nx, ny))) continue;
            label[n] = id;
            stack.emplace_back(nx, ny);
          }
        }
      }
    }
  }
  return components;
}

// Contour length of the component mask traced by marching squares through
// pixel centers. Unlike a boundary-pixel count, this stays close to the
// Euclidean perimeter for diagonal and curved edges.
double contour_perimeter(const Component& comp) {
  const int bw = comp.max_x - comp.min_x + 1;
  const int bh = comp.max_y - comp.min_y + 1;
  const int pw = bw + 2;
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(pw) * (bh + 2), 0);
  for (const auto& [x, y] : comp.pixels) {
    mask[static_cast<std::size_t>(y - comp.min_y + 1) * pw + (x - comp.min_x + 1)] = 1;
  }
  auto at = [&](int x, int y) { return mask[static_cast<std::size_t>(y) * pw + x]; };
  const double half_diagonal = std::numbers::sqrt2 / 2.0;
  double perimeter = 0.0;
  for (int y = 0; y <= bh; ++y) {
    for (int x = 0; x <= bw; ++x) {
      const int tl = at(x, y), tr = at(x + 1, y);
      const int bl = at(x, y + 1), br = at(x + 1, y + 1);
      const int set = tl + tr + bl + br;
      if (set == 1 || set == 3) {
        perimeter += half_diagonal;
      } else if (set == 2) {
        perimeter += (tl == br) ? 2.0 * half_diagonal : 1.0;
      }
    }
  }
  return perimeter;
}

Shape classify_shape(const Component& comp) {
  const double area = static_cast<double>(comp.pixels.size());
  const double bw = comp.max_x - comp.min_x + 1;
  const double bh = comp.max_y - comp.min_y + 1;
  const double fill = area / (bw * bh);
  const double perimeter = contour_perimeter(comp);
  const double circularity =
      perimeter > 0 ? 4.0 * std::numbers::pi * area / (perimeter * perimeter) : 0.0;

  if (circularity >= kCircularityCircle) return Shape::kCircle;
  if (fill >= kFillSquare) return Shape::kSquare;
  if (fill >= kFillTriangleLo && fill < kFillTriangleHi) return Shape::kTriangle;

  // Outside every band: fall back to the shape with the nearest ideal fill.
  constexpr std::array<double, kShapeCount> kIdealFill = {
      std::numbers::pi / 4.0, 1.0, 0.5};
  std::size_t best = 0;
  for (std::size_t i = 1; i < kIdealFill.size(); ++i) {
    if (std::abs(fill - kIdealFill[i]) < std::abs(fill - kIdealFill[best])) best = i;
  }
  return static_cast<Shape>(best);
}

Color nearest_color(const Component& comp) {
  const double n = static_cast<double>(comp.pixels.size());
  const double r = comp.sum_r / n, g = comp.sum_g / n, b = comp.sum_b / n;
  std::size_t best = 0;
  double best_dist = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < kPalette.size(); ++i) {
    const double dr = r - kPalette[i].r, dg = g - kPalette[i].g, db = b - kPalette[i].b;
    const double dist = dr * dr + dg * dg + db * db;
    if (dist < best_dist) {
      best_dist = dist;
      best = i;
    }
  }
  return static_cast<Color>(best);
}

// Distance from `v` to the nearest multiple of `step`.
double distance_to_grid_line(double v, double step) {
  const double r = std::fmod(v, step);
  return std::min(r, step - r);
}

int attribute_mismatches(const SceneObject& a, const SceneObject& b) {
  return (a.shape != b.shape) + (a.color != b.color) + (a.size != b.size) +
         (a.cell != b.cell);
}

}  // namespace

Rgb palette_rgb(Color color) { return kPalette[static_cast<std::size_t>(color)]; }

std::string_view to_string(Shape shape) {
  return kShapeNames[static_cast<std::size_t>(shape)];
}
std::string_view to_string(Color color) {
  return kColorNames[static_cast<std::size_t>(color)];
}
std::string_view to_string(Size size) {
  return kSizeNames[static_cast<std::size_t>(size)];
}
std::optional<Shape> shape_from_string(std::string_view word) {
  return lookup<Shape>(kShapeNames, word);
}
std::optional<Color> color_from_string(std::string_view word) {
  return lookup<Color>(kColorNames, word);
}
std::optional<Size> size_from_string(std::string_view word) {
  return lookup<Size>(kSizeNames, word);
}

SceneGraph::SceneGraph(std::vector<SceneObject> objects)
    : objects_(std::move(objects)) {
  if (objects_.empty() || objects_.size() > kMaxObjects) {
    throw Error(ErrorCode::kInvalidArgument,
                "a scene holds 1 to 4 objects, got " +
                    std::to_string(objects_.size()));
  }
  for (const SceneObject& o : objects_) {
    if (!on_grid(o.cell)) {
      throw Error(ErrorCode::kInvalidArgument, "object cell is off the grid");
    }
  }
  std::sort(objects_.begin(), objects_.end(),
            [](const SceneObject& a, const SceneObject& b) {
              return std::pair(a.cell.row, a.cell.col) <
                     std::pair(b.cell.row, b.cell.col);
            });
  for (std::size_t i = 1; i < objects_.size(); ++i) {
    if (objects_[i].cell == objects_[i - 1].cell) {
      throw Error(ErrorCode::kInvalidArgument, "two objects share a cell");
    }
  }
}

Image render(const SceneGraph& scene, int width, int height) {
  const std::vector<Jitter> none(scene.size());
  return render_jittered(scene, width, height, none);
}

Image render_jittered(const SceneGraph& scene, int width, int height,
                      std::span<const Jitter> offsets) {
  if (width < 64 || height < 64 || width % kGridSize != 0 ||
      height % kGridSize != 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "render needs dimensions >= 64 and divisible by 4");
  }
  if (offsets.size() != scene.size()) {
    throw Error(ErrorCode::kInvalidArgument, "one offset per object is required");
  }
  Image image(width, height, kBackground);
  const int cw = width / kGridSize;
  const int ch = height / kGridSize;
  const double extent = std::min(cw, ch);
  for (std::size_t i = 0; i < scene.size(); ++i) {
    const SceneObject& o = scene.objects()[i];
    const double fraction = o.size == Size::kLarge ? kLargeFraction : kSmallFraction;
    const double half = extent * fraction / 2.0;
    const double cx = o.cell.col * cw + cw / 2.0 + offsets[i].dx;
    const double cy = o.cell.row * ch + ch / 2.0 + offsets[i].dy;
    const Rgb color = palette_rgb(o.color);
    for (int y = o.cell.row * ch; y < (o.cell.row + 1) * ch; ++y) {
      for (int x = o.cell.col * cw; x < (o.cell.col + 1) * cw; ++x) {
        if (inside_shape(o.shape, x + 0.5 - cx, y + 0.5 - cy, half)) {
          image.at(x, y) = color;
        }
      }
    }
  }
  return image;
}

SceneGraph analyze(const Image& image) {
  if (image.width() % kGridSize != 0 || image.height() % kGridSize != 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "analyze needs dimensions divisible by 4");
  }
  const double cw = image.width() / kGridSize;
  const double ch = image.height() / kGridSize;
  std::vector<Component> components = label_components(image);
  std::erase_if(components, [&](const Component& c) {
    return static_cast<double>(c.pixels.size()) < kSpeckleFraction * cw * ch;
  });
  if (components.empty()) {
    throw Error(ErrorCode::kNoObjects, "no foreground objects found");
  }
  if (components.size() > kMaxObjects) {
    throw Error(ErrorCode::kTooManyObjects,
                std::to_string(components.size()) + " components found");
  }

  const double extent = std::min(cw, ch);
  std::vector<SceneObject> objects;
  for (const Component& comp : components) {
    const double n = static_cast<double>(comp.pixels.size());
    const double cx = comp.sum_x / n;
    const double cy = comp.sum_y / n;
    if (distance_to_grid_line(cx, cw) < kBoundaryMargin ||
        distance_to_grid_line(cy, ch) < kBoundaryMargin) {
      throw Error(ErrorCode::kAmbiguousScene,
                  "component centroid lies on a cell boundary");
    }
    const Cell cell{static_cast<int>(cx / cw), static_cast<int>(cy / ch)};
    if (comp.min_x < cell.col * cw || comp.max_x >= (cell.col + 1) * cw ||
        comp.min_y < cell.row * ch || comp.max_y >= (cell.row + 1) * ch) {
      throw Error(ErrorCode::kAmbiguousScene, "component spans several cells");
    }
    const int bbox_extent =
        std::max(comp.max_x - comp.min_x + 1, comp.max_y - comp.min_y + 1);
    SceneObject object;
    object.shape = classify_shape(comp);
    object.color = nearest_color(comp);
    object.size = bbox_extent > kLargeExtentThreshold * extent ? Size::kLarge
                                                               : Size::kSmall;
    object.cell = cell;
    for (const SceneObject& prior : objects) {
      if (prior.cell == cell) {
        throw Error(ErrorCode::kAmbiguousScene, "two components share a cell");
      }
    }
    objects.push_back(object);
  }
  return SceneGraph(std::move(objects));
}

int scene_distance(const SceneGraph& a, const SceneGraph& b) {
  const auto& small = a.size() <= b.size() ? a.objects() : b.objects();
  const auto& large = a.size() <= b.size() ? b.objects() : a.objects();
  constexpr int kUnmatchedCost = 4;
  // At most 4 objects per side, so enumerating assignments is exact and
  // cheap: the smaller list is matched into a permutation of the larger.
  std::vector<std::size_t> perm(large.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  int best = std::numeric_limits<int>::max();
  do {
    int cost = kUnmatchedCost * static_cast<int>(large.size() - small.size());
    for (std::size_t i = 0; i < small.size(); ++i) {
      cost += attribute_mismatches(small[i], large[perm[i]]);
    }
    best = std::min(best, cost);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

std::string format_scene_text(const SceneGraph& scene) {
  std::string out;
  for (const SceneObject& o : scene.objects()) {
    out += to_string(o.shape);
    out += ' ';
    out += to_string(o.color);
    out += ' ';
    out += to_string(o.size);
    out += ' ' + std::to_string(o.cell.col) + ' ' + std::to_string(o.cell.row) + '\n';
  }
  return out;
}

SceneGraph parse_scene_text(std::string_view text) {
  std::vector<SceneObject> objects;
  std::istringstream lines{std::string(text)};
  std::string line;
  int line_number = 0;
  while (std::getline(lines, line)) {
    ++line_number;
    std::istringstream fields(line);
    std::string shape, color, size, extra;
    int col = 0, row = 0;
    if (!(fields >> shape)) continue;  // blank line
    auto fail = [&](const std::string& what) {
      return Error(ErrorCode::kFormat,
                   "scene line " + std::to_string(line_number) + ": " + what);
    };
    if (!(fields >> color >> size >> col >> row) || (fields >> extra)) {
      throw fail("expected 'shape color size col row'");
    }
    SceneObject object;
    const auto s = shape_from_string(shape);
    const auto c = color_from_string(color);
    const auto z = size_from_string(size);
    if (!s || !c || !z) throw fail("unknown attribute");
    object.shape = *s;
    object.color = *c;
    object.size = *z;
    object.cell = {col, row};
    objects.push_back(object);
  }
  try {
    return SceneGraph(std::move(objects));
  } catch (const Error& e) {
    throw Error(ErrorCode::kFormat, e.what());
  }
}

}  // namespace cmc
