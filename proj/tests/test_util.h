#pragma once

#include <gtest/gtest.h>

#include "cmc/error.h"
#include "cmc/random.h"
#include "cmc/scene.h"

namespace cmc::testing {

// Code of the cmc::Error raised by fn, failing the test if none is raised.
template <typename Fn>
ErrorCode CodeOf(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::kIo;
}

// Uniform scene with 1..4 objects on distinct cells.
inline SceneGraph RandomScene(Rng& rng) {
  const int n = rng.range(1, kMaxObjects);
  std::vector<int> cells(kGridSize * kGridSize);
  for (int i = 0; i < static_cast<int>(cells.size()); ++i) cells[i] = i;
  std::vector<SceneObject> objects;
  for (int i = 0; i < n; ++i) {
    const int pick = rng.range(i, static_cast<int>(cells.size()) - 1);
    std::swap(cells[i], cells[pick]);
    SceneObject o;
    o.shape = static_cast<Shape>(rng.below(kShapeCount));
    o.color = static_cast<Color>(rng.below(kColorCount));
    o.size = static_cast<Size>(rng.below(kSizeCount));
    o.cell = {cells[i] % kGridSize, cells[i] / kGridSize};
    objects.push_back(o);
  }
  return SceneGraph(std::move(objects));
}

}  // namespace cmc::testing
