#pragma once

#include <string>
#include <string_view>

#include "cmc/scene.h"

namespace cmc {

// Caption grammar (tokens separated by single spaces):
//
//   caption  := object { relation object } ;
//   object   := "a" size color shape ;
//   size     := "small" | "large" ;
//   color    := "red" | "green" | "blue" | "yellow" | "cyan" | "magenta"
//             | "white" | "black" ;
//   shape    := "circle" | "square" | "triangle" ;
//   relation := "left of" | "right of" | "above" | "below" ;
//
// "X rel Y" states where X lies relative to Y. The first object is anchored
// at cell (1, 1); each relation puts the next object in the nearest free
// cell on the straight line from the previous object in the implied
// direction ("X above Y" puts Y below X).

enum class Relation { kLeftOf, kRightOf, kAbove, kBelow };

std::string_view to_string(Relation relation);

// Relation of `from` with respect to `to`. Row difference dominates; equal
// rows fall back to the column difference.
Relation relation_between(Cell from, Cell to);

// Caption of a scene, objects in canonical order, each later object related
// to the one before it.
std::string describe(const SceneGraph& scene);

// Recursive-descent parse with one token of lookahead. Throws ParseError
// with code kParse (grammar violation, unknown token, empty input, more than
// four objects) or kPlacement (no free on-grid cell in the stated
// direction). The offset names the offending token.
SceneGraph parse_caption(std::string_view caption);

bool validate_caption(std::string_view caption) noexcept;

// True when parse_caption(describe(scene)) == scene, i.e. the layout is the
// one the anchoring rule reconstructs.
bool is_anchored(const SceneGraph& scene);

}  // namespace cmc
