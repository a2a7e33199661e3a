#include "cmc/caption.h"

#include <vector>

#include "cmc/error.h"

namespace cmc {
namespace {

constexpr Cell kAnchor = {1, 1};

enum class TokenKind {
  kEnd, kA, kSize, kColor, kShape, kLeft, kRight, kOf, kAbove, kBelow,
};

struct Token {
  TokenKind kind = TokenKind::kEnd;
  std::string_view text;
  std::size_t offset = 0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view input) : input_(input) {}

  Token next() {
    if (pos_ == input_.size()) {
      if (after_separator_) {
        throw ParseError(ErrorCode::kParse, pos_ - 1, "trailing space");
      }
      return {TokenKind::kEnd, {}, pos_};
    }
    if (input_[pos_] == ' ') {
      throw ParseError(ErrorCode::kParse, pos_, "unexpected space");
    }
    const std::size_t start = pos_;
    while (pos_ < input_.size() && input_[pos_] != ' ') ++pos_;
    const std::string_view word = input_.substr(start, pos_ - start);
    after_separator_ = pos_ < input_.size();
    if (after_separator_) ++pos_;
    return {classify(word, start), word, start};
  }

 private:
  static TokenKind classify(std::string_view word, std::size_t offset) {
    if (word == "a") return TokenKind::kA;
    if (word == "left") return TokenKind::kLeft;
    if (word == "right") return TokenKind::kRight;
    if (word == "of") return TokenKind::kOf;
    if (word == "above") return TokenKind::kAbove;
    if (word == "below") return TokenKind::kBelow;
    if (size_from_string(word)) return TokenKind::kSize;
    if (color_from_string(word)) return TokenKind::kColor;
    if (shape_from_string(word)) return TokenKind::kShape;
    throw ParseError(ErrorCode::kParse, offset, "unknown token");
  }

  std::string_view input_;
  std::size_t pos_ = 0;
  bool after_separator_ = false;
};

class Parser {
 public:
  explicit Parser(std::string_view input) : input_(input), lexer_(input) {}

  SceneGraph parse() {
    if (input_.empty()) throw ParseError(ErrorCode::kParse, 0, "empty caption");
    advance();
    SceneObject first = object();
    first.cell = kAnchor;
    placed_.push_back(first);
    while (lookahead_.kind != TokenKind::kEnd) {
      const Token relation_token = lookahead_;
      const Relation rel = relation();
      const std::size_t object_offset = lookahead_.offset;
      SceneObject next = object();
      if (placed_.size() == kMaxObjects) {
        throw ParseError(ErrorCode::kParse, object_offset,
                         "more than four objects");
      }
      next.cell = place(placed_.back().cell, rel, relation_token.offset);
      placed_.push_back(next);
    }
    return SceneGraph(placed_);
  }

 private:
  void advance() { lookahead_ = lexer_.next(); }

  Token expect(TokenKind kind, const char* what) {
    if (lookahead_.kind != kind) {
      throw ParseError(ErrorCode::kParse, lookahead_.offset,
                       std::string("expected ") + what);
    }
    Token t = lookahead_;
    advance();
    return t;
  }

  SceneObject object() {
    expect(TokenKind::kA, "'a'");
    SceneObject o;
    o.size = *size_from_string(expect(TokenKind::kSize, "size").text);
    o.color = *color_from_string(expect(TokenKind::kColor, "color").text);
    o.shape = *shape_from_string(expect(TokenKind::kShape, "shape").text);
    return o;
  }

  Relation relation() {
    switch (lookahead_.kind) {
      case TokenKind::kLeft:
        advance();
        expect(TokenKind::kOf, "'of'");
        return Relation::kLeftOf;
      case TokenKind::kRight:
        advance();
        expect(TokenKind::kOf, "'of'");
        return Relation::kRightOf;
      case TokenKind::kAbove:
        advance();
        return Relation::kAbove;
      case TokenKind::kBelow:
        advance();
        return Relation::kBelow;
      default:
        throw ParseError(ErrorCode::kParse, lookahead_.offset,
                         "expected relation or end of caption");
    }
  }

  bool occupied(Cell c) const {
    for (const SceneObject& o : placed_) {
      if (o.cell == c) return true;
    }
    return false;
  }

  // "prev rel next": the next object goes in the opposite direction of rel.
  Cell place(Cell prev, Relation rel, std::size_t offset) const {
    int dc = 0, dr = 0;
    switch (rel) {
      case Relation::kAbove: dr = 1; break;
      case Relation::kBelow: dr = -1; break;
      case Relation::kLeftOf: dc = 1; break;
      case Relation::kRightOf: dc = -1; break;
    }
    for (Cell c{prev.col + dc, prev.row + dr}; on_grid(c);
         c = {c.col + dc, c.row + dr}) {
      if (!occupied(c)) return c;
    }
    throw ParseError(ErrorCode::kPlacement, offset,
                     "no free cell in the stated direction");
  }

  std::string_view input_;
  Lexer lexer_;
  Token lookahead_;
  std::vector<SceneObject> placed_;
};

}  // namespace

std::string_view to_string(Relation relation) {
  switch (relation) {
    case Relation::kLeftOf: return "left of";
    case Relation::kRightOf: return "right of";
    case Relation::kAbove: return "above";
    case Relation::kBelow: return "below";
  }
  return "";
}

Relation relation_between(Cell from, Cell to) {
  if (from.row != to.row) {
    return from.row < to.row ? Relation::kAbove : Relation::kBelow;
  }
  return from.col < to.col ? Relation::kLeftOf : Relation::kRightOf;
}

std::string describe(const SceneGraph& scene) {
  std::string out;
  const auto& objects = scene.objects();
  for (std::size_t i = 0; i < objects.size(); ++i) {
    const SceneObject& o = objects[i];
    if (i > 0) {
      out += ' ';
      out += to_string(relation_between(objects[i - 1].cell, o.cell));
      out += ' ';
    }
    out += "a ";
    out += to_string(o.size);
    out += ' ';
    out += to_string(o.color);
    out += ' ';
    out += to_string(o.shape);
  }
  return out;
}

SceneGraph parse_caption(std::string_view caption) {
  return Parser(caption).parse();
}

bool validate_caption(std::string_view caption) noexcept {
  try {
    parse_caption(caption);
    return true;
  } catch (const Error&) {
    return false;
  }
}

bool is_anchored(const SceneGraph& scene) {
  try {
    return parse_caption(describe(scene)) == scene;
  } catch (const Error&) {
    return false;
  }
}

}  // namespace cmc
