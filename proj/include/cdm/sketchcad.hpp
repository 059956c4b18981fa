#pragma once

// Sketch-extrude CAD language: parser and evaluator for a restricted
// Python-like statement form. Two dialects differ only in how sketch
// primitive centers are written:
//
//   local   circle(cx, cy, r)        rectangle(cx, cy, length, width)
//           centers are in-plane offsets in the plane's (u, v) frame
//   global  circle(x, y, z, r)       rectangle(x, y, z, length, width)
//           centers are world points projected onto the plane
//
// Statements have the form `name = expr`, one per line, `#` comments.

#include <cctype>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cdm/error.hpp"
#include "cdm/solids.hpp"

namespace cdm::sketch {

enum class Dialect { local, global };

enum class Side { min_x, max_x, min_y, max_y, min_z, max_z };

inline Vec3 side_normal(Side side) {
  switch (side) {
    case Side::min_x: return {-1, 0, 0};
    case Side::max_x: return {1, 0, 0};
    case Side::min_y: return {0, -1, 0};
    case Side::max_y: return {0, 1, 0};
    case Side::min_z: return {0, 0, -1};
    case Side::max_z: return {0, 0, 1};
  }
  return {0, 0, 1};
}

inline std::optional<Side> parse_side(std::string_view text) {
  if (text == "min_x") return Side::min_x;
  if (text == "max_x") return Side::max_x;
  if (text == "min_y") return Side::min_y;
  if (text == "max_y") return Side::max_y;
  if (text == "min_z") return Side::min_z;
  if (text == "max_z") return Side::max_z;
  return std::nullopt;
}

/// Sketch plane. `face` is set for planes taken from a solid's cap and
/// bounds where primitive centers may be placed.
struct Plane {
  Vec3 origin = Vec3::Zero();
  Vec3 normal = Vec3::UnitZ();
  Vec3 u_axis = Vec3::UnitX();
  std::optional<Aabb> face;

  Vec3 v_axis() const { return normal.cross(u_axis); }
};

inline Plane xy_plane() { return {Vec3::Zero(), Vec3::UnitZ(), Vec3::UnitX(), std::nullopt}; }
inline Plane xz_plane() { return {Vec3::Zero(), Vec3::UnitY(), Vec3::UnitX(), std::nullopt}; }
inline Plane zy_plane() { return {Vec3::Zero(), Vec3::UnitX(), Vec3::UnitY(), std::nullopt}; }

/// In-plane reference axis for cap planes: +x for z- and y-facing caps,
/// +y for x-facing caps (same as the default plane with that normal axis).
inline Vec3 cap_u_axis(Side side) {
  return (side == Side::min_x || side == Side::max_x) ? Vec3::UnitY() : Vec3::UnitX();
}

struct Circle {
  Vec3 center;  ///< (cx, cy, 0) in the local dialect, world point in the global one
  double r;
};

struct Rect {
  Vec3 center;
  double length;  ///< along the plane's u axis
  double width;   ///< along v = normal x u
};

using SketchPrimitive = std::variant<Circle, Rect>;

struct Sketch {
  Plane plane;
  SketchPrimitive primitive;
  Vec3 world_center;  ///< primitive center resolved onto the plane
};

struct ExtrudedSolid {
  std::string name;
  Sketch sketch;
  double length;
  SolidNode solid;
};

/// Planar face of an extruded prism.
struct Face {
  Vec3 normal;
  Vec3 center;
  Aabb bounds;
  double area;
};

class DslError : public ParseError {
 public:
  enum class Kind {
    syntax,
    unknown_identifier,
    arity,
    reassignment,
    unsupported,
    type,
    face_selection,
    placement,
    domain,
  };

  DslError(Kind kind, std::size_t line, const std::string& message)
      : ParseError(line, message), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

inline std::vector<Face> faces(const ExtrudedSolid& solid) {
  const LeafNode* leaf = solid.solid.leaf();
  const RigidTransform& xf = leaf->transform;
  std::vector<Face> out;
  auto disc_bounds = [](const Vec3& c, const Vec3& n, double r) {
    Vec3 reach;
    for (int i = 0; i < 3; ++i) reach[i] = r * std::sqrt(std::max(0.0, 1.0 - n[i] * n[i]));
    return Aabb{c - reach, c + reach};
  };
  if (const auto* box = std::get_if<Box>(&leaf->primitive)) {
    const std::array<double, 3> half = {box->w / 2, box->h / 2, box->d / 2};
    for (int axis = 0; axis < 3; ++axis) {
      const int a = (axis + 1) % 3, b = (axis + 2) % 3;
      for (double sign : {-1.0, 1.0}) {
        const Vec3 n = sign * xf.rotation.col(axis);
        const Vec3 c = xf.translation + half[axis] * n;
        const Vec3 da = half[a] * xf.rotation.col(a);
        const Vec3 db = half[b] * xf.rotation.col(b);
        const Vec3 reach = da.cwiseAbs() + db.cwiseAbs();
        out.push_back({n, c, Aabb{c - reach, c + reach}, 4 * half[a] * half[b]});
      }
    }
  } else {
    const auto& cyl = std::get<Cylinder>(leaf->primitive);
    for (double sign : {-1.0, 1.0}) {
      const Vec3 n = sign * xf.rotation.col(2);
      const Vec3 c = xf.translation + (cyl.h / 2) * n;
      out.push_back({n, c, disc_bounds(c, n, cyl.r), std::numbers::pi * cyl.r * cyl.r});
    }
  }
  return out;
}

/// Selects the planar face whose outward normal matches `side` and whose
/// center is extremal along that axis; ties prefer the larger face.
inline Plane cap(const ExtrudedSolid& solid, Side side, std::size_t line = 0) {
  const Vec3 dir = side_normal(side);
  const int axis = dir.x() != 0 ? 0 : (dir.y() != 0 ? 1 : 2);
  const double sign = dir[axis];
  constexpr double tol = 1e-9;

  std::vector<Face> candidates;
  for (const auto& f : faces(solid)) {
    if (f.normal.dot(dir) >= 1.0 - tol) candidates.push_back(f);
  }
  if (candidates.empty()) {
    throw DslError(DslError::Kind::face_selection, line,
                   "solid '" + solid.name + "' has no planar face facing the requested side");
  }
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& f : candidates) best = std::max(best, sign * f.center[axis]);
  std::vector<Face> extremal;
  for (const auto& f : candidates) {
    if (sign * f.center[axis] >= best - tol) extremal.push_back(f);
  }
  double best_area = 0;
  for (const auto& f : extremal) best_area = std::max(best_area, f.area);
  const Face* chosen = nullptr;
  for (const auto& f : extremal) {
    if (f.area >= best_area - tol) {
      if (chosen != nullptr) {
        throw DslError(DslError::Kind::face_selection, line,
                       "ambiguous face selection on solid '" + solid.name + "'");
      }
      chosen = &f;
    }
  }
  return Plane{chosen->center, dir, cap_u_axis(side), chosen->bounds};
}

namespace detail {

inline Vec3 primitive_center(const SketchPrimitive& p) {
  return std::visit([](const auto& prim) { return prim.center; }, p);
}

inline bool inside_face(const Vec3& p, const Aabb& face) {
  const double tol = 1e-9 * std::max(1.0, face.extent().cwiseAbs().maxCoeff());
  for (int i = 0; i < 3; ++i) {
    if (p[i] < face.min[i] - tol || p[i] > face.max[i] + tol) return false;
  }
  return true;
}

}  // namespace detail

/// Resolves the primitive center onto the plane for the given dialect.
inline Sketch make_sketch(const SketchPrimitive& primitive, const Plane& plane, Dialect dialect,
                          std::size_t line = 0) {
  const Vec3 c = detail::primitive_center(primitive);
  Vec3 world;
  if (dialect == Dialect::local) {
    world = plane.origin + c.x() * plane.u_axis + c.y() * plane.v_axis();
  } else {
    world = c - (c - plane.origin).dot(plane.normal) * plane.normal;
  }
  if (dialect == Dialect::global && plane.face && !detail::inside_face(world, *plane.face)) {
    throw DslError(DslError::Kind::placement, line,
                   "sketch center must lie inside or on the edge of the referenced face");
  }
  return Sketch{plane, primitive, world};
}

/// Prism along the plane normal, spanning [center, center + length * normal].
inline ExtrudedSolid extrude(const Sketch& sketch, double length, std::string name = {},
                             std::size_t line = 0) {
  if (!(length > 0)) {
    throw DslError(DslError::Kind::domain, line, "extrude length must be positive");
  }
  const Plane& pl = sketch.plane;
  RigidTransform xf;
  xf.rotation.col(0) = pl.u_axis;
  xf.rotation.col(1) = pl.v_axis();
  xf.rotation.col(2) = pl.normal;
  xf.translation = sketch.world_center + 0.5 * length * pl.normal;
  Primitive prim;
  if (const auto* circle = std::get_if<Circle>(&sketch.primitive)) {
    if (!(circle->r > 0)) throw DslError(DslError::Kind::domain, line, "circle radius must be positive");
    prim = Cylinder{circle->r, length, kDefaultCylinderSegments};
  } else {
    const auto& rect = std::get<Rect>(sketch.primitive);
    if (!(rect.length > 0 && rect.width > 0)) {
      throw DslError(DslError::Kind::domain, line, "rectangle sides must be positive");
    }
    prim = Box{rect.length, rect.width, length};
  }
  return ExtrudedSolid{std::move(name), sketch, length, make_leaf(prim, xf)};
}

// ---------------------------------------------------------------------------
// Syntax tree

struct Expr {
  enum class Kind { number, string, name, unary, binary, call };
  Kind kind = Kind::number;
  double number = 0;
  std::string text;  ///< identifier, string literal, or callee
  char op = 0;
  std::vector<Expr> args;
};

struct Statement {
  std::string name;
  Expr value;
  std::size_t line;
};

struct Program {
  Dialect dialect;
  std::vector<Statement> statements;
};

namespace detail {

struct Token {
  enum class Kind { ident, number, string, op, lparen, rparen, comma, assign, end };
  Kind kind;
  std::string text;
  double number = 0;
};

inline bool is_plane_constant(std::string_view name) {
  return name == "XY_PLANE" || name == "XZ_PLANE" || name == "ZY_PLANE";
}

inline bool is_reserved_word(std::string_view word) {
  static constexpr std::string_view words[] = {
      "for",  "while", "if",     "elif",  "else", "def",    "class",  "import",
      "from", "return", "lambda", "with", "try",  "except", "in",     "not",
      "and",  "or",    "pass",   "break", "continue"};
  for (auto w : words) {
    if (w == word) return true;
  }
  return false;
}

/// Number of arguments each builtin takes in each dialect.
inline std::optional<std::size_t> builtin_arity(std::string_view name, Dialect dialect) {
  const bool local = dialect == Dialect::local;
  if (name == "createSketch" || name == "extrude" || name == "cap") return 2;
  if (name == "circle") return local ? 3 : 4;
  if (name == "rectangle") return local ? 4 : 5;
  return std::nullopt;
}

inline std::vector<Token> tokenize(std::string_view line, std::size_t line_no) {
  using K = DslError::Kind;
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    const char c = line[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '#') {
      break;
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < line.size() && (std::isalnum(static_cast<unsigned char>(line[j])) || line[j] == '_')) ++j;
      tokens.push_back({Token::Kind::ident, std::string(line.substr(i, j - i))});
      i = j;
    } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t j = i;
      while (j < line.size() && (std::isdigit(static_cast<unsigned char>(line[j])) || line[j] == '.')) ++j;
      if (j < line.size() && (line[j] == 'e' || line[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < line.size() && (line[k] == '+' || line[k] == '-')) ++k;
        if (k < line.size() && std::isdigit(static_cast<unsigned char>(line[k]))) {
          j = k;
          while (j < line.size() && std::isdigit(static_cast<unsigned char>(line[j]))) ++j;
        }
      }
      const std::string text(line.substr(i, j - i));
      std::size_t used = 0;
      double value = 0;
      try {
        value = std::stod(text, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != text.size()) throw DslError(K::syntax, line_no, "malformed number '" + text + "'");
      tokens.push_back({Token::Kind::number, text, value});
      i = j;
    } else if (c == '"' || c == '\'') {
      const std::size_t close = line.find(c, i + 1);
      if (close == std::string_view::npos) throw DslError(K::syntax, line_no, "unterminated string");
      tokens.push_back({Token::Kind::string, std::string(line.substr(i + 1, close - i - 1))});
      i = close + 1;
    } else if (c == '*' && i + 1 < line.size() && line[i + 1] == '*') {
      throw DslError(K::unsupported, line_no, "exponentiation is not supported");
    } else if (c == '+' || c == '-' || c == '*' || c == '/') {
      tokens.push_back({Token::Kind::op, std::string(1, c)});
      ++i;
    } else if (c == '(') {
      tokens.push_back({Token::Kind::lparen, "("});
      ++i;
    } else if (c == ')') {
      tokens.push_back({Token::Kind::rparen, ")"});
      ++i;
    } else if (c == ',') {
      tokens.push_back({Token::Kind::comma, ","});
      ++i;
    } else if (c == '=') {
      if (i + 1 < line.size() && line[i + 1] == '=') {
        throw DslError(K::unsupported, line_no, "comparisons are not supported");
      }
      tokens.push_back({Token::Kind::assign, "="});
      ++i;
    } else {
      throw DslError(K::unsupported, line_no, std::string("unsupported character '") + c + "'");
    }
  }
  tokens.push_back({Token::Kind::end, ""});
  return tokens;
}

class LineParser {
 public:
  LineParser(std::vector<Token> tokens, std::size_t line, Dialect dialect,
             const std::map<std::string, std::size_t>& bound)
      : tokens_(std::move(tokens)), line_(line), dialect_(dialect), bound_(bound) {}

  Statement statement() {
    using K = DslError::Kind;
    const Token& head = peek();
    if (head.kind == Token::Kind::ident && is_reserved_word(head.text)) {
      throw DslError(K::unsupported, line_, "'" + head.text + "' statements are not supported");
    }
    if (head.kind != Token::Kind::ident || tokens_[1].kind != Token::Kind::assign) {
      throw DslError(K::unsupported, line_, "expected an assignment of the form name = expression");
    }
    Statement st{head.text, {}, line_};
    if (is_plane_constant(st.name) || builtin_arity(st.name, dialect_)) {
      throw DslError(K::reassignment, line_, "cannot assign to builtin '" + st.name + "'");
    }
    if (auto it = bound_.find(st.name); it != bound_.end()) {
      throw DslError(K::reassignment, line_,
                     "'" + st.name + "' already assigned on line " + std::to_string(it->second));
    }
    pos_ = 2;
    st.value = expression();
    if (peek().kind != Token::Kind::end) {
      throw DslError(K::syntax, line_, "unexpected '" + peek().text + "' after expression");
    }
    return st;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& next() { return tokens_[pos_++]; }

  Expr expression() {
    Expr lhs = term();
    while (peek().kind == Token::Kind::op && (peek().text == "+" || peek().text == "-")) {
      const char op = next().text[0];
      lhs = binary(op, std::move(lhs), term());
    }
    return lhs;
  }

  Expr term() {
    Expr lhs = unary();
    while (peek().kind == Token::Kind::op && (peek().text == "*" || peek().text == "/")) {
      const char op = next().text[0];
      lhs = binary(op, std::move(lhs), unary());
    }
    return lhs;
  }

  Expr unary() {
    if (peek().kind == Token::Kind::op && (peek().text == "-" || peek().text == "+")) {
      const char op = next().text[0];
      Expr e{Expr::Kind::unary};
      e.op = op;
      e.args.push_back(unary());
      return e;
    }
    return primary();
  }

  Expr primary() {
    using K = DslError::Kind;
    const Token tok = next();
    switch (tok.kind) {
      case Token::Kind::number: {
        Expr e{Expr::Kind::number};
        e.number = tok.number;
        return e;
      }
      case Token::Kind::string: {
        Expr e{Expr::Kind::string};
        e.text = tok.text;
        return e;
      }
      case Token::Kind::lparen: {
        Expr e = expression();
        expect(Token::Kind::rparen, "')'");
        return e;
      }
      case Token::Kind::ident: {
        if (is_reserved_word(tok.text)) {
          throw DslError(K::unsupported, line_, "'" + tok.text + "' is not supported");
        }
        if (peek().kind == Token::Kind::lparen) return call(tok.text);
        if (!is_plane_constant(tok.text) && !bound_.contains(tok.text)) {
          throw DslError(K::unknown_identifier, line_, "unknown identifier '" + tok.text + "'");
        }
        Expr e{Expr::Kind::name};
        e.text = tok.text;
        return e;
      }
      default:
        throw DslError(K::syntax, line_,
                       tok.kind == Token::Kind::end ? "unexpected end of line"
                                                    : "unexpected '" + tok.text + "'");
    }
  }

  Expr call(const std::string& callee) {
    using K = DslError::Kind;
    const auto arity = builtin_arity(callee, dialect_);
    if (!arity) throw DslError(K::unknown_identifier, line_, "unknown function '" + callee + "'");
    next();  // '('
    Expr e{Expr::Kind::call};
    e.text = callee;
    if (peek().kind != Token::Kind::rparen) {
      e.args.push_back(expression());
      while (peek().kind == Token::Kind::comma) {
        next();
        e.args.push_back(expression());
      }
    }
    expect(Token::Kind::rparen, "')'");
    if (e.args.size() != *arity) {
      throw DslError(K::arity, line_,
                     callee + " takes " + std::to_string(*arity) + " arguments in the " +
                         (dialect_ == Dialect::local ? "local" : "global") + " dialect, got " +
                         std::to_string(e.args.size()));
    }
    return e;
  }

  void expect(Token::Kind kind, const char* what) {
    if (peek().kind != kind) {
      throw DslError(DslError::Kind::syntax, line_, std::string("expected ") + what);
    }
    next();
  }

  static Expr binary(char op, Expr lhs, Expr rhs) {
    Expr e{Expr::Kind::binary};
    e.op = op;
    e.args.push_back(std::move(lhs));
    e.args.push_back(std::move(rhs));
    return e;
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::size_t line_;
  Dialect dialect_;
  const std::map<std::string, std::size_t>& bound_;
};

}  // namespace detail

inline Program parse(std::string_view source, Dialect dialect) {
  Program program{dialect, {}};
  std::map<std::string, std::size_t> bound;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= source.size()) {
    std::size_t end = source.find('\n', start);
    if (end == std::string_view::npos) end = source.size();
    std::string_view line = source.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++line_no;
    auto tokens = detail::tokenize(line, line_no);
    if (tokens.size() > 1) {
      detail::LineParser parser(std::move(tokens), line_no, dialect, bound);
      Statement st = parser.statement();
      bound.emplace(st.name, line_no);
      program.statements.push_back(std::move(st));
    }
    start = end + 1;
  }
  return program;
}

// ---------------------------------------------------------------------------
// Evaluation

namespace detail {

struct SolidRef {
  std::size_t index;
};

using Value = std::variant<double, std::string, SketchPrimitive, Plane, Sketch, SolidRef>;

class Evaluator {
 public:
  explicit Evaluator(Dialect dialect) : dialect_(dialect) {}

  std::vector<ExtrudedSolid> run(const Program& program) {
    for (const auto& st : program.statements) {
      line_ = st.line;
      Value v = eval(st.value);
      if (const auto* ref = std::get_if<SolidRef>(&v); ref && solids_[ref->index].name.empty()) {
        solids_[ref->index].name = st.name;
      }
      env_.emplace(st.name, std::move(v));
    }
    for (std::size_t i = 0; i < solids_.size(); ++i) {
      if (solids_[i].name.empty()) solids_[i].name = "solid_" + std::to_string(i);
    }
    return std::move(solids_);
  }

 private:
  using K = DslError::Kind;

  Value eval(const Expr& e) {
    switch (e.kind) {
      case Expr::Kind::number: return e.number;
      case Expr::Kind::string: return e.text;
      case Expr::Kind::name: {
        if (e.text == "XY_PLANE") return xy_plane();
        if (e.text == "XZ_PLANE") return xz_plane();
        if (e.text == "ZY_PLANE") return zy_plane();
        return env_.at(e.text);
      }
      case Expr::Kind::unary: {
        const double v = number(e.args[0], "operand");
        return e.op == '-' ? -v : v;
      }
      case Expr::Kind::binary: {
        const double a = number(e.args[0], "operand");
        const double b = number(e.args[1], "operand");
        switch (e.op) {
          case '+': return a + b;
          case '-': return a - b;
          case '*': return a * b;
          default:
            if (b == 0) throw DslError(K::domain, line_, "division by zero");
            return a / b;
        }
      }
      case Expr::Kind::call: return call(e);
    }
    return 0.0;
  }

  double number(const Expr& e, const char* role) {
    Value v = eval(e);
    if (auto* d = std::get_if<double>(&v)) return *d;
    throw DslError(K::type, line_, std::string(role) + " must be a number");
  }

  Value call(const Expr& e) {
    const std::string& f = e.text;
    const bool local = dialect_ == Dialect::local;
    if (f == "circle") {
      Circle c{};
      if (local) {
        c.center = Vec3(number(e.args[0], "center_x"), number(e.args[1], "center_y"), 0);
        c.r = number(e.args[2], "radius");
      } else {
        c.center = Vec3(number(e.args[0], "center_x"), number(e.args[1], "center_y"),
                        number(e.args[2], "center_z"));
        c.r = number(e.args[3], "radius");
      }
      if (!(c.r > 0)) throw DslError(K::domain, line_, "circle radius must be positive");
      return SketchPrimitive{c};
    }
    if (f == "rectangle") {
      Rect r{};
      std::size_t k = 0;
      if (local) {
        r.center = Vec3(number(e.args[0], "center_x"), number(e.args[1], "center_y"), 0);
        k = 2;
      } else {
        r.center = Vec3(number(e.args[0], "center_x"), number(e.args[1], "center_y"),
                        number(e.args[2], "center_z"));
        k = 3;
      }
      r.length = number(e.args[k], "length");
      r.width = number(e.args[k + 1], "width");
      if (!(r.length > 0 && r.width > 0)) {
        throw DslError(K::domain, line_, "rectangle sides must be positive");
      }
      return SketchPrimitive{r};
    }
    if (f == "createSketch") {
      Value prim = eval(e.args[0]);
      Value plane = eval(e.args[1]);
      const auto* p = std::get_if<SketchPrimitive>(&prim);
      const auto* pl = std::get_if<Plane>(&plane);
      if (p == nullptr) throw DslError(K::type, line_, "createSketch expects a circle or rectangle");
      if (pl == nullptr) throw DslError(K::type, line_, "createSketch expects a plane");
      return make_sketch(*p, *pl, dialect_, line_);
    }
    if (f == "extrude") {
      Value sk = eval(e.args[0]);
      const auto* s = std::get_if<Sketch>(&sk);
      if (s == nullptr) throw DslError(K::type, line_, "extrude expects a sketch");
      const double length = number(e.args[1], "extrude length");
      solids_.push_back(extrude(*s, length, {}, line_));
      return SolidRef{solids_.size() - 1};
    }
    // cap
    Value solid = eval(e.args[0]);
    Value side = eval(e.args[1]);
    const auto* ref = std::get_if<SolidRef>(&solid);
    const auto* name = std::get_if<std::string>(&side);
    if (ref == nullptr) throw DslError(K::type, line_, "cap expects an extruded solid");
    if (name == nullptr) throw DslError(K::type, line_, "cap expects a side string");
    const auto parsed = parse_side(*name);
    if (!parsed) throw DslError(K::domain, line_, "unknown side '" + *name + "'");
    return cap(solids_[ref->index], *parsed, line_);
  }

  Dialect dialect_;
  std::size_t line_ = 0;
  std::map<std::string, Value> env_;
  std::vector<ExtrudedSolid> solids_;
};

}  // namespace detail

/// Executes statements in order and returns every extruded solid, named after
/// the variable it was first bound to.
inline std::vector<ExtrudedSolid> evaluate(const Program& program) {
  return detail::Evaluator(program.dialect).run(program);
}

inline std::vector<ExtrudedSolid> run(std::string_view source, Dialect dialect) {
  return evaluate(parse(source, dialect));
}

/// Union of the assembly's solids for meshing/export.
inline SolidNode assembly_solid(const std::vector<ExtrudedSolid>& solids) {
  std::vector<SolidNode> nodes;
  nodes.reserve(solids.size());
  for (const auto& s : solids) nodes.push_back(s.solid);
  return make_union(std::move(nodes));
}

}  // namespace cdm::sketch
