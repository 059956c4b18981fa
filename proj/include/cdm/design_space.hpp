#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cdm/detail/format.hpp"
#include "cdm/error.hpp"
#include "cdm/solids.hpp"

namespace cdm::design {

using Assignment = std::map<std::string, double>;

enum class ParamKind { real, integer };

struct Parameter {
  std::string name;
  ParamKind kind = ParamKind::real;
  double lower = 0;
  double upper = 0;
};

/// Arithmetic over numeric literals and parameter names: + - * / and parens.
class Expression {
 public:
  Expression() = default;

  static Expression parse(std::string_view text) {
    Parser p{text};
    Expression e;
    e.text_ = std::string(text);
    e.root_ = p.expression();
    p.skip_space();
    if (p.pos != text.size()) {
      throw InvalidArgument("unexpected '" + std::string(1, text[p.pos]) + "' in expression '" +
                            e.text_ + "'");
    }
    return e;
  }

  double eval(const Assignment& asg) const { return eval(*root_, asg); }

  std::set<std::string> names() const {
    std::set<std::string> out;
    collect(*root_, out);
    return out;
  }

  const std::string& text() const { return text_; }

 private:
  struct Node {
    char op = 0;  ///< 0 literal, 'n' name, 'u' negate, else binary operator
    double value = 0;
    std::string name;
    std::shared_ptr<const Node> lhs, rhs;
  };
  using NodePtr = std::shared_ptr<const Node>;

  struct Parser {
    std::string_view s;
    std::size_t pos = 0;

    void skip_space() {
      while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool accept(char c) {
      skip_space();
      if (pos < s.size() && s[pos] == c) {
        ++pos;
        return true;
      }
      return false;
    }
    NodePtr binary(char op, NodePtr a, NodePtr b) {
      auto n = std::make_shared<Node>();
      n->op = op;
      n->lhs = std::move(a);
      n->rhs = std::move(b);
      return n;
    }
    NodePtr expression() {
      NodePtr lhs = term();
      for (;;) {
        if (accept('+')) lhs = binary('+', lhs, term());
        else if (accept('-')) lhs = binary('-', lhs, term());
        else return lhs;
      }
    }
    NodePtr term() {
      NodePtr lhs = factor();
      for (;;) {
        if (accept('*')) lhs = binary('*', lhs, factor());
        else if (accept('/')) lhs = binary('/', lhs, factor());
        else return lhs;
      }
    }
    NodePtr factor() {
      if (accept('-')) {
        auto n = std::make_shared<Node>();
        n->op = 'u';
        n->lhs = factor();
        return n;
      }
      if (accept('+')) return factor();
      if (accept('(')) {
        NodePtr inner = expression();
        if (!accept(')')) throw InvalidArgument("expected ')' in expression");
        return inner;
      }
      skip_space();
      if (pos >= s.size()) throw InvalidArgument("unexpected end of expression");
      const char c = s[pos];
      auto n = std::make_shared<Node>();
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        const std::string rest(s.substr(pos));
        std::size_t used = 0;
        n->value = std::stod(rest, &used);
        pos += used;
        return n;
      }
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        const std::size_t start = pos;
        while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_')) ++pos;
        n->op = 'n';
        n->name = std::string(s.substr(start, pos - start));
        return n;
      }
      throw InvalidArgument(std::string("unexpected '") + c + "' in expression");
    }
  };

  static double eval(const Node& n, const Assignment& asg) {
    switch (n.op) {
      case 0: return n.value;
      case 'n': {
        auto it = asg.find(n.name);
        if (it == asg.end()) throw InvalidArgument("missing parameter '" + n.name + "'");
        return it->second;
      }
      case 'u': return -eval(*n.lhs, asg);
      case '+': return eval(*n.lhs, asg) + eval(*n.rhs, asg);
      case '-': return eval(*n.lhs, asg) - eval(*n.rhs, asg);
      case '*': return eval(*n.lhs, asg) * eval(*n.rhs, asg);
      default: return eval(*n.lhs, asg) / eval(*n.rhs, asg);
    }
  }

  static void collect(const Node& n, std::set<std::string>& out) {
    if (n.op == 'n') out.insert(n.name);
    if (n.lhs) collect(*n.lhs, out);
    if (n.rhs) collect(*n.rhs, out);
  }

  std::string text_;
  NodePtr root_;
};

enum class CompareOp { lt, le, eq, ge, gt };

inline std::string_view to_string(CompareOp op) {
  switch (op) {
    case CompareOp::lt: return "<";
    case CompareOp::le: return "<=";
    case CompareOp::eq: return "=";
    case CompareOp::ge: return ">=";
    case CompareOp::gt: return ">";
  }
  return "?";
}

inline CompareOp parse_compare_op(std::string_view text) {
  if (text == "<") return CompareOp::lt;
  if (text == "<=") return CompareOp::le;
  if (text == "=" || text == "==") return CompareOp::eq;
  if (text == ">=") return CompareOp::ge;
  if (text == ">") return CompareOp::gt;
  throw InvalidArgument("unknown comparison '" + std::string(text) + "'");
}

struct Compare {
  Expression lhs;
  CompareOp op;
  Expression rhs;
};

struct DivisibleBy {
  std::string param;
  long k;
};

using Constraint = std::variant<Compare, DivisibleBy>;

inline Constraint compare(std::string_view lhs, CompareOp op, std::string_view rhs) {
  return Compare{Expression::parse(lhs), op, Expression::parse(rhs)};
}

inline std::string describe(const Constraint& c) {
  if (const auto* cmp = std::get_if<Compare>(&c)) {
    return cmp->lhs.text() + " " + std::string(to_string(cmp->op)) + " " + cmp->rhs.text();
  }
  const auto& d = std::get<DivisibleBy>(c);
  return d.param + " % " + std::to_string(d.k) + " = 0";
}

struct Violation {
  std::string constraint;
  double residual;  ///< amount by which the condition is missed
};

inline constexpr double kEqualityTol = 1e-9;

class DesignSpace {
 public:
  DesignSpace(std::vector<Parameter> parameters, std::vector<Constraint> constraints = {})
      : parameters_(std::move(parameters)), constraints_(std::move(constraints)) {
    std::set<std::string> seen;
    for (const auto& p : parameters_) {
      detail::require(!p.name.empty(), "parameter name must be non-empty");
      detail::require(seen.insert(p.name).second, "duplicate parameter '" + p.name + "'");
      detail::require(std::isfinite(p.lower) && std::isfinite(p.upper),
                      "parameter '" + p.name + "' needs finite bounds");
      detail::require(p.lower <= p.upper, "parameter '" + p.name + "' has lower > upper");
      if (p.kind == ParamKind::integer) {
        detail::require(p.lower == std::round(p.lower) && p.upper == std::round(p.upper),
                        "integer parameter '" + p.name + "' needs integral bounds");
      }
    }
    for (const auto& c : constraints_) {
      std::set<std::string> refs;
      if (const auto* cmp = std::get_if<Compare>(&c)) {
        refs = cmp->lhs.names();
        refs.merge(cmp->rhs.names());
      } else {
        const auto& d = std::get<DivisibleBy>(c);
        detail::require(d.k > 0, "divisor must be a positive integer");
        refs.insert(d.param);
      }
      for (const auto& r : refs) {
        detail::require(seen.contains(r), "constraint references unknown parameter '" + r + "'");
      }
    }
  }

  const std::vector<Parameter>& parameters() const { return parameters_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }

  const Parameter& parameter(std::string_view name) const {
    for (const auto& p : parameters_) {
      if (p.name == name) return p;
    }
    throw InvalidArgument("unknown parameter '" + std::string(name) + "'");
  }

  std::vector<Violation> validate(const Assignment& asg) const {
    std::vector<Violation> out;
    for (const auto& p : parameters_) {
      auto it = asg.find(p.name);
      if (it == asg.end()) throw InvalidArgument("missing parameter '" + p.name + "'");
      const double v = it->second;
      if (v < p.lower) out.push_back({p.name + " >= " + detail::general(p.lower), p.lower - v});
      if (v > p.upper) out.push_back({p.name + " <= " + detail::general(p.upper), v - p.upper});
      if (p.kind == ParamKind::integer && v != std::round(v)) {
        out.push_back({p.name + " is integer", std::abs(v - std::round(v))});
      }
    }
    for (const auto& c : constraints_) {
      const double r = residual(c, asg);
      if (r > 0) out.push_back({describe(c), r});
    }
    return out;
  }

  bool is_valid(const Assignment& asg) const { return validate(asg).empty(); }

  /// Amount of violation of one constraint; 0 when satisfied.
  static double residual(const Constraint& c, const Assignment& asg) {
    if (const auto* cmp = std::get_if<Compare>(&c)) {
      const double d = cmp->lhs.eval(asg) - cmp->rhs.eval(asg);
      switch (cmp->op) {
        case CompareOp::lt: return d < 0 ? 0 : (d == 0 ? std::numeric_limits<double>::min() : d);
        case CompareOp::le: return d <= 0 ? 0 : d;
        case CompareOp::eq: return std::abs(d) <= kEqualityTol ? 0 : std::abs(d);
        case CompareOp::ge: return d >= 0 ? 0 : -d;
        case CompareOp::gt: return d > 0 ? 0 : (d == 0 ? std::numeric_limits<double>::min() : -d);
      }
    }
    const auto& div = std::get<DivisibleBy>(c);
    auto it = asg.find(div.param);
    if (it == asg.end()) throw InvalidArgument("missing parameter '" + div.param + "'");
    const double m = std::fmod(std::abs(it->second), static_cast<double>(div.k));
    return std::min(m, static_cast<double>(div.k) - m);
  }

  /// Clamps into bounds; integer values round to the nearest in-range integer.
  Assignment clip(const Assignment& asg) const {
    Assignment out = asg;
    for (const auto& p : parameters_) {
      auto it = out.find(p.name);
      if (it == out.end()) throw InvalidArgument("missing parameter '" + p.name + "'");
      double v = std::clamp(it->second, p.lower, p.upper);
      if (p.kind == ParamKind::integer) v = std::clamp(std::round(v), p.lower, p.upper);
      it->second = v;
    }
    return out;
  }

  /// Lattice with `divisions[i]` points per parameter (1 means the lower
  /// bound only), last parameter varying fastest, infeasible points dropped.
  std::vector<Assignment> sample_grid(const std::vector<int>& divisions) const {
    detail::require(divisions.size() == parameters_.size(),
                    "one division count per parameter required");
    std::vector<std::vector<double>> axes;
    for (std::size_t i = 0; i < parameters_.size(); ++i) {
      const auto& p = parameters_[i];
      const int n = divisions[i];
      detail::require(n >= 1, "divisions must be positive");
      std::vector<double> axis;
      for (int k = 0; k < n; ++k) {
        double v = n == 1 ? p.lower : p.lower + (p.upper - p.lower) * k / (n - 1);
        if (k == n - 1 && n > 1) v = p.upper;
        if (p.kind == ParamKind::integer) v = std::round(v);
        if (axis.empty() || axis.back() != v) axis.push_back(v);
      }
      axes.push_back(std::move(axis));
    }
    std::vector<Assignment> out;
    if (parameters_.empty()) return out;
    std::vector<std::size_t> idx(axes.size(), 0);
    for (;;) {
      Assignment a;
      for (std::size_t i = 0; i < axes.size(); ++i) a[parameters_[i].name] = axes[i][idx[i]];
      if (is_valid(a)) out.push_back(std::move(a));
      std::size_t d = axes.size();
      while (d > 0) {
        --d;
        if (++idx[d] < axes[d].size()) break;
        idx[d] = 0;
        if (d == 0) return out;
      }
    }
  }

  /// Seeded uniform rejection sampling.
  std::vector<Assignment> sample_random(std::size_t n, std::uint64_t seed) const {
    std::vector<Assignment> out;
    if (n == 0) return out;
    std::mt19937_64 rng(seed);
    constexpr std::size_t kProbe = 1'000'000;
    std::size_t draws = 0;
    while (out.size() < n) {
      Assignment a;
      for (const auto& p : parameters_) {
        if (p.kind == ParamKind::integer) {
          std::uniform_int_distribution<long long> dist(static_cast<long long>(p.lower),
                                                        static_cast<long long>(p.upper));
          a[p.name] = static_cast<double>(dist(rng));
        } else {
          std::uniform_real_distribution<double> dist(p.lower, p.upper);
          a[p.name] = p.lower == p.upper ? p.lower : dist(rng);
        }
      }
      ++draws;
      if (is_valid(a)) out.push_back(std::move(a));
      if (draws == kProbe && static_cast<double>(out.size()) / kProbe < 1e-3) {
        throw InvalidArgument("design space is effectively infeasible: acceptance rate " +
                              detail::general(static_cast<double>(out.size()) / kProbe, 3) +
                              " after " + std::to_string(kProbe) + " draws");
      }
    }
    return out;
  }

  std::vector<double> to_vector(const Assignment& asg) const {
    std::vector<double> v;
    for (const auto& p : parameters_) {
      auto it = asg.find(p.name);
      if (it == asg.end()) throw InvalidArgument("missing parameter '" + p.name + "'");
      v.push_back(it->second);
    }
    return v;
  }

  Assignment from_vector(const std::vector<double>& v) const {
    detail::require(v.size() == parameters_.size(), "vector size does not match parameter count");
    Assignment a;
    for (std::size_t i = 0; i < v.size(); ++i) a[parameters_[i].name] = v[i];
    return a;
  }

 private:
  std::vector<Parameter> parameters_;
  std::vector<Constraint> constraints_;
};

/// Lego brick space. The open upper bounds are capped at `cap`.
inline DesignSpace lego_space(double cap = 60) {
  return DesignSpace(
      {
          {"length", ParamKind::integer, 3, cap},
          {"width", ParamKind::integer, 3, cap},
          {"height", ParamKind::integer, 1, std::floor(cap / 2)},
      },
      {DivisibleBy{"length", 3}, DivisibleBy{"width", 3}});
}

/// Car body proportions: width below length and above height.
inline DesignSpace car_space() {
  return DesignSpace(
      {
          {"length", ParamKind::real, 2, 6},
          {"width", ParamKind::real, 1, 3},
          {"height", ParamKind::real, 1, 2.5},
      },
      {compare("width", CompareOp::lt, "length"), compare("width", CompareOp::gt, "height")});
}

/// Brick body with unit studs on a 3-unit pitch, top of studs half a unit
/// above the body.
inline SolidNode lego_brick(double length, double width, double height) {
  detail::require(length > 0 && width > 0 && height > 0, "brick dimensions must be positive");
  std::vector<SolidNode> parts;
  parts.push_back(make_leaf(Box{length, width, height},
                            RigidTransform{Mat3::Identity(), Vec3(length / 2, width / 2, height / 2)}));
  const int nx = static_cast<int>(std::floor(length / 3));
  const int ny = static_cast<int>(std::floor(width / 3));
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      parts.push_back(make_leaf(Cylinder{1, 1, kDefaultCylinderSegments},
                                RigidTransform{Mat3::Identity(), Vec3(1.5 + 3 * i, 1.5 + 3 * j, height)}));
    }
  }
  return make_union(std::move(parts));
}

inline std::size_t stud_count(const SolidNode& brick) {
  const UnionNode* u = brick.as_union();
  return u == nullptr ? 0 : u->children.size() - 1;
}

}  // namespace cdm::design
