#pragma once

// Geometric core: box/cylinder primitives, rigid placement, CSG trees,
// axis-aligned interference predicates, triangulation and mesh analytics.

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "cdm/detail/format.hpp"
#include "cdm/error.hpp"

namespace cdm {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

inline constexpr int kDefaultCylinderSegments = 64;

inline double deg_to_rad(double deg) { return deg / 180.0 * std::numbers::pi; }

inline Mat3 rot_z(double rad) {
  return Eigen::AngleAxisd(rad, Vec3::UnitZ()).toRotationMatrix();
}

/// Proper rigid motion x -> R x + t.
struct RigidTransform {
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();

  static RigidTransform identity() { return {}; }

  Vec3 apply(const Vec3& p) const { return rotation * p + translation; }

  /// (*this) after `inner`: x -> this(inner(x)).
  RigidTransform operator*(const RigidTransform& inner) const {
    return {rotation * inner.rotation, rotation * inner.translation + translation};
  }

  bool is_proper(double tol = 1e-9) const {
    const Mat3 gram = rotation.transpose() * rotation - Mat3::Identity();
    return gram.cwiseAbs().maxCoeff() <= tol &&
           std::abs(rotation.determinant() - 1.0) <= tol;
  }
};

struct Box {
  double w, h, d;  ///< extents along local x, y, z
};

struct Cylinder {
  double r, h;  ///< axis is local z
  int segments = kDefaultCylinderSegments;
};

using Primitive = std::variant<Box, Cylinder>;

struct Aabb {
  Vec3 min;
  Vec3 max;

  Vec3 center() const { return 0.5 * (min + max); }
  Vec3 extent() const { return max - min; }

  Aabb merged(const Aabb& other) const {
    return {min.cwiseMin(other.min), max.cwiseMax(other.max)};
  }

  bool approx_equal(const Aabb& other, double tol) const {
    return (min - other.min).cwiseAbs().maxCoeff() <= tol &&
           (max - other.max).cwiseAbs().maxCoeff() <= tol;
  }
};

struct LeafNode;
struct UnionNode;
struct DifferenceNode;

/// Immutable CSG tree handle. Copies share structure.
class SolidNode {
 public:
  struct Impl;

  explicit SolidNode(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

  const LeafNode* leaf() const;
  const UnionNode* as_union() const;
  const DifferenceNode* as_difference() const;

 private:
  std::shared_ptr<const Impl> impl_;
};

struct LeafNode {
  Primitive primitive;
  RigidTransform transform;
};

struct UnionNode {
  std::vector<SolidNode> children;
};

struct DifferenceNode {
  std::vector<SolidNode> operands;  ///< operands[0] is the base, the rest are tools

  const SolidNode& base() const { return operands.front(); }
  std::span<const SolidNode> tools() const {
    return std::span<const SolidNode>(operands).subspan(1);
  }
};

struct SolidNode::Impl {
  std::variant<LeafNode, UnionNode, DifferenceNode> node;
};

inline const LeafNode* SolidNode::leaf() const { return std::get_if<LeafNode>(&impl_->node); }
inline const UnionNode* SolidNode::as_union() const {
  return std::get_if<UnionNode>(&impl_->node);
}
inline const DifferenceNode* SolidNode::as_difference() const {
  return std::get_if<DifferenceNode>(&impl_->node);
}

namespace detail {

template <class Node>
SolidNode make_node(Node node) {
  return SolidNode(std::make_shared<const SolidNode::Impl>(SolidNode::Impl{std::move(node)}));
}

}  // namespace detail

inline SolidNode make_leaf(Primitive primitive, RigidTransform transform = {}) {
  return detail::make_node(LeafNode{std::move(primitive), std::move(transform)});
}

inline SolidNode make_box(double w, double h, double d) {
  detail::require(w > 0 && h > 0 && d > 0, "box dimensions must be positive");
  return make_leaf(Box{w, h, d});
}

inline SolidNode make_cylinder(double r, double h, int segments = kDefaultCylinderSegments) {
  detail::require(r > 0 && h > 0, "cylinder dimensions must be positive");
  detail::require(segments >= 8, "cylinder needs at least 8 segments");
  return make_leaf(Cylinder{r, h, segments});
}

inline SolidNode make_union(std::vector<SolidNode> nodes) {
  detail::require(!nodes.empty(), "union of zero solids");
  return detail::make_node(UnionNode{std::move(nodes)});
}

inline SolidNode make_difference(SolidNode base, std::vector<SolidNode> tools) {
  std::vector<SolidNode> operands;
  operands.reserve(tools.size() + 1);
  operands.push_back(std::move(base));
  for (auto& t : tools) operands.push_back(std::move(t));
  return detail::make_node(DifferenceNode{std::move(operands)});
}

/// Applies `outer` after every transform already in the tree.
inline SolidNode transformed(const SolidNode& node, const RigidTransform& outer) {
  if (const auto* leaf = node.leaf()) {
    return make_leaf(leaf->primitive, outer * leaf->transform);
  }
  if (const auto* u = node.as_union()) {
    std::vector<SolidNode> children;
    children.reserve(u->children.size());
    for (const auto& c : u->children) children.push_back(transformed(c, outer));
    return make_union(std::move(children));
  }
  const auto* diff = node.as_difference();
  std::vector<SolidNode> operands;
  operands.reserve(diff->operands.size());
  for (const auto& c : diff->operands) operands.push_back(transformed(c, outer));
  return detail::make_node(DifferenceNode{std::move(operands)});
}

/// Rotates about global z by `a_deg`, then translates by (x, y, z).
inline SolidNode place(const SolidNode& node, double x, double y, double z, double a_deg) {
  return transformed(node, RigidTransform{rot_z(deg_to_rad(a_deg)), Vec3(x, y, z)});
}

inline Aabb primitive_aabb(const Primitive& primitive, const RigidTransform& xf) {
  if (const auto* box = std::get_if<Box>(&primitive)) {
    const Vec3 half(box->w / 2, box->h / 2, box->d / 2);
    // |R| * half gives the half-extent of a rotated box.
    const Vec3 reach = xf.rotation.cwiseAbs() * half;
    return {xf.translation - reach, xf.translation + reach};
  }
  const auto& cyl = std::get<Cylinder>(primitive);
  const Vec3 axis = xf.rotation.col(2);
  Vec3 reach;
  for (int i = 0; i < 3; ++i) {
    const double a = std::clamp(std::abs(axis[i]), 0.0, 1.0);
    reach[i] = a * cyl.h / 2 + cyl.r * std::sqrt(std::max(0.0, 1.0 - a * a));
  }
  return {xf.translation - reach, xf.translation + reach};
}

/// Bounding box. Differences report their base box (subtraction cannot grow it).
inline Aabb aabb(const SolidNode& node) {
  if (const auto* leaf = node.leaf()) return primitive_aabb(leaf->primitive, leaf->transform);
  if (const auto* u = node.as_union()) {
    Aabb box = aabb(u->children.front());
    for (std::size_t i = 1; i < u->children.size(); ++i) box = box.merged(aabb(u->children[i]));
    return box;
  }
  return aabb(node.as_difference()->base());
}

namespace detail {

/// Aabb of a leaf box whose rotation is a multiple of 90 degrees about z.
inline Aabb axis_aligned_box(const SolidNode& node, double eps) {
  const auto* leaf = node.leaf();
  if (leaf == nullptr || !std::holds_alternative<Box>(leaf->primitive)) {
    throw InvalidArgument("interference predicates need placed box leaves");
  }
  const Mat3& r = leaf->transform.rotation;
  const bool z_fixed = std::abs(r(2, 2) - 1.0) <= eps && std::abs(r(0, 2)) <= eps &&
                       std::abs(r(1, 2)) <= eps && std::abs(r(2, 0)) <= eps &&
                       std::abs(r(2, 1)) <= eps;
  const bool quarter_turn = std::abs(r(0, 0) * r(0, 1)) <= eps;
  if (!z_fixed || !quarter_turn) {
    throw InvalidArgument("box is not axis aligned (rotation must be k*90 deg about z)");
  }
  return aabb(node);
}

inline std::array<double, 3> axis_overlaps(const Aabb& a, const Aabb& b) {
  std::array<double, 3> out{};
  for (int i = 0; i < 3; ++i) out[i] = std::min(a.max[i], b.max[i]) - std::max(a.min[i], b.min[i]);
  return out;
}

}  // namespace detail

inline constexpr double kContactEps = 1e-9;

/// True when the box interiors intersect by more than `eps` on every axis.
inline bool boxes_overlap(const SolidNode& a, const SolidNode& b, double eps = kContactEps) {
  const auto o = detail::axis_overlaps(detail::axis_aligned_box(a, eps), detail::axis_aligned_box(b, eps));
  return o[0] > eps && o[1] > eps && o[2] > eps;
}

/// True when the closed boxes meet (within `eps`) but do not overlap.
inline bool boxes_touch(const SolidNode& a, const SolidNode& b, double eps = kContactEps) {
  const auto o = detail::axis_overlaps(detail::axis_aligned_box(a, eps), detail::axis_aligned_box(b, eps));
  const bool closed_meet = o[0] >= -eps && o[1] >= -eps && o[2] >= -eps;
  const bool interior = o[0] > eps && o[1] > eps && o[2] > eps;
  return closed_meet && !interior;
}

struct TriMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> triangles;

  void append(const TriMesh& other) {
    const int offset = static_cast<int>(vertices.size());
    vertices.insert(vertices.end(), other.vertices.begin(), other.vertices.end());
    for (const auto& t : other.triangles) {
      triangles.push_back({t[0] + offset, t[1] + offset, t[2] + offset});
    }
  }
};

inline TriMesh primitive_mesh(const Primitive& primitive, const RigidTransform& xf) {
  TriMesh mesh;
  if (const auto* box = std::get_if<Box>(&primitive)) {
    const double x = box->w / 2, y = box->h / 2, z = box->d / 2;
    const std::array<Vec3, 8> corners = {Vec3(-x, -y, -z), Vec3(x, -y, -z), Vec3(x, y, -z),
                                         Vec3(-x, y, -z),  Vec3(-x, -y, z), Vec3(x, -y, z),
                                         Vec3(x, y, z),    Vec3(-x, y, z)};
    for (const auto& c : corners) mesh.vertices.push_back(xf.apply(c));
    // Counter-clockwise seen from outside.
    mesh.triangles = {{0, 2, 1}, {0, 3, 2}, {4, 5, 6}, {4, 6, 7}, {0, 1, 5}, {0, 5, 4},
                      {1, 2, 6}, {1, 6, 5}, {2, 3, 7}, {2, 7, 6}, {3, 0, 4}, {3, 4, 7}};
    return mesh;
  }
  const auto& cyl = std::get<Cylinder>(primitive);
  const int n = cyl.segments;
  const double hz = cyl.h / 2;
  mesh.vertices.push_back(xf.apply(Vec3(0, 0, -hz)));  // 0: bottom center
  mesh.vertices.push_back(xf.apply(Vec3(0, 0, hz)));   // 1: top center
  for (int k = 0; k < n; ++k) {
    const double a = 2.0 * std::numbers::pi * k / n;
    const double cx = cyl.r * std::cos(a), cy = cyl.r * std::sin(a);
    mesh.vertices.push_back(xf.apply(Vec3(cx, cy, -hz)));  // 2 + 2k
    mesh.vertices.push_back(xf.apply(Vec3(cx, cy, hz)));   // 3 + 2k
  }
  for (int k = 0; k < n; ++k) {
    const int j = (k + 1) % n;
    const int b0 = 2 + 2 * k, t0 = 3 + 2 * k, b1 = 2 + 2 * j, t1 = 3 + 2 * j;
    mesh.triangles.push_back({0, b1, b0});
    mesh.triangles.push_back({1, t0, t1});
    mesh.triangles.push_back({b0, b1, t1});
    mesh.triangles.push_back({b0, t1, t0});
  }
  return mesh;
}

/// Concatenates primitive meshes with transforms baked in. Differences are
/// rejected: mesh booleans are not supported.
inline TriMesh triangulate(const SolidNode& node) {
  if (const auto* leaf = node.leaf()) return primitive_mesh(leaf->primitive, leaf->transform);
  if (node.as_difference() != nullptr) {
    throw UnsupportedBoolean("cannot triangulate a CSG difference");
  }
  TriMesh mesh;
  for (const auto& child : node.as_union()->children) mesh.append(triangulate(child));
  return mesh;
}

/// Signed volume by the divergence theorem.
inline double mesh_volume(const TriMesh& mesh) {
  double six_v = 0;
  for (const auto& t : mesh.triangles) {
    const Vec3& a = mesh.vertices[t[0]];
    const Vec3& b = mesh.vertices[t[1]];
    const Vec3& c = mesh.vertices[t[2]];
    six_v += a.dot(b.cross(c));
  }
  return six_v / 6.0;
}

/// Every undirected edge used by exactly two triangles.
inline bool is_watertight(const TriMesh& mesh) {
  std::vector<std::pair<int, int>> edges;
  edges.reserve(mesh.triangles.size() * 3);
  for (const auto& t : mesh.triangles) {
    for (int i = 0; i < 3; ++i) {
      const int a = t[i], b = t[(i + 1) % 3];
      edges.emplace_back(std::min(a, b), std::max(a, b));
    }
  }
  std::sort(edges.begin(), edges.end());
  for (std::size_t i = 0; i < edges.size();) {
    std::size_t j = i;
    while (j < edges.size() && edges[j] == edges[i]) ++j;
    if (j - i != 2) return false;
    i = j;
  }
  return true;
}

inline Vec3 facet_normal(const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 n = (b - a).cross(c - a);
  const double len = n.norm();
  return len > 0 ? Vec3(n / len) : Vec3::Zero();
}

/// ASCII STL with one facet per triangle, in mesh order, 6-decimal fixed point.
inline std::string write_stl_ascii(const TriMesh& mesh, std::string_view name) {
  using detail::fixed;
  std::string out = "solid " + std::string(name) + "\n";
  auto triple = [](const Vec3& v) {
    return fixed(v.x(), 6) + " " + fixed(v.y(), 6) + " " + fixed(v.z(), 6);
  };
  for (const auto& t : mesh.triangles) {
    const Vec3& a = mesh.vertices[t[0]];
    const Vec3& b = mesh.vertices[t[1]];
    const Vec3& c = mesh.vertices[t[2]];
    out += "  facet normal " + triple(facet_normal(a, b, c)) + "\n";
    out += "    outer loop\n";
    out += "      vertex " + triple(a) + "\n";
    out += "      vertex " + triple(b) + "\n";
    out += "      vertex " + triple(c) + "\n";
    out += "    endloop\n";
    out += "  endfacet\n";
  }
  out += "endsolid " + std::string(name);
  return out;
}

}  // namespace cdm
