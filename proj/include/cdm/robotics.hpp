#pragma once

// Articulated assemblies. Component geometry and poses are in millimetres;
// mass properties and URDF output are in metres.

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "cdm/detail/format.hpp"
#include "cdm/error.hpp"
#include "cdm/solids.hpp"

namespace cdm::robot {

inline constexpr double kMmToM = 1e-3;

struct Cuboid {
  double w, h, d;  // extents along local x, y, z
};

struct CylinderGeom {
  double r, h;  // axis along local z
};

using Geometry = std::variant<Cuboid, CylinderGeom>;

struct Component {
  std::string name;
  double mass = 0;  // kg
  Geometry geometry;
  Vec3 translation = Vec3::Zero();  // link frame origin, absolute
  Vec3 rpy = Vec3::Zero();          // absolute roll, pitch, yaw
  std::optional<std::string> parent;
  Vec3 visual_offset = Vec3::Zero();  // geometry center in the link frame
};

inline Component create_box(std::string name, double mass, double w, double h, double d) {
  cdm::detail::require(w > 0 && h > 0 && d > 0, "box '" + name + "' needs positive dimensions");
  cdm::detail::require(mass >= 0, "component '" + name + "' has negative mass");
  return Component{std::move(name), mass, Cuboid{w, h, d}};
}

inline Component create_cylinder(std::string name, double mass, double r, double h) {
  cdm::detail::require(r > 0 && h > 0, "cylinder '" + name + "' needs positive dimensions");
  cdm::detail::require(mass >= 0, "component '" + name + "' has negative mass");
  return Component{std::move(name), mass, CylinderGeom{r, h}};
}

/// Copy with absolute translation and yaw; other fields are set, not accumulated.
inline Component place(const Component& c, double x, double y, double z, double a_deg = 0,
                       std::optional<std::string> suffix = std::nullopt) {
  Component out = c;
  out.translation = Vec3(x, y, z);
  out.rpy = Vec3(0, 0, deg_to_rad(a_deg));
  if (suffix) out.name = c.name + *suffix;
  return out;
}

/// R = Rz(yaw) Ry(pitch) Rx(roll).
inline Mat3 rpy_to_matrix(const Vec3& rpy) {
  return (Eigen::AngleAxisd(rpy.z(), Vec3::UnitZ()) * Eigen::AngleAxisd(rpy.y(), Vec3::UnitY()) *
          Eigen::AngleAxisd(rpy.x(), Vec3::UnitX()))
      .toRotationMatrix();
}

/// Inverse of rpy_to_matrix. At pitch = +-pi/2 roll is fixed to zero.
inline Vec3 matrix_to_rpy(const Mat3& R) {
  const double pitch = std::asin(std::clamp(-R(2, 0), -1.0, 1.0));
  if (std::abs(std::cos(pitch)) < 1e-9) {
    return {0.0, pitch, std::atan2(-R(0, 1), R(1, 1))};
  }
  return {std::atan2(R(2, 1), R(2, 2)), pitch, std::atan2(R(1, 0), R(0, 0))};
}

enum class JointType { fixed, continuous, revolute };

inline std::string_view to_string(JointType t) {
  switch (t) {
    case JointType::fixed: return "fixed";
    case JointType::continuous: return "continuous";
    case JointType::revolute: return "revolute";
  }
  return "fixed";
}

struct JointSpec {
  JointType type = JointType::fixed;
  Vec3 axis = Vec3::UnitZ();
  double lower = 0, upper = 0;  // revolute only, rad
  double effort = 10, velocity = 10;
};

inline JointSpec continuous(const Vec3& axis = Vec3::UnitZ()) {
  return {JointType::continuous, axis};
}

inline JointSpec revolute(const Vec3& axis, double lower, double upper) {
  return {JointType::revolute, axis, lower, upper};
}

class Assembly {
 public:
  void add(Component c) {
    if (index_.contains(c.name)) throw AssemblyError("duplicate component name '" + c.name + "'");
    index_.emplace(c.name, components_.size());
    components_.push_back(std::move(c));
    finalized_ = false;
  }

  void set_parent(const std::string& child, std::optional<std::string> parent) {
    if (parent && !index_.contains(*parent)) {
      throw AssemblyError("unknown parent '" + *parent + "' for '" + child + "'");
    }
    mutable_component(child).parent = std::move(parent);
    finalized_ = false;
  }

  void set_joint(const std::string& child, JointSpec spec) {
    mutable_component(child);
    cdm::detail::require(spec.axis.norm() > 0, "joint axis must be nonzero");
    spec.axis.normalize();
    if (spec.type == JointType::revolute) {
      cdm::detail::require(spec.lower <= spec.upper, "revolute limits must satisfy lower <= upper");
    }
    joints_[child] = spec;
    finalized_ = false;
  }

  /// Checks for a single root, resolvable parents and no cycles.
  void finalize() {
    std::vector<std::string> roots;
    for (const auto& c : components_) {
      if (!c.parent) {
        roots.push_back(c.name);
      } else if (!index_.contains(*c.parent)) {
        throw AssemblyError("component '" + c.name + "' has dangling parent '" + *c.parent + "'");
      }
    }
    if (components_.empty()) throw AssemblyError("assembly is empty");
    if (roots.size() != 1) {
      std::string names;
      for (const auto& r : roots) names += (names.empty() ? "" : ", ") + r;
      throw AssemblyError("assembly must have exactly one root component, found " +
                          std::to_string(roots.size()) + (names.empty() ? "" : " (" + names + ")"));
    }
    for (const auto& c : components_) {
      std::set<std::string> seen{c.name};
      const Component* cur = &c;
      while (cur->parent) {
        if (!seen.insert(*cur->parent).second) {
          throw AssemblyError("parent cycle through '" + c.name + "'");
        }
        cur = &component(*cur->parent);
      }
    }
    finalized_ = true;
  }

  bool finalized() const { return finalized_; }

  void require_finalized() const {
    if (!finalized_) throw AssemblyError("assembly must be finalized first");
  }

  const std::vector<Component>& components() const { return components_; }

  const Component& component(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw AssemblyError("unknown component '" + name + "'");
    return components_[it->second];
  }

  bool contains(const std::string& name) const { return index_.contains(name); }

  JointSpec joint(const std::string& child) const {
    auto it = joints_.find(child);
    return it == joints_.end() ? JointSpec{} : it->second;
  }

  const Component& root() const {
    for (const auto& c : components_) {
      if (!c.parent) return c;
    }
    throw AssemblyError("assembly has no root");
  }

 private:
  Component& mutable_component(const std::string& name) {
    auto it = index_.find(name);
    if (it == index_.end()) throw AssemblyError("unknown component '" + name + "'");
    return components_[it->second];
  }

  std::vector<Component> components_;
  std::map<std::string, std::size_t> index_;
  std::map<std::string, JointSpec> joints_;
  bool finalized_ = false;
};

struct RelativePose {
  Vec3 translation;  // mm, in the parent frame
  Mat3 rotation;
  Vec3 rpy;
};

inline RelativePose relative_pose(const Assembly& a, const std::string& child) {
  const Component& c = a.component(child);
  if (!c.parent) throw AssemblyError("root component '" + child + "' has no relative pose");
  const Component& p = a.component(*c.parent);
  const Mat3 Rp = rpy_to_matrix(p.rpy);
  const Mat3 Rrel = Rp.transpose() * rpy_to_matrix(c.rpy);
  return {Rp.transpose() * (c.translation - p.translation), Rrel, matrix_to_rpy(Rrel)};
}

/// Solid-body inertia about the geometry center in the link frame, kg m^2.
inline Mat3 link_inertia(const Component& c) {
  if (!(c.mass > 0)) throw InvalidArgument("component '" + c.name + "' has no mass");
  const double m = c.mass;
  Vec3 diag;
  if (const auto* b = std::get_if<Cuboid>(&c.geometry)) {
    const double w = b->w * kMmToM, h = b->h * kMmToM, d = b->d * kMmToM;
    diag = Vec3(h * h + d * d, w * w + d * d, w * w + h * h) * (m / 12);
  } else {
    const auto& cy = std::get<CylinderGeom>(c.geometry);
    const double r = cy.r * kMmToM, h = cy.h * kMmToM;
    const double radial = m * (3 * r * r + h * h) / 12;
    diag = Vec3(radial, radial, m * r * r / 2);
  }
  return diag.asDiagonal();
}

/// Geometry center in world coordinates, mm.
inline Vec3 world_center(const Component& c) {
  return c.translation + rpy_to_matrix(c.rpy) * c.visual_offset;
}

struct MassProperties {
  double mass;   // kg
  Vec3 com;      // m
  Mat3 inertia;  // kg m^2 about com, world axes
};

/// Inertia of the assembly about an arbitrary world point (m).
inline Mat3 inertia_about(const Assembly& a, const Vec3& point) {
  Mat3 I = Mat3::Zero();
  for (const auto& c : a.components()) {
    if (c.mass == 0) continue;
    const Mat3 R = rpy_to_matrix(c.rpy);
    const Vec3 d = world_center(c) * kMmToM - point;
    I += R * link_inertia(c) * R.transpose() + c.mass * (d.dot(d) * Mat3::Identity() - d * d.transpose());
  }
  return I;
}

inline MassProperties assembly_mass_properties(const Assembly& a) {
  a.require_finalized();
  double M = 0;
  Vec3 moment = Vec3::Zero();
  for (const auto& c : a.components()) {
    M += c.mass;
    moment += c.mass * world_center(c) * kMmToM;
  }
  if (!(M > 0)) throw InvalidArgument("assembly has zero total mass");
  const Vec3 com = moment / M;
  return {M, com, inertia_about(a, com)};
}

inline SolidNode to_solid(const Component& c) {
  const RigidTransform xf{rpy_to_matrix(c.rpy), world_center(c)};
  if (const auto* b = std::get_if<Cuboid>(&c.geometry)) return make_leaf(Box{b->w, b->h, b->d}, xf);
  const auto& cy = std::get<CylinderGeom>(c.geometry);
  return make_leaf(Cylinder{cy.r, cy.h, kDefaultCylinderSegments}, xf);
}

inline SolidNode to_solid(const Assembly& a) {
  std::vector<SolidNode> parts;
  for (const auto& c : a.components()) parts.push_back(to_solid(c));
  return make_union(std::move(parts));
}

namespace detail {

inline std::string triple(const Vec3& v) {
  return cdm::detail::general(v.x()) + " " + cdm::detail::general(v.y()) + " " +
         cdm::detail::general(v.z());
}

inline std::string geometry_xml(const Geometry& g) {
  if (const auto* b = std::get_if<Cuboid>(&g)) {
    return "<box size=\"" + triple(Vec3(b->w, b->h, b->d) * kMmToM) + "\"/>";
  }
  const auto& c = std::get<CylinderGeom>(g);
  return "<cylinder radius=\"" + cdm::detail::general(c.r * kMmToM) + "\" length=\"" +
         cdm::detail::general(c.h * kMmToM) + "\"/>";
}

}  // namespace detail

inline std::string to_urdf(const Assembly& a, const std::string& robot_name = "robot") {
  a.require_finalized();
  using detail::triple;
  using cdm::detail::general;
  std::ostringstream out;
  out << "<?xml version=\"1.0\"?>\n<robot name=\"" << robot_name << "\">\n";
  for (const auto& c : a.components()) {
    const std::string origin = "<origin xyz=\"" + triple(c.visual_offset * kMmToM) + "\" rpy=\"0 0 0\"/>";
    const std::string geom = detail::geometry_xml(c.geometry);
    out << "  <link name=\"" << c.name << "\">\n";
    out << "    <visual>\n      " << origin << "\n      <geometry>" << geom << "</geometry>\n    </visual>\n";
    out << "    <collision>\n      " << origin << "\n      <geometry>" << geom << "</geometry>\n    </collision>\n";
    if (c.mass > 0) {
      const Mat3 I = link_inertia(c);
      out << "    <inertial>\n      " << origin << "\n      <mass value=\"" << general(c.mass) << "\"/>\n"
          << "      <inertia ixx=\"" << general(I(0, 0)) << "\" ixy=\"0\" ixz=\"0\" iyy=\"" << general(I(1, 1))
          << "\" iyz=\"0\" izz=\"" << general(I(2, 2)) << "\"/>\n    </inertial>\n";
    }
    out << "  </link>\n";
  }
  for (const auto& c : a.components()) {
    if (!c.parent) continue;
    const RelativePose rel = relative_pose(a, c.name);
    const JointSpec j = a.joint(c.name);
    out << "  <joint name=\"" << c.name << "_joint\" type=\"" << to_string(j.type) << "\">\n";
    out << "    <parent link=\"" << *c.parent << "\"/>\n    <child link=\"" << c.name << "\"/>\n";
    out << "    <origin xyz=\"" << triple(rel.translation * kMmToM) << "\" rpy=\"" << triple(rel.rpy) << "\"/>\n";
    if (j.type != JointType::fixed) out << "    <axis xyz=\"" << triple(j.axis) << "\"/>\n";
    if (j.type == JointType::revolute) {
      out << "    <limit lower=\"" << general(j.lower) << "\" upper=\"" << general(j.upper) << "\" effort=\""
          << general(j.effort) << "\" velocity=\"" << general(j.velocity) << "\"/>\n";
    }
    out << "  </joint>\n";
  }
  out << "</robot>\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// Builders

struct QuadcopterOptions {
  double frame_bar_mass = 0.01;  // 0.2526 is the heavier carbon-tube figure
  std::optional<double> frame_bar2_mass;  // defaults to frame_bar_mass
};

/// Frame bars of half-lengths scaled from L1 (along x) and L2 (along y), one
/// motor station at each bar end.
inline Assembly build_quadcopter(double L1 = 130, double L2 = 130, QuadcopterOptions opt = {}) {
  cdm::detail::require(L1 > 0 && L2 > 0, "frame bar lengths must be positive");
  const double body_depth = (33 + 8.1 + 5.4) / 2 * 1.2 * 1.5;
  const Component motor = create_cylinder("motor", 0.030, 14, 32);
  const Component base1 = create_cylinder("motorBasePart1", 0.01, 14, 10);
  const Component propeller = create_cylinder("propeller", 0.0135, 65, 8);
  const Component controller = create_box("controller", 0.0107, 41, 38, 8.1);
  const Component battery = create_box("battery", 0.015, 70, 35, 33);
  const Component receiver = create_box("receiver", 0.0015, 16, 11, 5.4);
  const Component base2 = create_box("motorBasePart2", 0.01, 20, 7, 10);
  const Component bar1 = create_box("frameBar1", opt.frame_bar_mass, 2 * L1 * 1.5 + 31, 15, 25);
  const Component bar2 = create_box("frameBar2", opt.frame_bar2_mass.value_or(opt.frame_bar_mass), 2 * L2 * 1.5 + 31, 15, 25);
  const Component body = create_box("body", 0.05, 75, 75, body_depth);

  Assembly a;
  a.add(place(bar1, 0, 0, 0, 0));
  a.add(place(bar2, 0, 0, 0, 90));
  a.add(place(body, 0, 0, (33 + 8.1 + 5.4) / 4 * 1.2 * 1.5 - 4, 0));

  const double d1 = L1 * 1.5 + 25, d2 = L2 * 1.5 + 25;
  const double stations[4][2] = {{d1, 0}, {0, d2}, {-d1, 0}, {0, -d2}};
  for (int i = 0; i < 4; ++i) {
    const std::string k = std::to_string(i + 1);
    const double x = stations[i][0], y = stations[i][1], yaw = 90.0 * i;
    a.add(place(base1, x, y, 10, yaw, "_place" + k));
    a.add(place(base2, x, y, 0, yaw, "_place" + k));
    a.add(place(motor, x, y, 10 + 32.0 / 2 + 5, yaw, k));
    a.add(place(propeller, x, y, 10 + 32 + 8.0 / 2 + 5, yaw, k));
  }
  a.add(place(battery, 0, 0, 33.0 / 2 + 2 + 13, 0));
  a.add(place(controller, 0, 0, 33 + 8.1 / 2 + 2 + 13, 0));
  a.add(place(receiver, 0, 0, 33 + 8.1 + 5.4 / 2 + 2 + 13, 0));

  a.set_parent("frameBar2", "frameBar1");
  a.set_parent("body", "frameBar1");
  for (int i = 1; i <= 4; ++i) {
    const std::string k = std::to_string(i);
    a.set_parent("motorBasePart1_place" + k, "frameBar1");
    a.set_parent("motorBasePart2_place" + k, "frameBar1");
    a.set_parent("motor" + k, "motorBasePart1_place" + k);
    a.set_parent("propeller" + k, "motor" + k);
    a.set_joint("propeller" + k, continuous());
  }
  for (const char* part : {"battery", "controller", "receiver"}) a.set_parent(part, "body");
  a.finalize();
  return a;
}

/// Serial chain stacked along +z. Each link frame sits at its proximal end,
/// so the joint to the next link lies half a link length past its center.
inline Assembly build_n_link_arm(int n, double link_len, double cross_w, double cross_h,
                                 double link_mass = 0.1) {
  cdm::detail::require(n >= 1, "arm needs at least one link");
  cdm::detail::require(link_len > 0 && cross_w > 0 && cross_h > 0, "link dimensions must be positive");
  Assembly a;
  for (int i = 0; i < n; ++i) {
    Component link = create_box("link" + std::to_string(i + 1), link_mass, cross_w, cross_h, link_len);
    link.translation = Vec3(0, 0, i * link_len);
    link.visual_offset = Vec3(0, 0, link_len / 2);
    if (i > 0) link.parent = "link" + std::to_string(i);
    a.add(std::move(link));
    if (i > 0) {
      a.set_joint("link" + std::to_string(i + 1), revolute(Vec3::UnitX(), -std::numbers::pi, std::numbers::pi));
    }
  }
  a.finalize();
  return a;
}

/// Box platform with wheels on both sides; wheel faces normal to world y.
inline Assembly build_wheeled_robot(int n_wheels, double platform_length, double platform_width,
                                    double platform_height, double wheel_r, double wheel_h,
                                    double platform_mass = 1.0, double wheel_mass = 0.1) {
  if (n_wheels != 2 && n_wheels != 4) {
    throw InvalidArgument("wheeled robot supports 2 or 4 wheels, got " + std::to_string(n_wheels));
  }
  Assembly a;
  a.add(create_box("base_link", platform_mass, platform_length, platform_width, platform_height));
  const double y = platform_width / 2 + wheel_h / 2;
  std::vector<std::pair<std::string, double>> axles;
  if (n_wheels == 2) {
    axles = {{"", 0.0}};
  } else {
    axles = {{"front_", platform_length / 2}, {"back_", -platform_length / 2}};
  }
  for (const auto& [prefix, x] : axles) {
    for (const auto& [side, sy] : {std::pair<const char*, double>{"left", y}, {"right", -y}}) {
      Component w = create_cylinder(prefix + side + "_wheel", wheel_mass, wheel_r, wheel_h);
      w.translation = Vec3(x, sy, 0);
      w.rpy = Vec3(std::numbers::pi / 2, 0, 0);
      w.parent = "base_link";
      const std::string name = w.name;
      a.add(std::move(w));
      a.set_joint(name, continuous());
    }
  }
  a.finalize();
  return a;
}

}  // namespace cdm::robot
