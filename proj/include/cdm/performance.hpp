#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "cdm/error.hpp"
#include "cdm/solids.hpp"

namespace cdm::perf {

inline constexpr double kGravity = 9.8;  // m/s^2

using Vec2 = Eigen::Vector2d;

struct Material {
  double density;               // kg/m^3
  double compressive_strength;  // Pa
  double bending_strength;      // Pa
  double yield_strength;        // Pa
  double elastic_modulus;       // Pa
  double cost_per_volume;       // currency/m^3
};

inline Material oak() { return {750, 37e6, 90e6, 50e6, 11e9, 2500}; }

enum class StressMode { leg_compression, seat_bending, back_stress, neck_bending };

inline std::string_view to_string(StressMode m) {
  switch (m) {
    case StressMode::leg_compression: return "leg_compression";
    case StressMode::seat_bending: return "seat_bending";
    case StressMode::back_stress: return "back_stress";
    case StressMode::neck_bending: return "neck_bending";
  }
  return "?";
}

struct StressReport {
  StressMode mode;
  double stress;
  double capacity;
  bool pass;
};

namespace detail {

inline StressReport report(StressMode mode, double stress, double capacity) {
  return {mode, stress, capacity, stress <= capacity};
}

inline void require_positive(double v, const char* what) {
  cdm::detail::require(v > 0, std::string(what) + " must be positive");
}

inline void require_nonnegative(double v, const char* what) {
  cdm::detail::require(v >= 0, std::string(what) + " must be nonnegative");
}

}  // namespace detail

/// Load shared evenly across legs. `self_weight` is added to `weight` when given.
inline StressReport leg_compression(double weight, int n_legs, double leg_area, double strength,
                                    double self_weight = 0) {
  detail::require_nonnegative(weight + self_weight, "weight");
  cdm::detail::require(n_legs > 0, "leg count must be positive");
  detail::require_positive(leg_area, "leg area");
  const double load = (weight + self_weight) * kGravity / n_legs;
  return detail::report(StressMode::leg_compression, load / leg_area, strength);
}

/// Simply supported plank with a central point load.
inline StressReport seat_bending(double weight, double span, double breadth, double thickness,
                                 double bending_strength) {
  detail::require_nonnegative(weight, "weight");
  detail::require_positive(span, "span");
  detail::require_positive(breadth, "breadth");
  detail::require_positive(thickness, "thickness");
  const double sigma = 3 * weight * kGravity * span / (2 * breadth * thickness * thickness);
  return detail::report(StressMode::seat_bending, sigma, bending_strength);
}

/// A third of the occupant weight acts on the back attachment.
inline StressReport back_stress(double weight, double attach_area, double strength) {
  detail::require_nonnegative(weight, "weight");
  detail::require_positive(attach_area, "attachment area");
  return detail::report(StressMode::back_stress, weight * kGravity / 3 / attach_area, strength);
}

/// Cantilevered rectangular neck section: sigma = M y / I.
inline StressReport spoon_neck_bending(double force, double lever_arm, double breadth, double thickness,
                                       double yield) {
  detail::require_nonnegative(force, "force");
  detail::require_positive(lever_arm, "lever arm");
  detail::require_positive(breadth, "breadth");
  detail::require_positive(thickness, "thickness");
  const double moment = force * lever_arm;
  const double inertia = breadth * thickness * thickness * thickness / 12;
  return detail::report(StressMode::neck_bending, moment * (thickness / 2) / inertia, yield);
}

struct ChairSpec {
  double leg_area;
  int n_legs = 4;
  double seat_length, seat_width, seat_thickness;
  double back_height, back_width, back_thickness;
  double attach_area_back;
  Material leg_material = oak();
  Material seat_material = oak();
  Material back_material = oak();
};

/// Leg, seat and back checks for an occupant of `weight` kg.
inline std::vector<StressReport> evaluate_chair(const ChairSpec& c, double weight,
                                                bool include_self_weight = false) {
  cdm::detail::require(c.n_legs >= 3, "a chair needs at least three legs");
  double self = 0;
  if (include_self_weight) {
    self = c.seat_length * c.seat_width * c.seat_thickness * c.seat_material.density +
           c.back_height * c.back_width * c.back_thickness * c.back_material.density;
  }
  return {
      leg_compression(weight, c.n_legs, c.leg_area, c.leg_material.compressive_strength, self),
      seat_bending(weight, c.seat_length, c.seat_width, c.seat_thickness, c.seat_material.bending_strength),
      back_stress(weight, c.attach_area_back, c.back_material.bending_strength),
  };
}

// ---------------------------------------------------------------------------
// Stability

/// Convex polygon, counterclockwise.
struct SupportPolygon {
  std::vector<Vec2> vertices;

  double area() const {
    double a = 0;
    for (std::size_t i = 0; i < vertices.size(); ++i) {
      const Vec2& p = vertices[i];
      const Vec2& q = vertices[(i + 1) % vertices.size()];
      a += p.x() * q.y() - q.x() * p.y();
    }
    return a / 2;
  }

  /// Signed distance of `p` to each edge line, positive inside.
  double min_edge_distance(const Vec2& p) const {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < vertices.size(); ++i) {
      const Vec2& a = vertices[i];
      const Vec2 e = vertices[(i + 1) % vertices.size()] - a;
      const Vec2 d = p - a;
      best = std::min(best, (e.x() * d.y() - e.y() * d.x()) / e.norm());
    }
    return best;
  }
};

/// Andrew's monotone chain. Collinear points on the hull boundary are dropped.
inline SupportPolygon support_polygon(std::vector<Vec2> points) {
  cdm::detail::require(points.size() >= 3, "support polygon needs at least 3 contact points");
  std::sort(points.begin(), points.end(), [](const Vec2& a, const Vec2& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  auto cross = [](const Vec2& o, const Vec2& a, const Vec2& b) {
    return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
  };
  std::vector<Vec2> hull(2 * points.size());
  std::size_t k = 0;
  for (const auto& p : points) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = points.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(hull[k - 2], hull[k - 1], points[i]) <= 0) --k;
    hull[k++] = points[i];
  }
  hull.resize(k - 1);
  if (hull.size() < 3) throw InvalidArgument("support polygon is degenerate (collinear contacts)");
  return SupportPolygon{std::move(hull)};
}

/// Strict: the projected COM must sit at least `tol` inside every edge, and
/// a COM exactly on the boundary is unstable.
inline bool is_statically_stable(const Vec3& com, const SupportPolygon& poly, double tol = 0) {
  const double d = poly.min_edge_distance(Vec2(com.x(), com.y()));
  return d > 0 && d >= tol;
}

/// Smallest tilt about a support edge that brings the COM over that edge.
inline double tipping_angle(const Vec3& com, const SupportPolygon& poly) {
  cdm::detail::require(com.z() > 0, "center of mass must be above the ground");
  const double d = poly.min_edge_distance(Vec2(com.x(), com.y()));
  if (d <= 0) return 0;
  return std::atan2(d, com.z());
}

// ---------------------------------------------------------------------------
// Cabinet metrics. Values are in any consistent length unit.

struct CabinetSpec {
  double height;
  double width;
  double depth;
  double board_thickness;
  int n_shelves = 0;

  void validate() const {
    cdm::detail::require(height > 0 && width > 0 && depth > 0, "cabinet dimensions must be positive");
    cdm::detail::require(board_thickness >= 0, "board thickness must be nonnegative");
    cdm::detail::require(board_thickness < std::min({height, width, depth}) / 2,
                         "board thickness must be below half the smallest cabinet dimension");
    cdm::detail::require(n_shelves >= 0, "shelf count must be nonnegative");
  }
};

inline double cabinet_shelf_volume(const CabinetSpec& s) {
  const double t = s.board_thickness;
  return (s.width - 2 * t) * (s.depth - t) * t;
}

inline double cabinet_storage(const CabinetSpec& s) {
  s.validate();
  const double t = s.board_thickness;
  return (s.width - 2 * t) * (s.height - 2 * t) * (s.depth - t) - s.n_shelves * cabinet_shelf_volume(s);
}

inline double cabinet_material_volume(const CabinetSpec& s) {
  s.validate();
  const double t = s.board_thickness, W = s.width, H = s.height, D = s.depth;
  return 2 * W * D * t + 2 * (H - 2 * t) * D * t + W * (H - 2 * t) * t + s.n_shelves * cabinet_shelf_volume(s);
}

inline double cabinet_material_cost(const CabinetSpec& s, double cost_per_volume) {
  return cabinet_material_volume(s) * cost_per_volume;
}

}  // namespace cdm::perf
