#pragma once

// Concrete inverse-design problems: table center of mass, 2-link arm,
// cabinet cost under a storage target, quadcopter frame-bar co-design.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "cdm/detail/format.hpp"
#include "cdm/error.hpp"
#include "cdm/inverse/optim.hpp"
#include "cdm/performance.hpp"
#include "cdm/qcontrol.hpp"
#include "cdm/robotics.hpp"

namespace cdm::inverse {

// ---------------------------------------------------------------------------
// Round table: legs of radius r and height h under a top of radius R and
// thickness H. Density cancels.

namespace detail {

inline void table_check(double denom) {
  if (!(denom > 0)) throw InvalidArgument("table objective denominator must be positive");
}

}  // namespace detail

inline double table_zcm(double h, double H, double r, double R) {
  const double num = R * R * H * H + 2 * r * r * h * h;
  const double den = R * R * H + 4 * r * r * h;
  detail::table_check(den);
  return num / den;
}

/// (df/dh, df/dH) by the quotient rule.
inline Eigen::Vector2d table_zcm_grad(double h, double H, double r, double R) {
  const double num = R * R * H * H + 2 * r * r * h * h;
  const double den = R * R * H + 4 * r * r * h;
  detail::table_check(den);
  const double dnum_dh = 4 * r * r * h, dden_dh = 4 * r * r;
  const double dnum_dH = 2 * R * R * H, dden_dH = R * R;
  return {(dnum_dh * den - num * dden_dh) / (den * den), (dnum_dH * den - num * dden_dH) / (den * den)};
}

struct TableProblem {
  double r = 0.1;
  double R = 1;
  Bounds bounds{{1, 3}, {1, 5}};  // h, H
  VectorXd x0 = Eigen::Vector2d(2, 3);
};

inline OptResult optimize_table(const TableProblem& p = {}, bool analytic_gradient = true,
                                const MinimizeOptions& opt = {}) {
  const Objective f = [&](const VectorXd& x) { return table_zcm(x[0], x[1], p.r, p.R); };
  Gradient g = nullptr;
  if (analytic_gradient) g = [&](const VectorXd& x) -> VectorXd { return table_zcm_grad(x[0], x[1], p.r, p.R); };
  return minimize_bounded(f, g, p.bounds, p.x0, opt);
}

// ---------------------------------------------------------------------------
// Planar 2-link arm

struct ArmAngles {
  double theta1, theta2;
};

inline Eigen::Vector2d fk_2link(double theta1, double theta2, double l1, double l2) {
  return {l1 * std::cos(theta1) + l2 * std::cos(theta1 + theta2),
          l1 * std::sin(theta1) + l2 * std::sin(theta1 + theta2)};
}

/// Elbow angle in [0, pi].
inline ArmAngles ik_2link(double x, double y, double l1, double l2) {
  cdm::detail::require(l1 > 0 && l2 > 0, "link lengths must be positive");
  const double d = std::hypot(x, y);
  const double slack = 1e-12 * (l1 + l2);
  if (d > l1 + l2 + slack || d < std::abs(l1 - l2) - slack) {
    throw InvalidArgument("target at distance " + cdm::detail::general(d) + " is outside the reachable annulus [" +
                          cdm::detail::general(std::abs(l1 - l2)) + ", " + cdm::detail::general(l1 + l2) + "]");
  }
  const double c2 = std::clamp((x * x + y * y - l1 * l1 - l2 * l2) / (2 * l1 * l2), -1.0, 1.0);
  const double t2 = std::acos(c2);
  const double t1 = std::atan2(y, x) - std::atan2(l2 * std::sin(t2), l1 + l2 * std::cos(t2));
  return {t1, t2};
}

/// Configuration whose end effector is closest to the target; equals
/// ik_2link when the target is reachable.
inline ArmAngles ik_2link_nearest(double x, double y, double l1, double l2) {
  cdm::detail::require(l1 > 0 && l2 > 0, "link lengths must be positive");
  const double c2 = std::clamp((x * x + y * y - l1 * l1 - l2 * l2) / (2 * l1 * l2), -1.0, 1.0);
  const double t2 = std::acos(c2);
  const double t1 = std::atan2(y, x) - std::atan2(l2 * std::sin(t2), l1 + l2 * std::cos(t2));
  return {t1, t2};
}

/// Distance from a target at range `d` to the reachable annulus, which is
/// the forward-kinematics residual of the best configuration.
inline double arm_reach_residual(double l1, double l2, double d) {
  return std::max({0.0, d - (l1 + l2), std::abs(l1 - l2) - d});
}

inline Eigen::Vector2d arm_reach_residual_grad(double l1, double l2, double d) {
  const double over = d - (l1 + l2), under = std::abs(l1 - l2) - d;
  if (over <= 0 && under <= 0) return Eigen::Vector2d::Zero();
  if (over >= under) return {-1, -1};
  const double s = l1 >= l2 ? 1 : -1;
  return {s, -s};
}

/// Minimizes l1 + l2 (a proxy for material) subject to the target being
/// reachable. `x0` defaults to the center of the bounds.
inline OptResult arm_min_material(double x, double y, const Bounds& bounds, std::optional<Eigen::Vector2d> x0 = {},
                                  const PenaltyOptions& opt = {}) {
  bounds.validate();
  cdm::detail::require(bounds.size() == 2, "arm bounds need two intervals");
  cdm::detail::require(bounds.lower.minCoeff() > 0, "link length bounds must be positive");
  const double d = std::hypot(x, y);
  const double min_gap = std::max({0.0, bounds.lower[0] - bounds.upper[1], bounds.lower[1] - bounds.upper[0]});
  if (bounds.upper.sum() < d || min_gap > d) {
    throw InvalidArgument("target is not reachable by any link lengths inside the bounds");
  }
  const Objective f = [](const VectorXd& l) { return l[0] + l[1]; };
  const Gradient gf = [](const VectorXd&) -> VectorXd { return Eigen::Vector2d(1, 1); };
  const Objective c = [d](const VectorXd& l) { return arm_reach_residual(l[0], l[1], d); };
  const Gradient gc = [d](const VectorXd& l) -> VectorXd { return arm_reach_residual_grad(l[0], l[1], d); };
  const VectorXd start = x0 ? VectorXd(*x0) : bounds.center();
  return minimize_penalty_eq(f, c, bounds, start, opt, gf, gc);
}

// ---------------------------------------------------------------------------
// Cabinet: minimize material cost at a target storage volume. Inches.

struct CabinetProblem {
  double target_storage = 5000;
  double thickness = 0.5;
  double cost_per_cubic_inch = 0.05;
  int n_shelves = 0;
  Bounds bounds{{10, 100}, {10, 100}, {10, 100}};  // height, width, depth
  VectorXd x0 = Eigen::Vector3d(55, 55, 55);

  perf::CabinetSpec spec(const VectorXd& x) const { return {x[0], x[1], x[2], thickness, n_shelves}; }
  double cost(const VectorXd& x) const { return perf::cabinet_material_cost(spec(x), cost_per_cubic_inch); }
  double storage(const VectorXd& x) const { return perf::cabinet_storage(spec(x)); }
};

/// The constraint is normalised by the target, so the default residual
/// tolerance of 1e-3 is 0.1 % of the requested storage.
inline OptResult optimize_cabinet(const CabinetProblem& p = {}, const PenaltyOptions& opt = {}) {
  cdm::detail::require(p.target_storage > 0, "target storage must be positive");
  const Objective f = [&](const VectorXd& x) { return p.cost(x); };
  const Objective c = [&](const VectorXd& x) { return (p.storage(x) - p.target_storage) / p.target_storage; };
  return minimize_penalty_eq(f, c, p.bounds, p.x0, opt);
}

// ---------------------------------------------------------------------------
// Quadcopter frame-bar co-design

/// Rigid-body parameters for the hover model. Products of inertia are dropped.
inline quad::PhysParams hover_params(const robot::MassProperties& mp) {
  return {mp.mass, mp.inertia(0, 0), mp.inertia(1, 1), mp.inertia(2, 2)};
}

struct CodesignConfig {
  double lower = 100;  // mm, both bars
  double upper = 500;
  int divisions = 5;
  double dt = 0.002;
  double horizon = 10;  // s
  Vec3 target{0, 0, 1};
  double pos_tol = 0.01;
  quad::LqrWeights weights;
  // Bar mass grows with bar length at the carbon-tube linear density:
  // `bar_mass` kg for the bar built from a 130 mm length parameter.
  double bar_mass = 0.2526;
  bool scale_bar_mass = true;
  int jobs = 1;  // worker threads for grid evaluation; results keep grid order
};

inline double frame_bar_length(double L) { return 2 * L * 1.5 + 31; }

inline double frame_bar_mass(double L, const CodesignConfig& cfg) {
  return cfg.scale_bar_mass ? cfg.bar_mass * frame_bar_length(L) / frame_bar_length(130) : cfg.bar_mass;
}

struct CodesignPoint {
  double L1, L2;
  std::optional<std::size_t> steps;  // time_to_setpoint in steps; empty if never settled
  std::string note;                  // divergence or solver message
};

struct CodesignResult {
  OptResult best;  // x = (L1, L2) mm, f = seconds to the set point
  std::size_t best_steps = 0;
  std::vector<CodesignPoint> points;
};

/// Builds the quadcopter at (L1, L2) with per-bar masses, derives its mass
/// properties, linearizes at hover and flies it from rest to the target.
inline CodesignPoint evaluate_framebars(double L1, double L2, const CodesignConfig& cfg) {
  CodesignPoint pt{L1, L2, std::nullopt, ""};
  robot::QuadcopterOptions qo;
  qo.frame_bar_mass = frame_bar_mass(L1, cfg);
  qo.frame_bar2_mass = frame_bar_mass(L2, cfg);
  const robot::Assembly a = robot::build_quadcopter(L1, L2, qo);
  const quad::PhysParams p = hover_params(robot::assembly_mass_properties(a));
  try {
    const quad::Gain gain = quad::lqr_gain(quad::linearize(p), cfg.weights);
    const auto steps = static_cast<std::size_t>(std::llround(cfg.horizon / cfg.dt));
    const quad::State goal = quad::hover(p, cfg.target).x_star;
    const quad::Trajectory traj = quad::simulate(p, gain.K, quad::State::Zero(), goal, cfg.dt, steps);
    pt.steps = quad::time_to_setpoint(traj, cfg.target, cfg.pos_tol);
    if (!pt.steps) pt.note = "did not settle within the horizon";
  } catch (const Error& e) {
    pt.note = e.what();
  }
  return pt;
}

inline CodesignResult codesign_framebars(const CodesignConfig& cfg = {}) {
  cdm::detail::require(cfg.lower > 0 && cfg.upper >= cfg.lower, "frame bar bounds must be positive and ordered");
  cdm::detail::require(cfg.dt > 0 && cfg.horizon > 0, "time step and horizon must be positive");
  cdm::detail::require(cfg.jobs >= 1, "job count must be at least 1");
  CodesignResult out;
  const Bounds b{{cfg.lower, cfg.upper}, {cfg.lower, cfg.upper}};
  const std::vector<VectorXd> grid = grid_points(b, cfg.divisions);
  std::vector<CodesignPoint> evaluated(grid.size());
  std::vector<std::exception_ptr> errors(grid.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < grid.size();) {
      try {
        evaluated[i] = evaluate_framebars(grid[i][0], grid[i][1], cfg);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < std::min<int>(cfg.jobs, static_cast<int>(grid.size())); ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const VectorXd& x = grid[i];
    CodesignPoint pt = std::move(evaluated[i]);
    ++out.best.iterations;
    if (pt.steps && (!out.best.converged || *pt.steps < out.best_steps)) {
      out.best.x = x;
      out.best_steps = *pt.steps;
      out.best.f = static_cast<double>(*pt.steps) * cfg.dt;
      out.best.converged = true;
    }
    out.points.push_back(std::move(pt));
  }
  std::size_t failed = 0;
  for (const auto& pt : out.points) failed += pt.steps ? 0 : 1;
  out.best.message = std::to_string(out.points.size() - failed) + " of " + std::to_string(out.points.size()) +
                     " grid points settled";
  return out;
}

}  // namespace cdm::inverse
