#pragma once

// Pick-and-place planning for a gantry claw on an integer grid. Cost is the
// total translation, i.e. Manhattan distance travelled.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cdm/detail/format.hpp"
#include "cdm/error.hpp"

namespace cdm::inverse {

using GridPoint = std::array<int, 3>;

inline constexpr int kClawWorkspace = 50;

struct ClawInstance {
  GridPoint claw0{};
  std::vector<GridPoint> objects;
  std::vector<GridPoint> bins;
  double t_max = std::numeric_limits<double>::infinity();

  void validate() const {
    auto inside = [](const GridPoint& p) {
      return std::all_of(p.begin(), p.end(), [](int v) { return v >= 0 && v <= kClawWorkspace; });
    };
    cdm::detail::require(inside(claw0), "claw start lies outside the workspace");
    for (const auto& p : objects) cdm::detail::require(inside(p), "object lies outside the workspace");
    for (const auto& p : bins) cdm::detail::require(inside(p), "bin lies outside the workspace");
    cdm::detail::require(objects.size() <= bins.size(), "more objects than bins");
    cdm::detail::require(t_max >= 0, "power budget must be nonnegative");
  }
};

enum class ActionKind { translate_x, translate_y, translate_z, grasp, release };

inline std::string_view to_string(ActionKind k) {
  switch (k) {
    case ActionKind::translate_x: return "translate_x";
    case ActionKind::translate_y: return "translate_y";
    case ActionKind::translate_z: return "translate_z";
    case ActionKind::grasp: return "grasp";
    case ActionKind::release: return "release";
  }
  return "?";
}

struct Action {
  ActionKind kind;
  int amount = 0;  // translations only
};

struct Plan {
  std::vector<Action> actions;
  int cost = 0;
};

inline int manhattan(const GridPoint& a, const GridPoint& b) {
  return std::abs(a[0] - b[0]) + std::abs(a[1] - b[1]) + std::abs(a[2] - b[2]);
}

inline double euclidean(const GridPoint& a, const GridPoint& b) {
  const double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

namespace detail {

inline void move_to(Plan& plan, GridPoint& at, const GridPoint& to) {
  const ActionKind axes[3] = {ActionKind::translate_x, ActionKind::translate_y, ActionKind::translate_z};
  for (int i = 0; i < 3; ++i) {
    const int d = to[i] - at[i];
    if (d != 0) plan.actions.push_back({axes[i], d});
    plan.cost += std::abs(d);
  }
  at = to;
}

/// Plan for serving objects[order[k]] into bins[assign[k]] in sequence.
inline Plan build_plan(const ClawInstance& inst, const std::vector<std::size_t>& order,
                       const std::vector<std::size_t>& assign) {
  Plan plan;
  GridPoint at = inst.claw0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    move_to(plan, at, inst.objects[order[k]]);
    plan.actions.push_back({ActionKind::grasp});
    move_to(plan, at, inst.bins[assign[k]]);
    plan.actions.push_back({ActionKind::release});
  }
  return plan;
}

inline void check_budget(const Plan& plan, const ClawInstance& inst) {
  if (plan.cost > inst.t_max) {
    throw BudgetExceeded("No solution found within power limit (needs " + std::to_string(plan.cost) +
                         ", budget " + cdm::detail::general(inst.t_max) + ")");
  }
}

}  // namespace detail

/// Nearest remaining object, then nearest empty bin, both by Euclidean
/// distance with ties going to the earlier entry.
inline Plan claw_greedy(const ClawInstance& inst) {
  inst.validate();
  std::vector<bool> done(inst.objects.size(), false), full(inst.bins.size(), false);
  std::vector<std::size_t> order, assign;
  GridPoint at = inst.claw0;
  for (std::size_t step = 0; step < inst.objects.size(); ++step) {
    auto nearest = [&](const std::vector<GridPoint>& pts, const std::vector<bool>& used) {
      std::size_t best = pts.size();
      for (std::size_t i = 0; i < pts.size(); ++i) {
        if (!used[i] && (best == pts.size() || euclidean(at, pts[i]) < euclidean(at, pts[best]))) best = i;
      }
      return best;
    };
    const std::size_t o = nearest(inst.objects, done);
    at = inst.objects[o];
    const std::size_t b = nearest(inst.bins, full);
    at = inst.bins[b];
    done[o] = full[b] = true;
    order.push_back(o);
    assign.push_back(b);
  }
  Plan plan = detail::build_plan(inst, order, assign);
  detail::check_budget(plan, inst);
  return plan;
}

/// Exact minimum over every service order and injective object-to-bin
/// assignment. The first minimum in lexicographic enumeration wins.
inline Plan claw_optimal(const ClawInstance& inst) {
  inst.validate();
  cdm::detail::require(inst.objects.size() <= 3 && inst.bins.size() <= 3, "exact planning supports up to 3 objects and bins");
  const std::size_t n = inst.objects.size();
  std::vector<std::size_t> order(n), bins(inst.bins.size());
  std::iota(order.begin(), order.end(), 0);
  std::optional<Plan> best;
  do {
    std::iota(bins.begin(), bins.end(), 0);
    // The first n entries of every bin permutation cover each injective assignment.
    do {
      std::vector<std::size_t> assign(bins.begin(), bins.begin() + static_cast<std::ptrdiff_t>(n));
      Plan plan = detail::build_plan(inst, order, assign);
      if (!best || plan.cost < best->cost) best = std::move(plan);
    } while (std::next_permutation(bins.begin(), bins.end()));
  } while (std::next_permutation(order.begin(), order.end()));
  detail::check_budget(*best, inst);
  return *best;
}

/// Replays `plan` against `inst` and throws InvalidArgument on the first
/// illegal action: grasping away from an uncollected object or while
/// holding, releasing away from an empty bin, a stated cost that disagrees
/// with the translations, or objects left over.
inline void check_plan(const ClawInstance& inst, const Plan& plan) {
  GridPoint at = inst.claw0;
  std::optional<std::size_t> held;
  std::vector<bool> collected(inst.objects.size(), false), full(inst.bins.size(), false);
  int cost = 0;
  for (std::size_t i = 0; i < plan.actions.size(); ++i) {
    const Action& a = plan.actions[i];
    const std::string where = "action " + std::to_string(i) + " (" + std::string(to_string(a.kind)) + ")";
    switch (a.kind) {
      case ActionKind::translate_x:
      case ActionKind::translate_y:
      case ActionKind::translate_z:
        at[static_cast<int>(a.kind)] += a.amount;
        cost += std::abs(a.amount);
        if (at[static_cast<int>(a.kind)] < 0 || at[static_cast<int>(a.kind)] > kClawWorkspace) {
          throw InvalidArgument(where + " leaves the workspace");
        }
        break;
      case ActionKind::grasp: {
        if (held) throw InvalidArgument(where + " while already holding an object");
        for (std::size_t o = 0; o < inst.objects.size() && !held; ++o) {
          if (!collected[o] && inst.objects[o] == at) held = o;
        }
        if (!held) throw InvalidArgument(where + " with no uncollected object here");
        collected[*held] = true;
        break;
      }
      case ActionKind::release: {
        if (!held) throw InvalidArgument(where + " with nothing held");
        std::optional<std::size_t> bin;
        for (std::size_t b = 0; b < inst.bins.size() && !bin; ++b) {
          if (!full[b] && inst.bins[b] == at) bin = b;
        }
        if (!bin) throw InvalidArgument(where + " away from an empty bin");
        full[*bin] = true;
        held.reset();
        break;
      }
    }
  }
  if (held) throw InvalidArgument("plan ends holding an object");
  if (std::find(collected.begin(), collected.end(), false) != collected.end()) {
    throw InvalidArgument("plan leaves objects uncollected");
  }
  if (cost != plan.cost) throw InvalidArgument("plan cost does not match its translations");
}

}  // namespace cdm::inverse
