#pragma once

// Two-objective NSGA-II over a DesignSpace, plus the chair problem it is
// exercised on.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "cdm/design_space.hpp"
#include "cdm/error.hpp"
#include "cdm/performance.hpp"
#include "cdm/solids.hpp"

namespace cdm::inverse {

using Objectives = std::array<double, 2>;
using Evaluator = std::function<double(const design::Assignment&)>;

struct Individual {
  design::Assignment x;
  Objectives f{};
  double violation = 0;  // summed constraint residual, 0 when feasible
  int rank = 0;
  double crowding = 0;
};

struct ParetoFront {
  std::vector<Individual> population;  // final generation with rank and crowding
  std::vector<Individual> archive;     // non-dominated feasible points seen so far
  Objectives reference{};
  std::vector<double> hypervolume;     // archive hypervolume after each generation, gen 0 first

  std::vector<Individual> rank0() const {
    std::vector<Individual> out;
    for (const auto& ind : population) {
      if (ind.rank == 0) out.push_back(ind);
    }
    return out;
  }
};

struct NsgaOptions {
  double eta_crossover = 15;
  double eta_mutation = 20;
  double crossover_prob = 0.9;
  std::optional<Objectives> reference;  // default: 1.1 x the worst initial values, shifted
};

/// Both objectives minimized.
inline bool dominates(const Objectives& a, const Objectives& b) {
  return a[0] <= b[0] && a[1] <= b[1] && (a[0] < b[0] || a[1] < b[1]);
}

/// Feasibility first, then smaller violation, then Pareto dominance.
inline bool constrained_dominates(const Individual& a, const Individual& b) {
  if (a.violation == 0 && b.violation > 0) return true;
  if (a.violation > 0 && b.violation == 0) return false;
  if (a.violation > 0) return a.violation < b.violation;
  return dominates(a.f, b.f);
}

/// Area dominated by `points` and bounded by `ref`.
inline double hypervolume_2d(std::vector<Objectives> points, const Objectives& ref) {
  std::erase_if(points, [&](const Objectives& p) { return !(p[0] < ref[0] && p[1] < ref[1]); });
  std::sort(points.begin(), points.end());
  double area = 0;
  double ceiling = ref[1];
  for (const auto& p : points) {
    if (p[1] < ceiling) {
      area += (ref[0] - p[0]) * (ceiling - p[1]);
      ceiling = p[1];
    }
  }
  return area;
}

/// Fast non-dominated sort. Assigns `rank` and returns the fronts as indices.
inline std::vector<std::vector<std::size_t>> non_dominated_sort(std::vector<Individual>& pop) {
  const std::size_t n = pop.size();
  std::vector<std::vector<std::size_t>> dominated(n);
  std::vector<int> count(n, 0);
  std::vector<std::vector<std::size_t>> fronts(1);
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = 0; q < n; ++q) {
      if (p == q) continue;
      if (constrained_dominates(pop[p], pop[q])) {
        dominated[p].push_back(q);
      } else if (constrained_dominates(pop[q], pop[p])) {
        ++count[p];
      }
    }
    if (count[p] == 0) {
      pop[p].rank = 0;
      fronts[0].push_back(p);
    }
  }
  for (std::size_t i = 0; !fronts[i].empty(); ++i) {
    std::vector<std::size_t> next;
    for (std::size_t p : fronts[i]) {
      for (std::size_t q : dominated[p]) {
        if (--count[q] == 0) {
          pop[q].rank = static_cast<int>(i + 1);
          next.push_back(q);
        }
      }
    }
    fronts.push_back(std::move(next));
  }
  fronts.pop_back();
  return fronts;
}

inline void assign_crowding(std::vector<Individual>& pop, const std::vector<std::size_t>& front) {
  for (std::size_t i : front) pop[i].crowding = 0;
  if (front.size() <= 2) {
    for (std::size_t i : front) pop[i].crowding = std::numeric_limits<double>::infinity();
    return;
  }
  for (int m = 0; m < 2; ++m) {
    std::vector<std::size_t> order = front;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return pop[a].f[m] < pop[b].f[m]; });
    const double lo = pop[order.front()].f[m], hi = pop[order.back()].f[m];
    pop[order.front()].crowding = pop[order.back()].crowding = std::numeric_limits<double>::infinity();
    if (hi == lo) continue;
    for (std::size_t k = 1; k + 1 < order.size(); ++k) {
      pop[order[k]].crowding += (pop[order[k + 1]].f[m] - pop[order[k - 1]].f[m]) / (hi - lo);
    }
  }
}

namespace detail {

inline double unit(std::mt19937_64& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

/// Bounded simulated binary crossover, one variable.
inline void sbx(double& a, double& b, double lo, double hi, double eta, std::mt19937_64& rng) {
  if (unit(rng) > 0.5 || std::abs(a - b) <= 1e-14 || hi <= lo) return;
  const double y1 = std::min(a, b), y2 = std::max(a, b);
  const double u = unit(rng);
  auto spread = [&](double beta) {
    const double alpha = 2 - std::pow(beta, -(eta + 1));
    return u <= 1 / alpha ? std::pow(u * alpha, 1 / (eta + 1)) : std::pow(1 / (2 - u * alpha), 1 / (eta + 1));
  };
  const double bq1 = spread(1 + 2 * (y1 - lo) / (y2 - y1));
  const double bq2 = spread(1 + 2 * (hi - y2) / (y2 - y1));
  double c1 = std::clamp(0.5 * ((y1 + y2) - bq1 * (y2 - y1)), lo, hi);
  double c2 = std::clamp(0.5 * ((y1 + y2) + bq2 * (y2 - y1)), lo, hi);
  if (unit(rng) <= 0.5) std::swap(c1, c2);
  a = c1;
  b = c2;
}

/// Bounded polynomial mutation, one variable.
inline double poly_mutate(double y, double lo, double hi, double eta, std::mt19937_64& rng) {
  if (hi <= lo) return y;
  const double d1 = (y - lo) / (hi - lo), d2 = (hi - y) / (hi - lo);
  const double u = unit(rng), p = 1 / (eta + 1);
  double dq;
  if (u < 0.5) {
    dq = std::pow(2 * u + (1 - 2 * u) * std::pow(1 - d1, eta + 1), p) - 1;
  } else {
    dq = 1 - std::pow(2 * (1 - u) + 2 * (u - 0.5) * std::pow(1 - d2, eta + 1), p);
  }
  return std::clamp(y + dq * (hi - lo), lo, hi);
}

inline bool crowded_less(const Individual& a, const Individual& b) {
  return a.rank < b.rank || (a.rank == b.rank && a.crowding > b.crowding);
}

}  // namespace detail

/// Elitist NSGA-II. Variation results are clipped back into the space
/// (integers rounded); the run is a pure function of `seed`.
inline ParetoFront nsga2(const std::array<Evaluator, 2>& objectives, const design::DesignSpace& space, int pop_size,
                         int generations, std::uint64_t seed, const NsgaOptions& opt = {}) {
  cdm::detail::require(pop_size >= 4 && pop_size % 2 == 0, "population must be even and at least 4");
  cdm::detail::require(generations >= 0, "generation count must be nonnegative");
  const auto& params = space.parameters();
  cdm::detail::require(!params.empty(), "design space has no parameters");
  const std::size_t dims = params.size();
  std::mt19937_64 rng(seed);

  auto evaluate = [&](design::Assignment x) {
    Individual ind;
    ind.x = space.clip(x);
    for (const auto& v : space.validate(ind.x)) ind.violation += std::abs(v.residual);
    ind.f = {objectives[0](ind.x), objectives[1](ind.x)};
    if (!std::isfinite(ind.f[0]) || !std::isfinite(ind.f[1])) {
      throw InvalidArgument("objective is not finite at a design point");
    }
    return ind;
  };

  std::vector<Individual> pop;
  for (int i = 0; i < pop_size; ++i) {
    design::Assignment x;
    for (const auto& p : params) x[p.name] = p.lower + (p.upper - p.lower) * detail::unit(rng);
    pop.push_back(evaluate(std::move(x)));
  }
  for (const auto& front : non_dominated_sort(pop)) assign_crowding(pop, front);

  ParetoFront out;
  if (opt.reference) {
    out.reference = *opt.reference;
  } else {
    for (int m = 0; m < 2; ++m) {
      double lo = pop[0].f[m], hi = pop[0].f[m];
      for (const auto& ind : pop) {
        lo = std::min(lo, ind.f[m]);
        hi = std::max(hi, ind.f[m]);
      }
      out.reference[m] = hi + 0.1 * std::max(hi - lo, 1e-12);
    }
  }
  auto absorb = [&](const std::vector<Individual>& batch) {
    for (const auto& ind : batch) {
      if (ind.violation > 0) continue;
      bool beaten = false;
      for (const auto& a : out.archive) {
        if (dominates(a.f, ind.f) || a.f == ind.f) {
          beaten = true;
          break;
        }
      }
      if (beaten) continue;
      std::erase_if(out.archive, [&](const Individual& a) { return dominates(ind.f, a.f); });
      out.archive.push_back(ind);
    }
    std::vector<Objectives> pts;
    for (const auto& a : out.archive) pts.push_back(a.f);
    out.hypervolume.push_back(hypervolume_2d(std::move(pts), out.reference));
  };
  absorb(pop);

  auto tournament = [&]() -> const Individual& {
    const auto& a = pop[std::uniform_int_distribution<std::size_t>(0, pop.size() - 1)(rng)];
    const auto& b = pop[std::uniform_int_distribution<std::size_t>(0, pop.size() - 1)(rng)];
    return detail::crowded_less(b, a) ? b : a;
  };

  const double mutation_rate = 1.0 / static_cast<double>(dims);
  for (int gen = 0; gen < generations; ++gen) {
    std::vector<Individual> children;
    while (children.size() < pop.size()) {
      std::vector<double> a = space.to_vector(tournament().x);
      std::vector<double> b = space.to_vector(tournament().x);
      if (detail::unit(rng) <= opt.crossover_prob) {
        for (std::size_t i = 0; i < dims; ++i) {
          detail::sbx(a[i], b[i], params[i].lower, params[i].upper, opt.eta_crossover, rng);
        }
      }
      for (auto* child : {&a, &b}) {
        for (std::size_t i = 0; i < dims; ++i) {
          if (detail::unit(rng) < mutation_rate) {
            (*child)[i] = detail::poly_mutate((*child)[i], params[i].lower, params[i].upper, opt.eta_mutation, rng);
          }
        }
        children.push_back(evaluate(space.from_vector(*child)));
      }
    }
    absorb(children);

    std::vector<Individual> merged = pop;
    merged.insert(merged.end(), children.begin(), children.end());
    const auto fronts = non_dominated_sort(merged);
    std::vector<Individual> next;
    for (const auto& front : fronts) {
      assign_crowding(merged, front);
      if (next.size() + front.size() <= pop.size()) {
        for (std::size_t i : front) next.push_back(merged[i]);
        continue;
      }
      std::vector<std::size_t> order = front;
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) { return merged[a].crowding > merged[b].crowding; });
      for (std::size_t k = 0; next.size() < pop.size(); ++k) next.push_back(merged[order[k]]);
      break;
    }
    pop = std::move(next);
    for (const auto& front : non_dominated_sort(pop)) assign_crowding(pop, front);
  }
  out.population = std::move(pop);
  return out;
}

// ---------------------------------------------------------------------------
// Chair problem. Metres; four square legs under the seat corners and a back
// panel standing on the rear edge of the seat.

struct ChairDesign {
  double leg_height, leg_side;
  double seat_length, seat_width, seat_thickness;
  double back_height, back_thickness;
};

inline design::DesignSpace chair_space() {
  using design::ParamKind;
  return design::DesignSpace({
      {"leg_height", ParamKind::real, 0.3, 0.6},
      {"leg_side", ParamKind::real, 0.02, 0.08},
      {"seat_length", ParamKind::real, 0.35, 0.6},
      {"seat_width", ParamKind::real, 0.35, 0.6},
      {"seat_thickness", ParamKind::real, 0.01, 0.06},
      {"back_height", ParamKind::real, 0.2, 0.6},
      {"back_thickness", ParamKind::real, 0.01, 0.06},
  });
}

inline ChairDesign chair_from(const design::Assignment& a) {
  auto get = [&](const char* name) {
    const auto it = a.find(name);
    if (it == a.end()) throw InvalidArgument(std::string("missing chair parameter '") + name + "'");
    return it->second;
  };
  return {get("leg_height"),   get("leg_side"),    get("seat_length"),   get("seat_width"),
          get("seat_thickness"), get("back_height"), get("back_thickness")};
}

struct ChairPart {
  Box box;
  Vec3 center;
};

/// Seat spans x in [-L/2, L/2] (back at -x), y in [-W/2, W/2]; floor at z = 0.
inline std::vector<ChairPart> chair_parts(const ChairDesign& c) {
  cdm::detail::require(c.leg_height > 0 && c.leg_side > 0 && c.seat_length > 0 && c.seat_width > 0 &&
                           c.seat_thickness > 0 && c.back_height > 0 && c.back_thickness > 0,
                       "chair dimensions must be positive");
  cdm::detail::require(2 * c.leg_side <= std::min(c.seat_length, c.seat_width), "legs wider than the seat");
  cdm::detail::require(c.back_thickness <= c.seat_length, "back thicker than the seat is long");
  std::vector<ChairPart> parts;
  const double lx = c.seat_length / 2 - c.leg_side / 2, ly = c.seat_width / 2 - c.leg_side / 2;
  for (double sx : {-1.0, 1.0}) {
    for (double sy : {-1.0, 1.0}) {
      parts.push_back({{c.leg_side, c.leg_side, c.leg_height}, {sx * lx, sy * ly, c.leg_height / 2}});
    }
  }
  const double top = c.leg_height + c.seat_thickness;
  parts.push_back({{c.seat_length, c.seat_width, c.seat_thickness}, {0, 0, c.leg_height + c.seat_thickness / 2}});
  parts.push_back({{c.back_thickness, c.seat_width, c.back_height},
                   {-c.seat_length / 2 + c.back_thickness / 2, 0, top + c.back_height / 2}});
  return parts;
}

inline SolidNode chair_solid(const ChairDesign& c) {
  std::vector<SolidNode> nodes;
  for (const auto& p : chair_parts(c)) nodes.push_back(make_leaf(p.box, {Mat3::Identity(), p.center}));
  return make_union(std::move(nodes));
}

/// Parts meet only on faces, so the volume is the plain sum.
inline double chair_volume(const ChairDesign& c) {
  double v = 0;
  for (const auto& p : chair_parts(c)) v += p.box.w * p.box.h * p.box.d;
  return v;
}

/// Uniform density.
inline Vec3 chair_com(const ChairDesign& c) {
  Vec3 m = Vec3::Zero();
  double v = 0;
  for (const auto& p : chair_parts(c)) {
    const double pv = p.box.w * p.box.h * p.box.d;
    m += pv * p.center;
    v += pv;
  }
  return m / v;
}

/// Support polygon from the leg footprints.
inline double chair_tipping_angle(const ChairDesign& c) {
  std::vector<perf::Vec2> contacts;
  for (const auto& p : chair_parts(c)) {
    if (p.center.z() - p.box.d / 2 > 1e-12) continue;
    for (double sx : {-0.5, 0.5}) {
      for (double sy : {-0.5, 0.5}) {
        contacts.emplace_back(p.center.x() + sx * p.box.w, p.center.y() + sy * p.box.h);
      }
    }
  }
  return perf::tipping_angle(chair_com(c), perf::support_polygon(std::move(contacts)));
}

/// (volume, -tipping angle), both minimized.
inline std::array<Evaluator, 2> chair_objectives() {
  return {[](const design::Assignment& a) { return chair_volume(chair_from(a)); },
          [](const design::Assignment& a) { return -chair_tipping_angle(chair_from(a)); }};
}

}  // namespace cdm::inverse
