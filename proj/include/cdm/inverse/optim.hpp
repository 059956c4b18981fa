#pragma once

// Bounded continuous minimization, equality penalty continuation and
// lattice/random search.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <limits>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "cdm/detail/format.hpp"
#include "cdm/error.hpp"

namespace cdm::inverse {

using Eigen::VectorXd;
using Objective = std::function<double(const VectorXd&)>;
using Gradient = std::function<VectorXd(const VectorXd&)>;

struct Bounds {
  VectorXd lower;
  VectorXd upper;

  Bounds() = default;
  Bounds(VectorXd lo, VectorXd hi) : lower(std::move(lo)), upper(std::move(hi)) { validate(); }
  Bounds(std::initializer_list<std::pair<double, double>> pairs) {
    lower.resize(static_cast<Eigen::Index>(pairs.size()));
    upper.resize(lower.size());
    Eigen::Index i = 0;
    for (const auto& [lo, hi] : pairs) {
      lower[i] = lo;
      upper[i++] = hi;
    }
    validate();
  }

  Eigen::Index size() const { return lower.size(); }

  void validate() const {
    cdm::detail::require(lower.size() == upper.size(), "bounds need one upper per lower");
    cdm::detail::require(lower.size() > 0, "bounds must have at least one dimension");
    for (Eigen::Index i = 0; i < lower.size(); ++i) {
      cdm::detail::require(std::isfinite(lower[i]) && std::isfinite(upper[i]), "bounds must be finite");
      cdm::detail::require(lower[i] <= upper[i], "bound " + std::to_string(i) + " has lower > upper");
    }
  }

  VectorXd project(const VectorXd& x) const { return x.cwiseMax(lower).cwiseMin(upper); }

  bool contains(const VectorXd& x) const {
    return x.size() == size() && (x.array() >= lower.array()).all() && (x.array() <= upper.array()).all();
  }

  VectorXd center() const { return 0.5 * (lower + upper); }
};

struct OptResult {
  VectorXd x;
  double f = std::numeric_limits<double>::quiet_NaN();
  int iterations = 0;
  bool converged = false;
  std::string message;
};

namespace detail {

inline double checked(const Objective& f, const VectorXd& x) {
  const double v = f(x);
  if (std::isnan(v)) throw ConvergenceError("objective returned NaN");
  return v;
}

/// Central differences with step 1e-6 * max(1, |x_i|), shortened at an
/// active bound so every probe stays feasible.
inline VectorXd fd_gradient(const Objective& f, const Bounds& b, const VectorXd& x) {
  VectorXd g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = 1e-6 * std::max(1.0, std::abs(x[i]));
    VectorXd xp = x, xm = x;
    xp[i] = std::min(x[i] + h, b.upper[i]);
    xm[i] = std::max(x[i] - h, b.lower[i]);
    const double span = xp[i] - xm[i];
    g[i] = span > 0 ? (checked(f, xp) - checked(f, xm)) / span : 0.0;
  }
  return g;
}

}  // namespace detail

struct MinimizeOptions {
  double tol = 1e-8;  // on the projected-gradient step, infinity norm
  int max_iter = 10000;
};

/// Projected gradient descent. Barzilai-Borwein trial steps, backtracked
/// along the projection arc until the Armijo condition holds. A null
/// `grad` switches to finite differences.
inline OptResult minimize_bounded(const Objective& f, const Gradient& grad, const Bounds& bounds,
                                  const VectorXd& x0, const MinimizeOptions& opt = {}) {
  bounds.validate();
  cdm::detail::require(x0.size() == bounds.size(), "x0 dimension does not match bounds");
  cdm::detail::require(bounds.contains(x0), "x0 lies outside the bounds");
  auto gradient = [&](const VectorXd& p) -> VectorXd {
    if (!grad) return detail::fd_gradient(f, bounds, p);
    VectorXd g = grad(p);
    if (!g.allFinite()) throw ConvergenceError("gradient is not finite");
    return g;
  };

  VectorXd x = x0;
  double fx = detail::checked(f, x);
  VectorXd g = gradient(x);
  double alpha = 1 / std::max(1.0, g.lpNorm<Eigen::Infinity>());
  for (int it = 0; it < opt.max_iter; ++it) {
    if ((bounds.project(x - g) - x).lpNorm<Eigen::Infinity>() <= opt.tol) {
      return {x, fx, it, true, "projected gradient below tolerance"};
    }
    double step = alpha;
    VectorXd xn;
    double fn = 0;
    for (;;) {
      xn = bounds.project(x - step * g);
      fn = detail::checked(f, xn);
      if (fn <= fx + 1e-4 * g.dot(xn - x)) break;
      step *= 0.5;
      if (step < 1e-30) return {x, fx, it, false, "line search failed"};
    }
    const VectorXd s = xn - x;
    if (s.lpNorm<Eigen::Infinity>() == 0) return {x, fx, it, false, "step vanished"};
    const VectorXd gn = gradient(xn);
    const double sy = s.dot(gn - g);
    alpha = sy > 0 ? std::clamp(s.squaredNorm() / sy, 1e-14, 1e14) : std::min(2 * step, 1e14);
    x = xn;
    fx = fn;
    g = gn;
  }
  return {x, fx, opt.max_iter, false, "iteration limit reached"};
}

struct PenaltyOptions {
  MinimizeOptions inner{1e-10, 20000};
  double mu_first = 1;
  double mu_last = 1e8;
  double residual_tol = 1e-3;  // on |c|; callers normalise c to the scale they care about
};

/// Minimizes f + mu c^2 for mu = 1, 10, ..., 1e8, warm-starting each stage.
/// `grad_f` and `grad_c` are optional; both must be given to be used.
inline OptResult minimize_penalty_eq(const Objective& f, const Objective& c, const Bounds& bounds,
                                     const VectorXd& x0, const PenaltyOptions& opt = {},
                                     const Gradient& grad_f = nullptr, const Gradient& grad_c = nullptr) {
  cdm::detail::require(opt.mu_first > 0 && opt.mu_last >= opt.mu_first, "penalty schedule must be increasing");
  VectorXd x = x0;
  int iterations = 0;
  for (double mu = opt.mu_first; mu <= opt.mu_last * (1 + 1e-12); mu *= 10) {
    const Objective merit = [&, mu](const VectorXd& p) {
      const double cv = c(p);
      return f(p) + mu * cv * cv;
    };
    Gradient merit_grad = nullptr;
    if (grad_f && grad_c) {
      merit_grad = [&, mu](const VectorXd& p) -> VectorXd { return grad_f(p) + 2 * mu * c(p) * grad_c(p); };
    }
    const OptResult stage = minimize_bounded(merit, merit_grad, bounds, x, opt.inner);
    x = stage.x;
    iterations += stage.iterations;
  }
  const double residual = std::abs(c(x));
  OptResult out{x, detail::checked(f, x), iterations, residual <= opt.residual_tol, ""};
  out.message = "|c| = " + cdm::detail::general(residual, 6);
  if (!out.converged) out.message += " exceeds " + cdm::detail::general(opt.residual_tol, 3);
  return out;
}

/// Lattice with `divisions` points per axis, last axis fastest.
inline std::vector<VectorXd> grid_points(const Bounds& bounds, int divisions) {
  bounds.validate();
  cdm::detail::require(divisions >= 2, "grid search needs at least 2 divisions");
  const Eigen::Index n = bounds.size();
  std::vector<VectorXd> out;
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  for (;;) {
    VectorXd p(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const int k = idx[static_cast<std::size_t>(i)];
      p[i] = k == divisions - 1 ? bounds.upper[i]
                                : bounds.lower[i] + (bounds.upper[i] - bounds.lower[i]) * k / (divisions - 1);
    }
    out.push_back(std::move(p));
    Eigen::Index d = n;
    while (d > 0) {
      --d;
      if (++idx[static_cast<std::size_t>(d)] < divisions) break;
      idx[static_cast<std::size_t>(d)] = 0;
      if (d == 0) return out;
    }
  }
}

namespace detail {

inline OptResult best_of(const Objective& f, const std::vector<VectorXd>& points, const char* what) {
  OptResult best;
  for (const auto& p : points) {
    const double v = f(p);
    ++best.iterations;
    if (std::isfinite(v) && (!best.converged || v < best.f)) {
      best.x = p;
      best.f = v;
      best.converged = true;
    }
  }
  best.message = best.converged ? std::string(what) + " over " + std::to_string(points.size()) + " points"
                                : std::string("no finite objective value among ") + what + " points";
  return best;
}

}  // namespace detail

/// First strict minimum in lattice order. Non-finite values are skipped.
inline OptResult grid_search(const Objective& f, const Bounds& bounds, int divisions) {
  return detail::best_of(f, grid_points(bounds, divisions), "grid");
}

/// First strict minimum in draw order of `n` uniform samples.
inline OptResult random_search(const Objective& f, const Bounds& bounds, int n, std::uint64_t seed) {
  bounds.validate();
  cdm::detail::require(n >= 1, "random search needs at least one sample");
  std::mt19937_64 rng(seed);
  std::vector<VectorXd> points;
  for (int k = 0; k < n; ++k) {
    VectorXd p(bounds.size());
    for (Eigen::Index i = 0; i < p.size(); ++i) {
      p[i] = std::uniform_real_distribution<double>(bounds.lower[i], bounds.upper[i])(rng);
    }
    points.push_back(std::move(p));
  }
  return detail::best_of(f, points, "random");
}

}  // namespace cdm::inverse
