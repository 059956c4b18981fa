#pragma once

// Quadcopter rigid-body model, hover linearization and LQR.
// State: (px, py, pz, phi, theta, psi, vx, vy, vz, wx, wy, wz).
// Input: (u1 total thrust, u2, u3, u4 body torques). z points up.

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cdm/detail/format.hpp"
#include "cdm/error.hpp"
#include "cdm/solids.hpp"

namespace cdm::quad {

using State = Eigen::Matrix<double, 12, 1>;
using Input = Eigen::Vector4d;
using MatA = Eigen::Matrix<double, 12, 12>;
using MatB = Eigen::Matrix<double, 12, 4>;
using MatK = Eigen::Matrix<double, 4, 12>;

struct PhysParams {
  double m;
  double Ix, Iy, Iz;
  double g = 9.81;

  void validate() const {
    cdm::detail::require(m > 0 && Ix > 0 && Iy > 0 && Iz > 0 && g > 0,
                         "mass, inertias and gravity must be positive");
  }
};

inline Mat3 rotation_zyx(double phi, double theta, double psi) {
  const double cf = std::cos(phi), sf = std::sin(phi);
  const double ct = std::cos(theta), st = std::sin(theta);
  const double cp = std::cos(psi), sp = std::sin(psi);
  Mat3 R;
  R << ct * cp, sf * st * cp - cf * sp, cf * st * cp + sf * sp,
       ct * sp, sf * st * sp + cf * cp, cf * st * sp - sf * cp,
       -st, sf * ct, cf * ct;
  return R;
}

inline State dynamics(const State& x, const Input& u, const PhysParams& p) {
  const Mat3 R = rotation_zyx(x[3], x[4], x[5]);
  const double wx = x[9], wy = x[10], wz = x[11];
  State f;
  f.segment<3>(0) = x.segment<3>(6);
  f.segment<3>(3) = x.segment<3>(9);
  f.segment<3>(6) = (u[0] / p.m) * R.col(2);
  f[8] -= p.g;
  f[9] = ((p.Iy - p.Iz) * wy * wz + u[1]) / p.Ix;
  f[10] = ((p.Iz - p.Ix) * wx * wz + u[2]) / p.Iy;
  f[11] = ((p.Ix - p.Iy) * wx * wy + u[3]) / p.Iz;
  return f;
}

struct Hover {
  State x_star;
  Input u_star;
};

inline Hover hover(const PhysParams& p, const Vec3& position = Vec3::Zero()) {
  State x = State::Zero();
  x.segment<3>(0) = position;
  return {x, Input(p.m * p.g, 0, 0, 0)};
}

struct LinearModel {
  MatA A;
  MatB B;
  State x_star;
  Input u_star;
};

/// Jacobians of `dynamics` at level hover with zero yaw.
inline LinearModel linearize(const PhysParams& p, const Vec3& position = Vec3::Zero()) {
  p.validate();
  const Hover h = hover(p, position);
  MatA A = MatA::Zero();
  MatB B = MatB::Zero();
  for (int i = 0; i < 6; ++i) A(i, i + 6) = 1;
  A(6, 4) = p.g;   // dvx/dtheta
  A(7, 3) = -p.g;  // dvy/dphi
  B(8, 0) = 1 / p.m;
  B(9, 1) = 1 / p.Ix;
  B(10, 2) = 1 / p.Iy;
  B(11, 3) = 1 / p.Iz;
  return {A, B, h.x_star, h.u_star};
}

// ---------------------------------------------------------------------------
// Continuous algebraic Riccati equation

namespace detail {

using Eigen::MatrixXd;

/// Solves Ac^T X + X Ac + C = 0 through the Kronecker form.
inline MatrixXd lyapunov(const MatrixXd& Ac, const MatrixXd& C) {
  const Eigen::Index n = Ac.rows();
  const MatrixXd I = MatrixXd::Identity(n, n);
  MatrixXd L = MatrixXd::Zero(n * n, n * n);
  // vec(Ac^T X) = (I kron Ac^T) vec X ; vec(X Ac) = (Ac^T kron I) vec X
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      L.block(i * n, j * n, n, n) += I(i, j) * Ac.transpose();
      L.block(i * n, j * n, n, n) += Ac(j, i) * I;
    }
  }
  const Eigen::VectorXd rhs = -Eigen::Map<const Eigen::VectorXd>(C.data(), n * n);
  Eigen::PartialPivLU<MatrixXd> lu(L);
  const Eigen::VectorXd x = lu.solve(rhs);
  if (!x.allFinite()) throw ConvergenceError("Lyapunov solve is singular");
  return Eigen::Map<const MatrixXd>(x.data(), n, n);
}

/// Bass's construction: K0 = B^T Z^-1 with (A + bI) Z + Z (A + bI)^T = 2 B B^T
/// stabilizes A - B K0 whenever (A, B) is controllable.
inline MatrixXd initial_gain(const MatrixXd& A, const MatrixXd& B) {
  const Eigen::Index n = A.rows();
  const double beta = A.norm() + 1;
  const MatrixXd shifted = -(A + beta * MatrixXd::Identity(n, n)).transpose();
  // lyapunov solves S^T Z + Z S + C = 0 with S = -(A + bI)^T.
  const MatrixXd Z = lyapunov(shifted, 2 * B * B.transpose());
  Eigen::LLT<MatrixXd> llt(0.5 * (Z + Z.transpose()));
  if (llt.info() != Eigen::Success) {
    throw ConvergenceError("no stabilizing initial gain: pair is not controllable");
  }
  return B.transpose() * llt.solve(MatrixXd::Identity(n, n));
}

}  // namespace detail

inline Eigen::MatrixXd care_residual(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                                     const Eigen::MatrixXd& Q, const Eigen::MatrixXd& R,
                                     const Eigen::MatrixXd& P) {
  return A.transpose() * P + P * A - P * B * R.ldlt().solve(B.transpose() * P) + Q;
}

/// Newton-Kleinman iteration for A^T P + P A - P B R^-1 B^T P + Q = 0.
inline Eigen::MatrixXd solve_care(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                                  const Eigen::MatrixXd& Q, const Eigen::MatrixXd& R,
                                  double tol = 1e-10, int max_iter = 200) {
  using Eigen::MatrixXd;
  const Eigen::Index n = A.rows();
  cdm::detail::require(A.cols() == n && B.rows() == n && Q.rows() == n && Q.cols() == n &&
                           R.rows() == B.cols() && R.cols() == B.cols(),
                       "CARE dimensions do not agree");
  cdm::detail::require((Q - Q.transpose()).cwiseAbs().maxCoeff() <= 1e-12 &&
                           (R - R.transpose()).cwiseAbs().maxCoeff() <= 1e-12,
                       "Q and R must be symmetric");
  Eigen::LLT<MatrixXd> rllt(R);
  cdm::detail::require(rllt.info() == Eigen::Success, "R must be positive definite");

  MatrixXd K = detail::initial_gain(A, B);
  MatrixXd P = MatrixXd::Zero(n, n);
  for (int it = 0; it < max_iter; ++it) {
    const MatrixXd Ac = A - B * K;
    MatrixXd next = detail::lyapunov(Ac, Q + K.transpose() * R * K);
    const double asym = (next - next.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-8 * std::max(1.0, next.cwiseAbs().maxCoeff())) {
      throw ConvergenceError("Riccati iterate lost symmetry (" + cdm::detail::general(asym, 3) + ")");
    }
    P = 0.5 * (next + next.transpose());
    K = rllt.solve(B.transpose() * P);
    if (care_residual(A, B, Q, R, P).cwiseAbs().maxCoeff() <= tol) return P;
  }
  throw ConvergenceError("Riccati iteration did not reach residual " + cdm::detail::general(tol, 3) +
                         " in " + std::to_string(max_iter) + " iterations (residual " +
                         cdm::detail::general(care_residual(A, B, Q, R, P).cwiseAbs().maxCoeff(), 3) + ")");
}

struct LqrWeights {
  Eigen::Matrix<double, 12, 12> Q = Eigen::Matrix<double, 12, 12>::Identity();
  Eigen::Matrix4d R = Eigen::Matrix4d::Identity();
};

struct Gain {
  MatK K;
  MatA P;
};

inline Gain lqr_gain(const LinearModel& model, const LqrWeights& w = {}, double tol = 1e-10,
                     int max_iter = 200) {
  const Eigen::MatrixXd P = solve_care(model.A, model.B, w.Q, w.R, tol, max_iter);
  Gain g;
  g.P = P;
  g.K = w.R.ldlt().solve(model.B.transpose() * g.P);
  return g;
}

// ---------------------------------------------------------------------------
// Simulation

struct Trajectory {
  double dt;
  std::vector<State> states;  // states[i] at t = i * dt
  std::vector<Input> inputs;  // inputs[i] applied at states[i]

  std::string to_csv() const {
    std::ostringstream out;
    out << "t,px,py,pz,phi,theta,psi,vx,vy,vz,wx,wy,wz,u1,u2,u3,u4\n";
    for (std::size_t i = 0; i < states.size(); ++i) {
      out << cdm::detail::general(i * dt);
      for (int k = 0; k < 12; ++k) out << ',' << cdm::detail::general(states[i][k]);
      for (int k = 0; k < 4; ++k) out << ',' << cdm::detail::general(inputs[i][k]);
      out << '\n';
    }
    return out.str();
  }
};

struct ThrustLimits {
  double u1_max;
};

/// RK4 on the nonlinear model with u = u* - K (x - x_target), re-evaluated
/// at every stage.
inline Trajectory simulate(const PhysParams& p, const MatK& K, const State& x0, const State& x_target,
                           double dt = 0.002, std::size_t steps = 5000,
                           std::optional<ThrustLimits> limits = std::nullopt) {
  p.validate();
  cdm::detail::require(dt > 0, "time step must be positive");
  const Input u_star = hover(p).u_star;
  auto control = [&](const State& x) {
    Input u = u_star - K * (x - x_target);
    if (limits) u[0] = std::clamp(u[0], 0.0, limits->u1_max);
    return u;
  };
  auto rhs = [&](const State& x) { return dynamics(x, control(x), p); };

  Trajectory traj{dt, {}, {}};
  traj.states.reserve(steps + 1);
  traj.inputs.reserve(steps + 1);
  State x = x0;
  for (std::size_t i = 0;; ++i) {
    if (!x.allFinite()) throw DivergenceError(i, "simulation diverged at step " + std::to_string(i));
    traj.states.push_back(x);
    traj.inputs.push_back(control(x));
    if (i == steps) break;
    const State k1 = rhs(x);
    const State k2 = rhs(x + 0.5 * dt * k1);
    const State k3 = rhs(x + 0.5 * dt * k2);
    const State k4 = rhs(x + dt * k3);
    x += dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  return traj;
}

/// First step after which the position error stays below `pos_tol`.
inline std::optional<std::size_t> time_to_setpoint(const Trajectory& traj, const Vec3& target, double pos_tol) {
  cdm::detail::require(!traj.states.empty(), "trajectory is empty");
  std::optional<std::size_t> first;
  for (std::size_t i = traj.states.size(); i-- > 0;) {
    if ((traj.states[i].segment<3>(0) - target).norm() < pos_tol) {
      first = i;
    } else {
      break;
    }
  }
  return first;
}

}  // namespace cdm::quad
