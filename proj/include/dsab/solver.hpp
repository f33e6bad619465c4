#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <stdexcept>

#include "dsab/ground_motion.hpp"
#include "dsab/model.hpp"

namespace dsab {

// Full response of a coupled system: one row per time step, one column per
// DOF. Row 0 holds the initial conditions. abs_acc is rel_acc plus the
// ground acceleration broadcast to every DOF.
template <typename Scalar>
struct ResponseHistoryT {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  Scalar dt = Scalar(0);
  Matrix rel_disp;
  Matrix rel_vel;
  Matrix rel_acc;
  Matrix abs_acc;

  Eigen::Index steps() const { return rel_disp.rows(); }
  Eigen::Index n_dof() const { return rel_disp.cols(); }
};

using ResponseHistory = ResponseHistoryT<double>;

// beta in (0, 0.5], gamma in [0.5, 1]. The (1/4, 1/2) default is the
// unconditionally stable average-acceleration scheme.
struct NewmarkParams {
  double beta = 0.25;
  double gamma = 0.5;
};

// Implicit Newmark stepping at dt = gm.dt. The effective stiffness
//   K_eff = K + gamma/(beta*dt) * C + 1/(beta*dt^2) * M
// is factored once and reused for every step; the initial acceleration is
// recovered from the equation of motion at t = 0. Empty x0/v0 mean
// at-rest initial conditions.
template <typename Scalar>
ResponseHistoryT<Scalar> newmark_solve(
    const CoupledSystemT<Scalar>& sys, const GroundMotionRecord& gm,
    const NewmarkParams& np = {},
    typename CoupledSystemT<Scalar>::Vector x0 = {},
    typename CoupledSystemT<Scalar>::Vector v0 = {}) {
  using Matrix = typename CoupledSystemT<Scalar>::Matrix;
  using Vector = typename CoupledSystemT<Scalar>::Vector;

  if (!(np.beta > 0.0) || !(np.beta <= 0.5))
    throw std::invalid_argument("newmark: beta must lie in (0, 0.5]");
  if (!(np.gamma >= 0.5) || !(np.gamma <= 1.0))
    throw std::invalid_argument("newmark: gamma must lie in [0.5, 1]");
  validate(gm);

  const Eigen::Index n = sys.n_dof;
  if (sys.M.rows() != n || sys.M.cols() != n || sys.K_struct.rows() != n ||
      sys.C_struct.rows() != n || sys.influence.size() != n)
    throw std::invalid_argument("newmark: inconsistent system dimensions");
  if (x0.size() == 0) x0 = Vector::Zero(n);
  if (v0.size() == 0) v0 = Vector::Zero(n);
  if (x0.size() != n || v0.size() != n)
    throw std::invalid_argument("newmark: initial state has wrong length");

  const auto steps = static_cast<Eigen::Index>(gm.accel.size());
  const Scalar dt = static_cast<Scalar>(gm.dt);
  const Scalar beta = static_cast<Scalar>(np.beta);
  const Scalar gamma = static_cast<Scalar>(np.gamma);

  const Matrix C_tot = sys.C_struct + sys.C_D;
  const Matrix K_tot = sys.K_struct + sys.K_D;

  const Scalar a0 = Scalar(1) / (beta * dt * dt);
  const Scalar a1 = gamma / (beta * dt);
  const Scalar a2 = Scalar(1) / (beta * dt);
  const Scalar a3 = Scalar(1) / (Scalar(2) * beta) - Scalar(1);
  const Scalar a4 = gamma / beta - Scalar(1);
  const Scalar a5 = dt / Scalar(2) * (gamma / beta - Scalar(2));

  const Matrix K_eff = K_tot + a0 * sys.M + a1 * C_tot;
  Eigen::LLT<Matrix> keff_llt(K_eff);
  if (keff_llt.info() != Eigen::Success)
    throw std::runtime_error("newmark: effective stiffness is not positive definite");
  Eigen::LLT<Matrix> mass_llt(sys.M);
  if (mass_llt.info() != Eigen::Success)
    throw std::runtime_error("newmark: mass matrix is not positive definite");

  const Vector m_influence = sys.M * sys.influence;

  ResponseHistoryT<Scalar> h;
  h.dt = dt;
  h.rel_disp.resize(steps, n);
  h.rel_vel.resize(steps, n);
  h.rel_acc.resize(steps, n);
  h.abs_acc.resize(steps, n);

  Vector x = x0;
  Vector v = v0;
  Vector a(n), rhs(n), x_next(n), a_next(n);

  const Scalar ag0 = static_cast<Scalar>(gm.accel.front());
  rhs.noalias() = -m_influence * ag0;
  rhs.noalias() -= C_tot * v;
  rhs.noalias() -= K_tot * x;
  a = mass_llt.solve(rhs);

  h.rel_disp.row(0) = x.transpose();
  h.rel_vel.row(0) = v.transpose();
  h.rel_acc.row(0) = a.transpose();
  h.abs_acc.row(0) = (a + sys.influence * ag0).transpose();

  Vector mw(n), cw(n);
  for (Eigen::Index i = 1; i < steps; ++i) {
    const Scalar ag = static_cast<Scalar>(gm.accel[static_cast<std::size_t>(i)]);
    mw.noalias() = a0 * x + a2 * v + a3 * a;
    cw.noalias() = a1 * x + a4 * v + a5 * a;
    rhs.noalias() = -m_influence * ag;
    rhs.noalias() += sys.M * mw;
    rhs.noalias() += C_tot * cw;
    x_next = rhs;
    keff_llt.solveInPlace(x_next);
    a_next.noalias() = a0 * (x_next - x) - a2 * v - a3 * a;
    v.noalias() += dt * ((Scalar(1) - gamma) * a + gamma * a_next);
    x = x_next;
    a = a_next;
    h.rel_disp.row(i) = x.transpose();
    h.rel_vel.row(i) = v.transpose();
    h.rel_acc.row(i) = a.transpose();
    h.abs_acc.row(i) = (a + sys.influence * ag).transpose();
  }
  return h;
}

}  // namespace dsab
