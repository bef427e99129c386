// Copyright 2026 The vfc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "vfc/plants.hpp"

#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace vfc {

TimeSignal sine_signal(double amp, double freq) {
  return [amp, freq](double t) { return amp * std::sin(freq * t); };
}

TimeSignal cosine_signal(double amp, double freq) {
  return [amp, freq](double t) { return amp * std::cos(freq * t); };
}

TimeSignal zero_signal() {
  return [](double) { return 0.0; };
}

MechanicalSystem pvtol(const PvtolParams& p) {
  if (!(p.m_bar > 0.0) || !(p.J_bar > 0.0) || !(p.g0 > 0.0))
    throw std::invalid_argument("pvtol: m_bar, J_bar, g0 must be positive");

  MechanicalSystem sys;
  sys.n = 3;
  sys.m_inputs = 2;

  auto input_matrix = [](const Eigen::VectorXd& q) {
    const double s = std::sin(q(2)), c = std::cos(q(2));
    Eigen::MatrixXd B(3, 2);
    B << -s, c, c, s, 0.0, 1.0;
    return B;
  };

  sys.M_nom = [p](const Eigen::VectorXd&, double) {
    Eigen::Vector3d d(p.m_bar, p.m_bar, p.J_bar);
    return Eigen::MatrixXd(d.asDiagonal());
  };
  sys.C_nom = [](const Eigen::VectorXd&, const Eigen::VectorXd&, double) {
    return Eigen::MatrixXd::Zero(3, 3).eval();
  };
  sys.g_nom = [p](const Eigen::VectorXd&, double) {
    return Eigen::Vector3d(0.0, p.m_bar * p.g0, 0.0).eval();
  };
  sys.B_nom = [input_matrix](const Eigen::VectorXd& q, double) {
    return input_matrix(q);
  };

  sys.M_true = [p](const Eigen::VectorXd&, double t) {
    const double m = p.m_bar + p.dm(t);
    const double J = p.J_bar + p.dJ(t);
    Eigen::Vector3d d(m, m, J);
    return Eigen::MatrixXd(d.asDiagonal());
  };
  sys.C_true = sys.C_nom;
  sys.g_true = [p](const Eigen::VectorXd&, double t) {
    const double m = p.m_bar + p.dm(t);
    return Eigen::Vector3d(-p.dx(t), m * p.g0 - p.dy(t), -p.dtheta(t)).eval();
  };
  sys.B_true = sys.B_nom;
  return sys;
}

PvtolParams pvtol_benchmark_params() {
  PvtolParams p;
  p.dm = sine_signal(0.3 * p.m_bar, 5.0);
  p.dJ = sine_signal(0.3 * p.J_bar, 7.5);
  p.dx = sine_signal(4.0, 2.0);
  p.dy = cosine_signal(4.0, 4.0);
  p.dtheta = sine_signal(4.0, 6.0);
  return p;
}

namespace {

struct ManipParams {
  double l1, l2, J, m2, m3, g0;
};

Eigen::Matrix3d manip_inertia(const ManipParams& p, const Eigen::VectorXd& q) {
  const double c2 = std::cos(q(1));
  const double c3 = std::cos(q(2));
  const double c23 = std::cos(q(1) + q(2));
  Eigen::Matrix3d M = Eigen::Matrix3d::Zero();
  M(0, 0) = p.m3 * p.l2 * p.l2 * c23 * c23 +
            2.0 * p.m3 * p.l1 * p.l2 * c2 * c23 +
            (p.m2 + p.m3) * p.l1 * p.l1 * c2 * c2 + p.J;
  M(1, 1) = p.m3 * p.l2 * p.l2 + 2.0 * p.m3 * p.l1 * p.l2 * c3 +
            (p.m2 + p.m3) * p.l1 * p.l1;
  M(1, 2) = p.m3 * p.l2 * (p.l2 + p.l1 * c3);
  M(2, 1) = M(1, 2);
  M(2, 2) = p.m3 * p.l2 * p.l2;
  return M;
}

// dM/dtheta_2 and dM/dtheta_3 (M does not depend on theta_1).
std::array<Eigen::Matrix3d, 3> manip_inertia_partials(const ManipParams& p,
                                                      const Eigen::VectorXd& q) {
  const double s2 = std::sin(q(1)), c2 = std::cos(q(1));
  const double s3 = std::sin(q(2));
  const double s23 = std::sin(q(1) + q(2)), c23 = std::cos(q(1) + q(2));
  std::array<Eigen::Matrix3d, 3> dM;
  dM.fill(Eigen::Matrix3d::Zero());

  Eigen::Matrix3d& d2 = dM[1];
  d2(0, 0) = -2.0 * (p.m2 + p.m3) * p.l1 * p.l1 * c2 * s2 -
             2.0 * p.m3 * p.l2 * p.l2 * c23 * s23 -
             2.0 * p.m3 * p.l1 * p.l2 * (s2 * c23 + c2 * s23);

  Eigen::Matrix3d& d3 = dM[2];
  d3(0, 0) = -2.0 * p.m3 * p.l2 * p.l2 * c23 * s23 -
             2.0 * p.m3 * p.l1 * p.l2 * c2 * s23;
  d3(1, 1) = -2.0 * p.m3 * p.l1 * p.l2 * s3;
  d3(1, 2) = -p.m3 * p.l1 * p.l2 * s3;
  d3(2, 1) = d3(1, 2);
  return dM;
}

// Christoffel form C_ij = 1/2 sum_k (dM_ij/dq_k + dM_ik/dq_j - dM_jk/dq_i) qd_k,
// so that C qd reproduces the Lagrangian Coriolis/centrifugal force and
// Mdot - 2C stays skew-symmetric.
Eigen::Matrix3d manip_coriolis(const ManipParams& p, const Eigen::VectorXd& q,
                               const Eigen::VectorXd& qd) {
  const auto dM = manip_inertia_partials(p, q);
  Eigen::Matrix3d C = Eigen::Matrix3d::Zero();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        C(i, j) += 0.5 *
                   (dM[static_cast<size_t>(k)](i, j) +
                    dM[static_cast<size_t>(j)](i, k) -
                    dM[static_cast<size_t>(i)](j, k)) *
                   qd(k);
  return C;
}

Eigen::Vector3d manip_gravity(const ManipParams& p, const Eigen::VectorXd& q) {
  const double c2 = std::cos(q(1));
  const double c23 = std::cos(q(1) + q(2));
  const double g2 =
      p.m3 * p.g0 * p.l2 * c23 + (p.m2 + p.m3) * p.g0 * p.l1 * c2;
  const double g3 = p.m3 * p.g0 * p.l2 * c23;
  return {0.0, g2, g3};
}

}  // namespace

MechanicalSystem manipulator(const ManipulatorGeometry& geom,
                             const ManipulatorUncertainty& unc) {
  if (!(geom.l1 > 0.0) || !(geom.l2 > 0.0) || !(geom.J_bar > 0.0) ||
      !(geom.m2_bar > 0.0) || !(geom.m3_bar > 0.0) || !(geom.g0 > 0.0))
    throw std::invalid_argument("manipulator: geometry must be positive");

  MechanicalSystem sys;
  sys.n = 3;
  sys.m_inputs = 3;

  auto nominal = [geom]() {
    return ManipParams{geom.l1, geom.l2,     geom.J_bar,
                       geom.m2_bar, geom.m3_bar, geom.g0};
  };
  auto actual = [geom, unc](double t) {
    return ManipParams{geom.l1,
                       geom.l2,
                       geom.J_bar + unc.dJ(t),
                       geom.m2_bar + unc.dm2(t),
                       geom.m3_bar + unc.dm3(t),
                       geom.g0};
  };

  sys.M_nom = [nominal](const Eigen::VectorXd& q, double) {
    return Eigen::MatrixXd(manip_inertia(nominal(), q));
  };
  sys.C_nom = [nominal](const Eigen::VectorXd& q, const Eigen::VectorXd& qd,
                        double) {
    return Eigen::MatrixXd(manip_coriolis(nominal(), q, qd));
  };
  sys.g_nom = [nominal](const Eigen::VectorXd& q, double) {
    return Eigen::VectorXd(manip_gravity(nominal(), q));
  };
  sys.B_nom = [](const Eigen::VectorXd&, double) {
    return Eigen::MatrixXd(Eigen::Matrix3d::Identity());
  };

  sys.M_true = [actual](const Eigen::VectorXd& q, double t) {
    return Eigen::MatrixXd(manip_inertia(actual(t), q));
  };
  sys.C_true = [actual](const Eigen::VectorXd& q, const Eigen::VectorXd& qd,
                        double t) {
    return Eigen::MatrixXd(manip_coriolis(actual(t), q, qd));
  };
  sys.g_true = [actual, unc](const Eigen::VectorXd& q, double t) {
    Eigen::Vector3d g = manip_gravity(actual(t), q);
    // Joint disturbances enter the gravity vector with a plus sign here,
    // opposite to the PVTOL convention.
    g += Eigen::Vector3d(unc.d1(t), unc.d2(t), unc.d3(t));
    return Eigen::VectorXd(g);
  };
  sys.B_true = sys.B_nom;
  return sys;
}

ManipulatorUncertainty manipulator_benchmark_uncertainty(
    const ManipulatorGeometry& geom) {
  ManipulatorUncertainty u;
  u.dJ = sine_signal(0.1 * geom.J_bar, 7.5);
  u.dm2 = sine_signal(0.1 * geom.m2_bar, 5.0);
  u.dm3 = cosine_signal(0.1 * geom.m3_bar, 5.0);
  u.d1 = sine_signal(3.0, 2.0);
  u.d2 = cosine_signal(3.0, 4.0);
  u.d3 = sine_signal(3.0, 6.0);
  return u;
}

Eigen::VectorXd forward_accel(const MechanicalSystem& sys, PlantMode mode,
                              const Eigen::VectorXd& q,
                              const Eigen::VectorXd& qdot,
                              const Eigen::VectorXd& tau, double t) {
  if (q.size() != sys.n || qdot.size() != sys.n || tau.size() != sys.m_inputs)
    throw std::invalid_argument("forward_accel: dimension mismatch");
  const bool nom = (mode == PlantMode::Nominal);
  const Eigen::MatrixXd M = nom ? sys.M_nom(q, t) : sys.M_true(q, t);
  const Eigen::MatrixXd C = nom ? sys.C_nom(q, qdot, t) : sys.C_true(q, qdot, t);
  const Eigen::VectorXd g = nom ? sys.g_nom(q, t) : sys.g_true(q, t);
  const Eigen::MatrixXd B = nom ? sys.B_nom(q, t) : sys.B_true(q, t);
  const Eigen::VectorXd rhs = B * tau - C * qdot - g;
  Eigen::LLT<Eigen::MatrixXd> llt(M);
  if (llt.info() != Eigen::Success) {
    std::ostringstream os;
    os << "forward_accel: inertia matrix not positive definite at t=" << t;
    throw std::runtime_error(os.str());
  }
  return llt.solve(rhs);
}

Eigen::Vector3d ik(const Eigen::Vector3d& point,
                   const ManipulatorGeometry& geom) {
  const double x = point(0), y = point(1), z = point(2);
  const double r2 = x * x + y * y + z * z;
  if (!(r2 > 0.0)) throw std::domain_error("ik: point at the base origin");
  const double r = std::sqrt(r2);
  const double l1 = geom.l1, l2 = geom.l2;

  auto checked_acos = [&point](double a, const char* term) {
    if (a < -1.0 || a > 1.0) {
      std::ostringstream os;
      os << "ik: arccos argument " << a << " out of [-1,1] in " << term
         << " for point (" << point(0) << ", " << point(1) << ", " << point(2)
         << ") -- unreachable";
      throw std::domain_error(os.str());
    }
    return std::acos(a);
  };

  // arctan(x/y), extended to the full circle by the two-argument form.
  const double theta1 = std::atan2(x, y);
  const double elbow_num = r2 - l1 * l1 - l2 * l2;
  const double theta2 = checked_acos(elbow_num / (2.0 * l1 * r), "theta2") +
                        checked_acos(std::sqrt((x * x + y * y) / r2), "theta2");
  const double theta3 = checked_acos(elbow_num / (2.0 * l1 * l2), "theta3");
  return {theta1, theta2, theta3};
}

Eigen::Vector3d fk(const Eigen::Vector3d& theta,
                   const ManipulatorGeometry& geom,
                   const Eigen::Vector3d& seed) {
  Eigen::Vector3d p = seed;
  constexpr int kMaxIters = 60;
  constexpr double kStep = 1e-7;
  for (int iter = 0; iter < kMaxIters; ++iter) {
    const Eigen::Vector3d residual = ik(p, geom) - theta;
    if (residual.cwiseAbs().maxCoeff() < 1e-11) return p;
    Eigen::Matrix3d jac;
    for (int j = 0; j < 3; ++j) {
      Eigen::Vector3d hi = p, lo = p;
      hi(j) += kStep;
      lo(j) -= kStep;
      jac.col(j) = (ik(hi, geom) - ik(lo, geom)) / (2.0 * kStep);
    }
    p -= jac.fullPivLu().solve(residual);
  }
  throw std::runtime_error("fk: root solve did not converge from the seed");
}

ParametricPath joint_path_from_task(const ParametricPath& task_path,
                                    const ManipulatorGeometry& geom) {
  if (task_path.dim_m() != 3)
    throw std::invalid_argument("joint_path_from_task: need a 3-D task path");

  // Reach check over the whole window before committing to the composition.
  const Interval win = task_path.w_window();
  constexpr int kReachSamples = 2000;
  for (int i = 0; i <= kReachSamples; ++i) {
    const double w = win.lo + win.width() * i / kReachSamples;
    const Eigen::VectorXd pt = task_path.eval(w);
    try {
      ik(Eigen::Vector3d(pt(0), pt(1), pt(2)), geom);
    } catch (const std::domain_error& e) {
      std::ostringstream os;
      os << "joint_path_from_task: task point unreachable at w=" << w << ": "
         << e.what();
      throw std::domain_error(os.str());
    }
  }

  auto compose = [task_path, geom](double w) -> Eigen::Vector3d {
    const Eigen::VectorXd pt = task_path.eval(w);
    return ik(Eigen::Vector3d(pt(0), pt(1), pt(2)), geom);
  };
  constexpr double kH = 1e-5;
  auto eval = [compose](double w, Eigen::Ref<Eigen::VectorXd> o) {
    o = compose(w);
  };
  auto d1v = [compose](double w) -> Eigen::Vector3d {
    return (compose(w + kH) - compose(w - kH)) / (2.0 * kH);
  };
  auto d1 = [d1v](double w, Eigen::Ref<Eigen::VectorXd> o) { o = d1v(w); };
  auto d2 = [d1v](double w, Eigen::Ref<Eigen::VectorXd> o) {
    o = (d1v(w + kH) - d1v(w - kH)) / (2.0 * kH);
  };

  // Tangent bound scan mirrors the analytic catalog construction. Constant
  // compositions scan to zero; any positive value is a valid bound then.
  double bound = 0.0;
  for (int i = 0; i <= 4000; ++i) {
    const double w = win.lo + win.width() * i / 4000;
    bound = std::max(bound, d1v(w).cwiseAbs().maxCoeff());
  }
  bound = std::max(bound, 1e-9);
  return ParametricPath("joint(" + task_path.name() + ")", 3, eval, d1, d2,
                        win, bound);
}

}  // namespace vfc
