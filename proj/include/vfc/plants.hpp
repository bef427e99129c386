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

#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>

#include "vfc/geometry.hpp"

namespace vfc {

/// Scalar time signal (closed-form, deterministic).
using TimeSignal = std::function<double(double)>;

/// Returns the signal t -> amp * sin(freq t) (or cos with phase).
TimeSignal sine_signal(double amp, double freq);
TimeSignal cosine_signal(double amp, double freq);
TimeSignal zero_signal();

/// Uncertain mechanical system M qddot + C qdot + g = B tau, exposed through
/// nominal evaluators (bar quantities) and true evaluators with the
/// closed-form uncertainty signals already injected (sigma = sigma(t)).
struct MechanicalSystem {
  int n = 0;
  int m_inputs = 0;

  std::function<Eigen::MatrixXd(const Eigen::VectorXd&, double)> M_nom;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&, const Eigen::VectorXd&,
                                double)>
      C_nom;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&, double)> g_nom;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&, double)> B_nom;

  std::function<Eigen::MatrixXd(const Eigen::VectorXd&, double)> M_true;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&, const Eigen::VectorXd&,
                                double)>
      C_true;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&, double)> g_true;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&, double)> B_true;
};

/// Which evaluator family forward dynamics uses.
enum class PlantMode { Nominal, True };

/// PVTOL aircraft: planar position (x, y) and roll angle theta, thrust and
/// rolling torque inputs. Underactuated (n=3, m=2).
struct PvtolParams {
  double m_bar = 1.0;
  double J_bar = 0.5;
  double g0 = 9.8;
  TimeSignal dm = zero_signal();      // mass uncertainty Delta m(t)
  TimeSignal dJ = zero_signal();      // inertia uncertainty Delta J(t)
  TimeSignal dx = zero_signal();      // external disturbances
  TimeSignal dy = zero_signal();
  TimeSignal dtheta = zero_signal();
};

MechanicalSystem pvtol(const PvtolParams& params);

/// The benchmark uncertainty set: Delta m = 0.3 m_bar sin 5t,
/// Delta J = 0.3 J_bar sin 7.5t, d_x = 4 sin 2t, d_y = 4 cos 4t,
/// d_theta = 4 sin 6t.
PvtolParams pvtol_benchmark_params();

/// 3-link space manipulator: rotary base plus two links with point masses at
/// the link ends. Fully actuated (n = m = 3, B = I).
struct ManipulatorGeometry {
  double l1 = 1.0;      // length of link 2
  double l2 = 1.0;      // length of link 3
  double J_bar = 0.5;   // rotary inertia of link 1
  double m2_bar = 1.0;
  double m3_bar = 2.0;
  double g0 = 9.8;
};

struct ManipulatorUncertainty {
  TimeSignal dJ = zero_signal();
  TimeSignal dm2 = zero_signal();
  TimeSignal dm3 = zero_signal();
  TimeSignal d1 = zero_signal();  // joint disturbances d_theta_i
  TimeSignal d2 = zero_signal();
  TimeSignal d3 = zero_signal();
};

MechanicalSystem manipulator(const ManipulatorGeometry& geom,
                             const ManipulatorUncertainty& unc = {});

/// The benchmark uncertainty set: Delta J = 0.1 J_bar sin 7.5t,
/// Delta m2 = 0.1 m2_bar sin 5t, Delta m3 = 0.1 m3_bar cos 5t,
/// d_theta = (3 sin 2t, 3 cos 4t, 3 sin 6t).
ManipulatorUncertainty manipulator_benchmark_uncertainty(
    const ManipulatorGeometry& geom);

/// qddot = M^{-1}(B tau - C qdot - g) with the selected mode's matrices.
/// Throws std::runtime_error if the inertia matrix is not positive definite.
Eigen::VectorXd forward_accel(const MechanicalSystem& sys, PlantMode mode,
                              const Eigen::VectorXd& q,
                              const Eigen::VectorXd& qdot,
                              const Eigen::VectorXd& tau, double t);

/// Closed-form joint angles for an end-effector position:
///   theta1 = arctan(x/y),
///   theta2 = arccos((r^2-l1^2-l2^2)/(2 l1 r)) + arccos(sqrt((x^2+y^2)/r^2)),
///   theta3 = arccos((r^2-l1^2-l2^2)/(2 l1 l2)),  r^2 = x^2+y^2+z^2.
/// Throws std::domain_error when an arccos argument leaves [-1, 1]
/// (unreachable point).
Eigen::Vector3d ik(const Eigen::Vector3d& point,
                   const ManipulatorGeometry& geom);

/// Numerical inverse of ik: finds the end-effector position whose ik image is
/// theta, by Newton iteration from the given task-space seed. Satisfies
/// ik(fk(theta)) = theta to 1e-8. Throws std::runtime_error if the root solve
/// does not converge.
Eigen::Vector3d fk(const Eigen::Vector3d& theta,
                   const ManipulatorGeometry& geom,
                   const Eigen::Vector3d& seed);

/// Composition ik(task_path(w)) as a joint-space path; d1/d2 by central
/// differences with step 1e-5. Every window point must be reachable; the
/// first violation is reported in the exception.
ParametricPath joint_path_from_task(const ParametricPath& task_path,
                                    const ManipulatorGeometry& geom);

}  // namespace vfc
