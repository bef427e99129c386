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
#include <utility>
#include <vector>

#include "vfc/geometry.hpp"
#include "vfc/vectorfield.hpp"

namespace vfc {

/// Everything needed to evaluate the vector-field guided constraint
/// A qdot = chi_s(A q, w): the selection matrix, the desired path, the field
/// gains, and the symmetric positive definite gain matrix P used by the
/// controllers built on top of the constraint.
struct VfcContext {
  SelectionMatrix A;
  ParametricPath path;
  GvfGains gains;
  Eigen::MatrixXd P;

  VfcContext(SelectionMatrix A_, ParametricPath path_, GvfGains gains_,
             Eigen::MatrixXd P_);
};

/// Constraint-following error beta = A qdot - chi_s(A q, w).
Eigen::VectorXd vfc_beta(const VfcContext& ctx, const Eigen::VectorXd& q,
                         const Eigen::VectorXd& qdot, double w);

/// Right-hand side of the second-order constraint form A qddot = b:
/// b = (d chi_s/d zeta)(A qdot) + (d chi_s/d w) wdot, with wdot from the
/// virtual-coordinate rate.
Eigen::VectorXd vfc_b(const VfcContext& ctx, const Eigen::VectorXd& q,
                      const Eigen::VectorXd& qdot, double w);

/// Consistency residual ||A A^+ b - b|| of the second-order constraint
/// A qddot = b at one state (A^+ the Moore-Penrose pseudo-inverse). Zero
/// certifies that an accelerating solution exists.
double feasibility_residual(const Eigen::MatrixXd& A_eval,
                            const Eigen::VectorXd& b_eval);

/// Conventional constraint built from the (m-1) implicit path functions psi
/// through psidot + Lambda psi = 0. Used to demonstrate how state-dependent
/// constraint matrices lose feasibility.
struct CcfcConstraint {
  int dim_m = 0;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> psi;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> grad_psi;
  std::function<std::vector<Eigen::MatrixXd>(const Eigen::VectorXd&)> hess_psi;
  Eigen::VectorXd lambda_diag;  // diagonal of Lambda, all > 0
};

/// Differentiates the first-order form grad_psi qdot = -Lambda psi once:
/// A_eval = grad_psi(q_s), b_eval_i = -Lambda_i (grad_psi qdot)_i
/// - qdot^T Hess(psi_i) qdot.
std::pair<Eigen::MatrixXd, Eigen::VectorXd> ccfc_second_order(
    const CcfcConstraint& c, const Eigen::VectorXd& q_s,
    const Eigen::VectorXd& qdot_s);

/// Implicit-form constraints for the planar catalog paths
/// (sinusoid, cassini, lemniscate) with analytic gradients and Hessians.
CcfcConstraint ccfc_for_path(const std::string& path_name,
                             const PathParams& params,
                             const Eigen::VectorXd& lambda_diag);

}  // namespace vfc
