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

#include "vfc/control.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace vfc {

void ControllerConfig::validate() const {
  if (!(kappa > 0.0) || !(mu > 0.0) || !(l1 > 0.0) || !(l2 > 0.0) ||
      !(eps_dz > 0.0))
    throw std::invalid_argument(
        "ControllerConfig: kappa, mu, l1, l2, eps_dz must all be positive");
}

namespace {

struct ControlWorkspace {
  Eigen::MatrixXd M_inv_bar;   // Mbar^-1
  Eigen::MatrixXd AMB;         // A Mbar^-1 Bbar
  Eigen::MatrixXd AMB_inv;
  Eigen::MatrixXd B_bar;
};

ControlWorkspace workspace(const VfcContext& ctx, const MechanicalSystem& sys,
                           const Eigen::VectorXd& q, double t) {
  ControlWorkspace ws;
  const Eigen::MatrixXd M = sys.M_nom(q, t);
  ws.M_inv_bar = M.llt().solve(Eigen::MatrixXd::Identity(sys.n, sys.n));
  ws.B_bar = sys.B_nom(q, t);
  ws.AMB = ctx.A.matrix() * ws.M_inv_bar * ws.B_bar;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(ws.AMB);
  if (!lu.isInvertible()) {
    std::ostringstream os;
    os << "control: A Mbar^-1 Bbar singular at t=" << t << ", q=["
       << q.transpose() << "]";
    throw std::runtime_error(os.str());
  }
  ws.AMB_inv = lu.inverse();
  return ws;
}

}  // namespace

NominalParts nominal_parts(const VfcContext& ctx, const MechanicalSystem& sys,
                           const ControllerConfig& cfg,
                           const Eigen::VectorXd& q,
                           const Eigen::VectorXd& qdot, double w, double t) {
  const ControlWorkspace ws = workspace(ctx, sys, q, t);
  const Eigen::VectorXd b = vfc_b(ctx, q, qdot, w);
  const Eigen::VectorXd beta = vfc_beta(ctx, q, qdot, w);
  const Eigen::VectorXd bias =
      sys.C_nom(q, qdot, t) * qdot + sys.g_nom(q, t);
  NominalParts parts;
  parts.p1 = ws.AMB_inv * (b + ctx.A.matrix() * (ws.M_inv_bar * bias));
  parts.p2 = -cfg.kappa * ws.AMB.transpose() * (ctx.P * beta);
  return parts;
}

Eigen::VectorXd nominal_tau(const VfcContext& ctx, const MechanicalSystem& sys,
                            const ControllerConfig& cfg,
                            const Eigen::VectorXd& q,
                            const Eigen::VectorXd& qdot, double w, double t) {
  return nominal_parts(ctx, sys, cfg, q, qdot, w, t).tau();
}

Eigen::VectorXd beta_breve(const VfcContext& ctx, const MechanicalSystem& sys,
                           const Eigen::VectorXd& q,
                           const Eigen::VectorXd& qdot, double w, double t) {
  const Eigen::VectorXd beta = vfc_beta(ctx, q, qdot, w);
  const Eigen::MatrixXd M = sys.M_nom(q, t);
  const Eigen::VectorXd v =
      M.llt().solve(ctx.A.matrix().transpose() * (ctx.P * beta));
  return sys.B_nom(q, t).transpose() * v;
}

Eigen::VectorXd robust_p3(const VfcContext& ctx, const MechanicalSystem& sys,
                          const ControllerConfig& cfg,
                          const BoundFunction& bound,
                          const Eigen::VectorXd& alpha_hat,
                          const Eigen::VectorXd& q, const Eigen::VectorXd& qdot,
                          double w, double t) {
  if (alpha_hat.size() != bound.k_dim)
    throw std::invalid_argument("robust_p3: alpha_hat size != k_dim");
  const Eigen::VectorXd bb = beta_breve(ctx, sys, q, qdot, w, t);
  const double Pi = alpha_hat.dot(bound.pi_breve(q, qdot, w, t));
  const Eigen::VectorXd upsilon = bb * Pi;
  const double nu = upsilon.norm();
  const double eta = (nu > cfg.mu) ? 1.0 / nu : 1.0 / cfg.mu;
  return -eta * upsilon * Pi;
}

Eigen::VectorXd adaptive_rate(const ControllerConfig& cfg,
                              const Eigen::VectorXd& pi_breve_value,
                              double beta_breve_norm,
                              const Eigen::VectorXd& alpha_hat) {
  const double pb_norm = pi_breve_value.norm();
  if (pb_norm * beta_breve_norm > cfg.eps_dz)
    return cfg.l1 * pi_breve_value * beta_breve_norm - cfg.l2 * alpha_hat;
  return cfg.l1 * pi_breve_value *
             (pb_norm * beta_breve_norm * beta_breve_norm / cfg.eps_dz) -
         cfg.l2 * alpha_hat;
}

BoundFunction pvtol_pi(const MechanicalSystem& sys, const VfcContext& ctx) {
  BoundFunction bf;
  bf.k_dim = 2;
  ControllerConfig cfg;  // p1 does not read the scalar gains
  // Copies keep the bound valid after the originals go out of scope.
  bf.pi_breve = [sys, ctx, cfg](const Eigen::VectorXd& q,
                                const Eigen::VectorXd& qdot, double w,
                                double t) {
    const Eigen::MatrixXd M = sys.M_nom(q, t);
    const Eigen::MatrixXd M_inv =
        M.llt().solve(Eigen::MatrixXd::Identity(sys.n, sys.n));
    const Eigen::MatrixXd AM = ctx.A.matrix() * M_inv;
    const Eigen::MatrixXd AMB = AM * sys.B_nom(q, t);
    const Eigen::MatrixXd G = AMB.inverse() * AM;
    // Spectral norm of the small dense matrix.
    const double pi1 = G.jacobiSvd().singularValues()(0);
    const double pi2 = nominal_parts(ctx, sys, cfg, q, qdot, w, t).p1.norm();
    return Eigen::Vector2d(pi1, pi2).eval();
  };
  return bf;
}

BoundFunction manipulator_pi() {
  BoundFunction bf;
  bf.k_dim = 1;
  bf.pi_breve = [](const Eigen::VectorXd&, const Eigen::VectorXd& qdot, double,
                   double) {
    const double s = qdot.norm();
    Eigen::VectorXd v(1);
    v(0) = s * s + s + 1.0;
    return v;
  };
  return bf;
}

double check_assumption4(const MechanicalSystem& sys, const SelectionMatrix& A,
                         const Eigen::MatrixXd& P,
                         const std::vector<Eigen::VectorXd>& states,
                         const std::vector<double>& times) {
  double lambda_low = std::numeric_limits<double>::infinity();
  for (const auto& q : states) {
    for (double t : times) {
      const Eigen::MatrixXd M = sys.M_nom(q, t);
      const Eigen::MatrixXd M_inv =
          M.llt().solve(Eigen::MatrixXd::Identity(sys.n, sys.n));
      const Eigen::MatrixXd AMB = A.matrix() * M_inv * sys.B_nom(q, t);
      const Eigen::MatrixXd S = P * AMB * AMB.transpose() * P;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
      lambda_low = std::min(lambda_low, es.eigenvalues().minCoeff());
    }
  }
  return lambda_low;
}

double check_assumption5(const MechanicalSystem& sys, const SelectionMatrix& A,
                         const std::vector<Eigen::VectorXd>& states,
                         const std::vector<double>& times) {
  double rho = std::numeric_limits<double>::infinity();
  for (const auto& q : states) {
    for (double t : times) {
      const Eigen::MatrixXd B = sys.B_true(q, t);
      const Eigen::MatrixXd dB = B - sys.B_nom(q, t);
      const Eigen::MatrixXd H_check = decompose_matched(sys, A, q, t).first;
      const Eigen::MatrixXd B_check = matched_split(sys, A, dB, q, t).first;
      const Eigen::MatrixXd W = B_check + H_check * B;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(W + W.transpose());
      rho = std::min(rho, 0.5 * es.eigenvalues().minCoeff());
    }
  }
  return rho;
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> matched_split(
    const MechanicalSystem& sys, const SelectionMatrix& A,
    const Eigen::MatrixXd& X, const Eigen::VectorXd& q, double t) {
  const Eigen::MatrixXd M = sys.M_nom(q, t);
  const Eigen::MatrixXd M_inv =
      M.llt().solve(Eigen::MatrixXd::Identity(sys.n, sys.n));
  const Eigen::MatrixXd B_bar = sys.B_nom(q, t);
  const Eigen::MatrixXd AM = A.matrix() * M_inv;
  const Eigen::MatrixXd AMB = AM * B_bar;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(AMB);
  if (!lu.isInvertible())
    throw std::runtime_error("matched_split: A Mbar^-1 Bbar singular");
  const Eigen::MatrixXd X_check = lu.inverse() * AM * X;
  const Eigen::MatrixXd X_tilde = X - B_bar * X_check;
  return {X_check, X_tilde};
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> decompose_matched(
    const MechanicalSystem& sys, const SelectionMatrix& A,
    const Eigen::VectorXd& q, double t) {
  const Eigen::MatrixXd M_bar = sys.M_nom(q, t);
  const Eigen::MatrixXd M = sys.M_true(q, t);
  const Eigen::MatrixXd H =
      M_bar * M.llt().solve(Eigen::MatrixXd::Identity(sys.n, sys.n)) -
      Eigen::MatrixXd::Identity(sys.n, sys.n);
  return matched_split(sys, A, H, q, t);
}

}  // namespace vfc
