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

#include "vfc/constraint.hpp"

#include <cmath>
#include <stdexcept>

namespace vfc {

VfcContext::VfcContext(SelectionMatrix A_, ParametricPath path_,
                       GvfGains gains_, Eigen::MatrixXd P_)
    : A(std::move(A_)),
      path(std::move(path_)),
      gains(std::move(gains_)),
      P(std::move(P_)) {
  const int m = path.dim_m();
  if (A.rows_m() != m || gains.k.size() != m)
    throw std::invalid_argument("VfcContext: A/path/gains dimensions disagree");
  if (P.rows() != m || P.cols() != m)
    throw std::invalid_argument("VfcContext: P must be m-by-m");
  if ((P - P.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("VfcContext: P must be symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(P);
  if (es.eigenvalues().minCoeff() <= 0.0)
    throw std::invalid_argument("VfcContext: P must be positive definite");
}

namespace {

Eigen::VectorXd augmented_state(const VfcContext& ctx, const Eigen::VectorXd& q,
                                double w) {
  const int m = ctx.path.dim_m();
  Eigen::VectorXd xi(m + 1);
  xi.head(m) = ctx.A.apply(q);
  xi(m) = w;
  return xi;
}

}  // namespace

Eigen::VectorXd vfc_beta(const VfcContext& ctx, const Eigen::VectorXd& q,
                         const Eigen::VectorXd& qdot, double w) {
  if (q.size() != ctx.A.cols_n() || qdot.size() != ctx.A.cols_n())
    throw std::invalid_argument("vfc_beta: q/qdot dimension mismatch");
  const Eigen::VectorXd xi = augmented_state(ctx, q, w);
  return ctx.A.apply(qdot) - chi_s(ctx.path, ctx.gains, xi);
}

Eigen::VectorXd vfc_b(const VfcContext& ctx, const Eigen::VectorXd& q,
                      const Eigen::VectorXd& qdot, double w) {
  if (q.size() != ctx.A.cols_n() || qdot.size() != ctx.A.cols_n())
    throw std::invalid_argument("vfc_b: q/qdot dimension mismatch");
  const Eigen::VectorXd xi = augmented_state(ctx, q, w);
  const auto [d_zeta, d_w] = chi_s_jacobians(ctx.path, ctx.gains, xi);
  const double wd = w_dot(ctx.path, ctx.gains, xi);
  return d_zeta * ctx.A.apply(qdot) + d_w * wd;
}

double feasibility_residual(const Eigen::MatrixXd& A_eval,
                            const Eigen::VectorXd& b_eval) {
  if (A_eval.rows() != b_eval.size())
    throw std::invalid_argument("feasibility_residual: A/b row mismatch");
  // A A^+ b via least-squares: A x = b with x = A^+ b.
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(A_eval);
  const Eigen::VectorXd x = cod.solve(b_eval);
  return (A_eval * x - b_eval).norm();
}

std::pair<Eigen::MatrixXd, Eigen::VectorXd> ccfc_second_order(
    const CcfcConstraint& c, const Eigen::VectorXd& q_s,
    const Eigen::VectorXd& qdot_s) {
  if (q_s.size() != c.dim_m || qdot_s.size() != c.dim_m)
    throw std::invalid_argument("ccfc_second_order: state dimension mismatch");
  const Eigen::MatrixXd grad = c.grad_psi(q_s);
  const std::vector<Eigen::MatrixXd> hess = c.hess_psi(q_s);
  const int rows = static_cast<int>(grad.rows());
  if (static_cast<int>(hess.size()) != rows || c.lambda_diag.size() != rows)
    throw std::invalid_argument("ccfc_second_order: psi family size mismatch");
  Eigen::VectorXd b = -(c.lambda_diag.asDiagonal() * (grad * qdot_s));
  for (int i = 0; i < rows; ++i)
    b(i) -= qdot_s.dot(hess[static_cast<size_t>(i)] * qdot_s);
  return {grad, std::move(b)};
}

namespace {

CcfcConstraint ccfc_sinusoid(const Eigen::VectorXd& lambda) {
  CcfcConstraint c;
  c.dim_m = 2;
  c.lambda_diag = lambda;
  // psi = y - sin x
  c.psi = [](const Eigen::VectorXd& p) {
    Eigen::VectorXd v(1);
    v(0) = p(1) - std::sin(p(0));
    return v;
  };
  c.grad_psi = [](const Eigen::VectorXd& p) {
    Eigen::MatrixXd g(1, 2);
    g << -std::cos(p(0)), 1.0;
    return g;
  };
  c.hess_psi = [](const Eigen::VectorXd& p) {
    Eigen::MatrixXd h(2, 2);
    h << std::sin(p(0)), 0.0, 0.0, 0.0;
    return std::vector<Eigen::MatrixXd>{h};
  };
  return c;
}

CcfcConstraint ccfc_cassini(double ra, double rb, const Eigen::VectorXd& lambda) {
  CcfcConstraint c;
  c.dim_m = 2;
  c.lambda_diag = lambda;
  const double ra2 = ra * ra;
  const double rb4 = rb * rb * rb * rb;
  // psi = (x^2+y^2+ra^2)^2 - 4 ra^2 x^2 - rb^4
  c.psi = [ra2, rb4](const Eigen::VectorXd& p) {
    const double s = p(0) * p(0) + p(1) * p(1) + ra2;
    Eigen::VectorXd v(1);
    v(0) = s * s - 4.0 * ra2 * p(0) * p(0) - rb4;
    return v;
  };
  c.grad_psi = [ra2](const Eigen::VectorXd& p) {
    const double s = p(0) * p(0) + p(1) * p(1) + ra2;
    Eigen::MatrixXd g(1, 2);
    g << 4.0 * p(0) * s - 8.0 * ra2 * p(0), 4.0 * p(1) * s;
    return g;
  };
  c.hess_psi = [ra2](const Eigen::VectorXd& p) {
    const double x = p(0), y = p(1);
    const double s = x * x + y * y + ra2;
    Eigen::MatrixXd h(2, 2);
    h(0, 0) = 4.0 * s + 8.0 * x * x - 8.0 * ra2;
    h(0, 1) = 8.0 * x * y;
    h(1, 0) = h(0, 1);
    h(1, 1) = 4.0 * s + 8.0 * y * y;
    return std::vector<Eigen::MatrixXd>{h};
  };
  return c;
}

CcfcConstraint ccfc_lemniscate(const Eigen::VectorXd& lambda) {
  CcfcConstraint c;
  c.dim_m = 2;
  c.lambda_diag = lambda;
  // psi = (x^2+y^2)^2 - x^2 + y^2
  c.psi = [](const Eigen::VectorXd& p) {
    const double s = p(0) * p(0) + p(1) * p(1);
    Eigen::VectorXd v(1);
    v(0) = s * s - p(0) * p(0) + p(1) * p(1);
    return v;
  };
  c.grad_psi = [](const Eigen::VectorXd& p) {
    const double s = p(0) * p(0) + p(1) * p(1);
    Eigen::MatrixXd g(1, 2);
    g << 4.0 * p(0) * s - 2.0 * p(0), 4.0 * p(1) * s + 2.0 * p(1);
    return g;
  };
  c.hess_psi = [](const Eigen::VectorXd& p) {
    const double x = p(0), y = p(1);
    const double s = x * x + y * y;
    Eigen::MatrixXd h(2, 2);
    h(0, 0) = 4.0 * s + 8.0 * x * x - 2.0;
    h(0, 1) = 8.0 * x * y;
    h(1, 0) = h(0, 1);
    h(1, 1) = 4.0 * s + 8.0 * y * y + 2.0;
    return std::vector<Eigen::MatrixXd>{h};
  };
  return c;
}

}  // namespace

CcfcConstraint ccfc_for_path(const std::string& path_name,
                             const PathParams& params,
                             const Eigen::VectorXd& lambda_diag) {
  if ((lambda_diag.array() <= 0.0).any())
    throw std::invalid_argument("ccfc_for_path: Lambda entries must be > 0");
  if (path_name == "sinusoid") return ccfc_sinusoid(lambda_diag);
  if (path_name == "cassini")
    return ccfc_cassini(params.ra, params.rb, lambda_diag);
  if (path_name == "lemniscate") return ccfc_lemniscate(lambda_diag);
  throw std::invalid_argument(
      "ccfc_for_path: no implicit-form constraint for path '" + path_name +
      "'");
}

}  // namespace vfc
