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

#include "vfc/analysis.hpp"

#include <cmath>
#include <stdexcept>

namespace vfc {

ErrorSeries error_series(const TrajectoryLog& log, const VfcContext& ctx,
                         const TaskSpaceMap* task, int resolution) {
  const auto& recs = log.records;
  const int count = static_cast<int>(recs.size());
  if (count == 0) throw std::invalid_argument("error_series: empty log");
  const int m = ctx.path.dim_m();

  ErrorSeries s;
  s.t.resize(count);
  s.beta_norm.resize(count);
  s.phi_norm.resize(count);
  s.dist_hgh.resize(count);
  s.dist_phys.resize(count);
  s.effort.resize(count);

  Eigen::Vector3d task_seed = task ? task->seed0 : Eigen::Vector3d::Zero();
  Eigen::VectorXd xi(m + 1);
  for (int i = 0; i < count; ++i) {
    const LogRecord& r = recs[static_cast<size_t>(i)];
    if (r.state.q.size() != ctx.A.cols_n())
      throw std::invalid_argument("error_series: log/context dimension mismatch");
    s.t(i) = r.state.t;
    s.beta_norm(i) =
        vfc_beta(ctx, r.state.q, r.state.qdot, r.state.w).norm();
    xi.head(m) = ctx.A.apply(r.state.q);
    xi(m) = r.state.w;
    const Eigen::VectorXd ph = phi(ctx.path, xi);
    s.phi_norm(i) = ph.norm();
    s.effort(i) = r.tau.norm();

    const double reach = M_PI + 1.0 + 2.0 * s.phi_norm(i);
    const Interval window{r.state.w - reach, r.state.w + reach};
    s.dist_hgh(i) = dist_to_path_hgh(ctx.path, xi, window, resolution);
    if (task) {
      task_seed = task->to_task(r.state.q, task_seed);
      s.dist_phys(i) =
          dist_to_path(task->task_path, task_seed, window, resolution);
    } else {
      s.dist_phys(i) =
          dist_to_path(ctx.path, xi.head(m), window, resolution);
    }
  }
  return s;
}

double UubBounds::time_to_bound(double s) const {
  const double ratio = std::sqrt(X2 / X1);
  if (s <= dbar * ratio) return 0.0;
  const double num = X2 * s * s - (X1 * X1 / X2) * dbar * dbar;
  const double den = K1 * dbar * dbar * (X1 / X2) -
                     K2 * dbar * std::sqrt(X1 / X2) - K3;
  return num / den;
}

UubBounds uub_bounds(double kappa, double lambda_low, double rho_w, double l1,
                     double l2, double mu, double alpha_norm,
                     const Eigen::MatrixXd& P) {
  if (!(rho_w > -1.0))
    throw std::invalid_argument("uub_bounds: rho_w must exceed -1");
  if (!(kappa > 0.0) || !(lambda_low > 0.0) || !(l1 > 0.0) || !(l2 > 0.0) ||
      !(mu > 0.0) || alpha_norm < 0.0)
    throw std::invalid_argument("uub_bounds: parameters must be positive");
  const double opr = 1.0 + rho_w;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(P);
  const double p_min = es.eigenvalues().minCoeff();
  const double p_max = es.eigenvalues().maxCoeff();

  UubBounds b;
  b.K1 = std::min(2.0 * kappa * lambda_low * opr, 2.0 * opr * l2 / l1);
  b.K2 = 2.0 * opr * (l2 / l1) * alpha_norm;
  b.K3 = 0.5 * opr * mu;
  b.X1 = std::min(p_min, 2.0 * opr / l1);
  b.X2 = std::max(p_max, 2.0 * opr / l1);
  b.R = (b.K2 + std::sqrt(b.K2 * b.K2 + 4.0 * b.K1 * b.K3)) / (2.0 * b.K1);
  b.dbar = std::sqrt(b.X2 / b.X1) * b.R;
  return b;
}

SettleMetrics settle_metrics(const ErrorSeries& series, double tail_fraction) {
  const int count = static_cast<int>(series.t.size());
  if (count < 2)
    throw std::invalid_argument("settle_metrics: need at least 2 samples");
  if (!(tail_fraction > 0.0) || !(tail_fraction < 1.0))
    throw std::invalid_argument("settle_metrics: tail_fraction in (0,1)");

  const int tail_start =
      std::min(count - 1, static_cast<int>(std::floor((1.0 - tail_fraction) *
                                                      (count - 1))));
  SettleMetrics m;
  m.ultimate_bound_est = series.dist_phys.tail(count - tail_start).maxCoeff();

  const double threshold = 1.05 * m.ultimate_bound_est;
  int first_inside = count - 1;
  for (int i = count - 1; i >= 0; --i) {
    if (series.dist_phys(i) <= threshold)
      first_inside = i;
    else
      break;
  }
  m.settle_time = series.t(first_inside);
  // Trapezoidal time average of the effort.
  double integral = 0.0;
  for (int i = 1; i < count; ++i)
    integral += 0.5 * (series.effort(i) + series.effort(i - 1)) *
                (series.t(i) - series.t(i - 1));
  const double span = series.t(count - 1) - series.t(0);
  m.mean_effort = span > 0.0 ? integral / span : series.effort(0);
  return m;
}

LogLinearFit fit_log_linear(const Eigen::VectorXd& t, const Eigen::VectorXd& y,
                            double t_min, double floor) {
  LogLinearFit fit;
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  int n = 0;
  for (int i = 0; i < t.size(); ++i) {
    if (t(i) < t_min || !(y(i) > floor)) continue;
    const double ly = std::log(y(i));
    sx += t(i);
    sy += ly;
    sxx += t(i) * t(i);
    sxy += t(i) * ly;
    syy += ly * ly;
    ++n;
  }
  fit.samples = n;
  if (n < 2) return fit;
  const double denom = n * sxx - sx * sx;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  const double ss_tot = syy - sy * sy / n;
  const double ss_res = ss_tot - fit.slope * (sxy - sx * sy / n);
  fit.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

}  // namespace vfc
