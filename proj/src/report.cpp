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

#include "vfc/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace vfc {

namespace {

// 13 significant digits, fixed-width scientific; deterministic across runs.
std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12e", v);
  return buf;
}

}  // namespace

std::string trajectory_csv(const TrajectoryLog& log,
                           const ErrorSeries& series) {
  const auto& recs = log.records;
  std::ostringstream os;
  if (recs.empty()) return "";
  const int n = static_cast<int>(recs[0].state.q.size());
  const int k = static_cast<int>(recs[0].state.alpha_hat.size());
  const int mi = static_cast<int>(recs[0].tau.size());

  os << "t";
  for (int i = 1; i <= n; ++i) os << ",q" << i;
  for (int i = 1; i <= n; ++i) os << ",qd" << i;
  os << ",w";
  for (int i = 1; i <= k; ++i) os << ",alpha" << i;
  for (int i = 1; i <= mi; ++i) os << ",tau" << i;
  os << ",beta_norm,phi_norm,dist_hgh,dist_phys\n";

  for (size_t r = 0; r < recs.size(); ++r) {
    const LogRecord& rec = recs[r];
    const Eigen::Index i = static_cast<Eigen::Index>(r);
    os << num(rec.state.t);
    for (int j = 0; j < n; ++j) os << ',' << num(rec.state.q(j));
    for (int j = 0; j < n; ++j) os << ',' << num(rec.state.qdot(j));
    os << ',' << num(rec.state.w);
    for (int j = 0; j < k; ++j) os << ',' << num(rec.state.alpha_hat(j));
    for (int j = 0; j < mi; ++j) os << ',' << num(rec.tau(j));
    os << ',' << num(series.beta_norm(i)) << ',' << num(series.phi_norm(i))
       << ',' << num(series.dist_hgh(i)) << ',' << num(series.dist_phys(i))
       << '\n';
  }
  return os.str();
}

std::string metrics_json(const ScenarioConfig& config,
                         const TrajectoryLog& log, const ErrorSeries& series,
                         double lambda_low, double rho_w,
                         double alpha_norm_override) {
  using json = nlohmann::ordered_json;
  const LogRecord& last = log.records.back();
  const Eigen::Index end = series.t.size() - 1;

  json j;
  j["scenario"] = config.id;
  j["controller"] = config.controller;
  j["plant_mode"] = config.plant_mode;
  j["step"] = config.step;
  j["duration"] = config.duration;

  json terminal;
  terminal["t"] = last.state.t;
  terminal["beta_norm"] = series.beta_norm(end);
  terminal["phi_norm"] = series.phi_norm(end);
  terminal["dist_hgh"] = series.dist_hgh(end);
  terminal["dist_phys"] = series.dist_phys(end);
  if (last.state.alpha_hat.size() > 0) {
    std::vector<double> a(last.state.alpha_hat.data(),
                          last.state.alpha_hat.data() +
                              last.state.alpha_hat.size());
    terminal["alpha_hat"] = a;
  }
  j["terminal"] = terminal;

  const SettleMetrics sm = settle_metrics(series, 0.2);
  json settle;
  settle["tail_fraction"] = 0.2;
  settle["ultimate_bound_est"] = sm.ultimate_bound_est;
  settle["settle_time"] = sm.settle_time;
  settle["mean_effort"] = sm.mean_effort;
  j["settle"] = settle;

  if (config.controller == "adaptive_robust") {
    const double alpha_terminal = last.state.alpha_hat.norm();
    Eigen::VectorXd pd(static_cast<Eigen::Index>(config.P_diag.size()));
    for (Eigen::Index i = 0; i < pd.size(); ++i)
      pd(i) = config.P_diag[static_cast<size_t>(i)];
    auto bounds_json = [&](double alpha_norm) {
      const UubBounds b =
          uub_bounds(config.kappa, lambda_low, rho_w, config.l1, config.l2,
                     config.mu, alpha_norm, Eigen::MatrixXd(pd.asDiagonal()));
      json bj;
      bj["alpha_norm_used"] = alpha_norm;
      bj["K1"] = b.K1;
      bj["K2"] = b.K2;
      bj["K3"] = b.K3;
      bj["X1"] = b.X1;
      bj["X2"] = b.X2;
      bj["R"] = b.R;
      bj["dbar"] = b.dbar;
      return bj;
    };
    j["uub_with_terminal_alpha"] = bounds_json(alpha_terminal);
    if (alpha_norm_override >= 0.0)
      j["uub_with_override_alpha"] = bounds_json(alpha_norm_override);
    j["assumption_certificates"] = {{"lambda_low", lambda_low},
                                    {"rho_w", rho_w}};
  }
  return j.dump(2) + "\n";
}

namespace {

struct Box {
  double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  void include(double x, double y) {
    xmin = std::min(xmin, x);
    xmax = std::max(xmax, x);
    ymin = std::min(ymin, y);
    ymax = std::max(ymax, y);
  }
};

std::string polyline(const std::vector<std::pair<double, double>>& pts,
                     const Box& box, double px, double py, double pw, double ph,
                     const std::string& style) {
  const double sx = pw / (box.xmax - box.xmin);
  const double sy = ph / (box.ymax - box.ymin);
  std::ostringstream os;
  os << "<polyline fill=\"none\" " << style << " points=\"";
  for (const auto& [x, y] : pts) {
    const double cx = px + (x - box.xmin) * sx;
    const double cy = py + ph - (y - box.ymin) * sy;  // svg y grows downward
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.2f,%.2f ", cx, cy);
    os << buf;
  }
  os << "\"/>\n";
  return os.str();
}

}  // namespace

std::string trajectory_svg(const TrajectoryLog& log, const ErrorSeries& series,
                           const VfcContext& ctx) {
  const double W = 980, H = 460, pad = 45;
  const double panel_w = (W - 3 * pad) / 2.0;
  const double panel_h = H - 2 * pad;

  // Desired path and trajectory, first two coordinates.
  std::vector<std::pair<double, double>> path_pts, traj_pts;
  const Interval win = ctx.path.w_window();
  Box overlay;
  bool first = true;
  for (int i = 0; i <= 800; ++i) {
    const double w = win.lo + win.width() * i / 800;
    const Eigen::VectorXd p = ctx.path.eval(w);
    path_pts.emplace_back(p(0), p(1));
    if (first) {
      overlay = Box{p(0), p(0), p(1), p(1)};
      first = false;
    }
    overlay.include(p(0), p(1));
  }
  for (const auto& rec : log.records) {
    const Eigen::VectorXd z = ctx.A.apply(rec.state.q);
    traj_pts.emplace_back(z(0), z(1));
    overlay.include(z(0), z(1));
  }
  // A touch of margin so strokes stay inside the frame.
  const double mx = 0.05 * (overlay.xmax - overlay.xmin + 1e-9);
  const double my = 0.05 * (overlay.ymax - overlay.ymin + 1e-9);
  overlay.xmin -= mx;
  overlay.xmax += mx;
  overlay.ymin -= my;
  overlay.ymax += my;

  std::vector<std::pair<double, double>> dist_pts, beta_pts;
  Box errors{0.0, std::max(1e-9, series.t(series.t.size() - 1)), 0.0, 1e-9};
  for (Eigen::Index i = 0; i < series.t.size(); ++i) {
    dist_pts.emplace_back(series.t(i), series.dist_phys(i));
    beta_pts.emplace_back(series.t(i), series.beta_norm(i));
    errors.include(series.t(i), series.dist_phys(i));
    errors.include(series.t(i), series.beta_norm(i));
  }

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W
     << "\" height=\"" << H << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  os << "<rect x=\"" << pad << "\" y=\"" << pad << "\" width=\"" << panel_w
     << "\" height=\"" << panel_h
     << "\" fill=\"none\" stroke=\"#888\" stroke-width=\"1\"/>\n";
  os << polyline(path_pts, overlay, pad, pad, panel_w, panel_h,
                 "stroke=\"#999\" stroke-width=\"1.5\" stroke-dasharray=\"6 4\"");
  os << polyline(traj_pts, overlay, pad, pad, panel_w, panel_h,
                 "stroke=\"#c0392b\" stroke-width=\"1.5\"");
  os << "<text x=\"" << pad << "\" y=\"" << pad - 12
     << "\" font-family=\"sans-serif\" font-size=\"14\">" << log.scenario_id
     << ": trajectory (red) vs desired path (dashed)</text>\n";

  const double x2 = 2 * pad + panel_w;
  os << "<rect x=\"" << x2 << "\" y=\"" << pad << "\" width=\"" << panel_w
     << "\" height=\"" << panel_h
     << "\" fill=\"none\" stroke=\"#888\" stroke-width=\"1\"/>\n";
  os << polyline(dist_pts, errors, x2, pad, panel_w, panel_h,
                 "stroke=\"#2471a3\" stroke-width=\"1.2\"");
  os << polyline(beta_pts, errors, x2, pad, panel_w, panel_h,
                 "stroke=\"#1e8449\" stroke-width=\"1.2\"");
  os << "<text x=\"" << x2 << "\" y=\"" << pad - 12
     << "\" font-family=\"sans-serif\" font-size=\"14\">errors vs time: "
        "dist (blue), ||beta|| (green)</text>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace vfc
