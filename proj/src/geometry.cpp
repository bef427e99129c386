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

#include "vfc/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace vfc {

namespace {

// Numerical tangent bound: max |f'_i| over a fine grid of the window.
double scan_tangent_bound(const ParametricPath::EvalFn& d1, int dim,
                          const Interval& window) {
  constexpr int kSamples = 4001;
  Eigen::VectorXd buf(dim);
  double bound = 0.0;
  for (int i = 0; i < kSamples; ++i) {
    const double w =
        window.lo + window.width() * static_cast<double>(i) / (kSamples - 1);
    d1(w, buf);
    bound = std::max(bound, buf.cwiseAbs().maxCoeff());
  }
  return bound;
}

}  // namespace

ParametricPath::ParametricPath(std::string name, int dim_m, EvalFn eval,
                               EvalFn d1, EvalFn d2, Interval w_window,
                               double tangent_bound)
    : name_(std::move(name)),
      dim_m_(dim_m),
      eval_(std::move(eval)),
      d1_(std::move(d1)),
      d2_(std::move(d2)),
      w_window_(w_window),
      tangent_bound_(tangent_bound) {
  if (dim_m_ < 1) throw std::invalid_argument("ParametricPath: dim_m < 1");
  if (w_window_.empty())
    throw std::invalid_argument("ParametricPath: empty w_window");
  if (!(tangent_bound_ > 0.0))
    throw std::invalid_argument("ParametricPath: tangent_bound must be > 0");
}

Eigen::VectorXd ParametricPath::eval(double w) const {
  Eigen::VectorXd out(dim_m_);
  eval_(w, out);
  return out;
}

Eigen::VectorXd ParametricPath::d1(double w) const {
  Eigen::VectorXd out(dim_m_);
  d1_(w, out);
  return out;
}

Eigen::VectorXd ParametricPath::d2(double w) const {
  Eigen::VectorXd out(dim_m_);
  d2_(w, out);
  return out;
}

void ParametricPath::eval_into(double w, Eigen::Ref<Eigen::VectorXd> out) const {
  eval_(w, out);
}

void ParametricPath::d1_into(double w, Eigen::Ref<Eigen::VectorXd> out) const {
  d1_(w, out);
}

void ParametricPath::d2_into(double w, Eigen::Ref<Eigen::VectorXd> out) const {
  d2_(w, out);
}

SelectionMatrix::SelectionMatrix(std::vector<int> indices, int n)
    : indices_(std::move(indices)), cols_n_(n) {
  const int m = static_cast<int>(indices_.size());
  if (m == 0 || m > n)
    throw std::invalid_argument("SelectionMatrix: need 1 <= m <= n indices");
  for (int i = 0; i < m; ++i) {
    if (indices_[i] < 1 || indices_[i] > n)
      throw std::invalid_argument("SelectionMatrix: index out of range 1..n");
    if (i > 0 && indices_[i] <= indices_[i - 1])
      throw std::invalid_argument(
          "SelectionMatrix: indices must be strictly increasing");
  }
  entries_ = Eigen::MatrixXd::Zero(m, n);
  for (int i = 0; i < m; ++i) entries_(i, indices_[i] - 1) = 1.0;
}

Eigen::VectorXd SelectionMatrix::apply(const Eigen::VectorXd& q) const {
  if (q.size() != cols_n_)
    throw std::invalid_argument("SelectionMatrix::apply: dimension mismatch");
  Eigen::VectorXd out(rows_m());
  for (int i = 0; i < rows_m(); ++i) out(i) = q(indices_[i] - 1);
  return out;
}

SelectionMatrix make_selection_matrix(const std::vector<int>& indices, int n) {
  return SelectionMatrix(indices, n);
}

namespace {

ParametricPath make_sinusoid() {
  auto eval = [](double w, Eigen::Ref<Eigen::VectorXd> o) {
    o(0) = w;
    o(1) = std::sin(w);
  };
  auto d1 = [](double w, Eigen::Ref<Eigen::VectorXd> o) {
    o(0) = 1.0;
    o(1) = std::cos(w);
  };
  auto d2 = [](double w, Eigen::Ref<Eigen::VectorXd> o) {
    o(0) = 0.0;
    o(1) = -std::sin(w);
  };
  Interval win{-10.0, 10.0};
  const double bound = scan_tangent_bound(d1, 2, win);
  return ParametricPath("sinusoid", 2, eval, d1, d2, win, bound);
}

// Cassini oval parameterized by s(w) = sqrt(ra^2 cos2w + sqrt(rb^4 - ra^4 sin^2 2w)),
// f = (s cos w, s sin w). rb > ra keeps both radicands positive.
ParametricPath make_cassini(double ra, double rb) {
  if (!(ra > 0.0))
    throw std::invalid_argument("cassini: ra must be > 0");
  if (!(rb > ra))
    throw std::invalid_argument(
        "cassini: requires rb > ra (radicand may go negative otherwise)");
  const double ra2 = ra * ra;
  const double ra4 = ra2 * ra2;
  const double rb4 = rb * rb * rb * rb;

  struct Radial {
    double s, s1, s2;  // s(w), s'(w), s''(w)
  };
  auto radial = [ra2, ra4, rb4](double w) -> Radial {
    const double s2w = std::sin(2.0 * w), c2w = std::cos(2.0 * w);
    const double s4w = std::sin(4.0 * w), c4w = std::cos(4.0 * w);
    const double h = std::sqrt(rb4 - ra4 * s2w * s2w);
    const double hp = -ra4 * s4w / h;
    const double hpp = -4.0 * ra4 * c4w / h - (ra4 * s4w) * (ra4 * s4w) / (h * h * h);
    const double g = ra2 * c2w + h;
    const double gp = -2.0 * ra2 * s2w + hp;
    const double gpp = -4.0 * ra2 * c2w + hpp;
    const double s = std::sqrt(g);
    const double sp = gp / (2.0 * s);
    const double spp = (2.0 * gpp * g - gp * gp) / (4.0 * g * s);
    return {s, sp, spp};
  };

  auto eval = [radial](double w, Eigen::Ref<Eigen::VectorXd> o) {
    const Radial r = radial(w);
    o(0) = r.s * std::cos(w);
    o(1) = r.s * std::sin(w);
  };
  auto d1 = [radial](double w, Eigen::Ref<Eigen::VectorXd> o) {
    const Radial r = radial(w);
    const double c = std::cos(w), s = std::sin(w);
    o(0) = r.s1 * c - r.s * s;
    o(1) = r.s1 * s + r.s * c;
  };
  auto d2 = [radial](double w, Eigen::Ref<Eigen::VectorXd> o) {
    const Radial r = radial(w);
    const double c = std::cos(w), s = std::sin(w);
    o(0) = r.s2 * c - 2.0 * r.s1 * s - r.s * c;
    o(1) = r.s2 * s + 2.0 * r.s1 * c - r.s * s;
  };
  Interval win{0.0, 2.0 * M_PI};
  const double bound = scan_tangent_bound(d1, 2, win);
  return ParametricPath("cassini", 2, eval, d1, d2, win, bound);
}

// Lemniscate of Bernoulli, x = cos w / (1+sin^2 w), y = sin w cos w / (1+sin^2 w).
// Derivatives reduce to x' = -u(3-u^2)/D^2, y' = (1-3u^2)/D^2 with u = sin w,
// D = 1+u^2.
ParametricPath make_lemniscate() {
  auto eval = [](double w, Eigen::Ref<Eigen::VectorXd> o) {
    const double u = std::sin(w), c = std::cos(w);
    const double D = 1.0 + u * u;
    o(0) = c / D;
    o(1) = u * c / D;
  };
  auto d1 = [](double w, Eigen::Ref<Eigen::VectorXd> o) {
    const double u = std::sin(w);
    const double D = 1.0 + u * u;
    o(0) = -u * (3.0 - u * u) / (D * D);
    o(1) = (1.0 - 3.0 * u * u) / (D * D);
  };
  auto d2 = [](double w, Eigen::Ref<Eigen::VectorXd> o) {
    const double u = std::sin(w), c = std::cos(w);
    const double D = 1.0 + u * u;
    const double D3 = D * D * D;
    o(0) = c * (-3.0 + 12.0 * u * u - u * u * u * u) / D3;
    o(1) = -2.0 * u * c * (5.0 - 3.0 * u * u) / D3;
  };
  Interval win{0.0, 2.0 * M_PI};
  const double bound = scan_tangent_bound(d1, 2, win);
  return ParametricPath("lemniscate", 2, eval, d1, d2, win, bound);
}

// Intersection of the cylinders (x-xc)^2+(z-zc)^2 = R1^2 and (y-yc)^2+z^2 = R2^2.
// x and z are analytic throughout; y'' uses 5-point central differences of the
// analytic y' (step 1e-5), the closed form being unwieldy.
ParametricPath make_cylinder_intersection(const PathParams& p) {
  if (!(p.R1 > 0.0) || !(p.R2 > 0.0))
    throw std::invalid_argument("cylinder_intersection: radii must be > 0");
  if (!(p.R2 > p.R1))
    throw std::invalid_argument(
        "cylinder_intersection: requires R2 > R1 for a real intersection");
  const double R1 = p.R1, R2 = p.R2, xc = p.xc, yc = p.yc, zc = p.zc;

  auto y_d1 = [R1, R2](double w) {
    const double u = std::sin(w), c = std::cos(w);
    const double q = std::sqrt(R1 * (R2 - R1 * u * u));
    return 2.0 * c * (R1 * R2 - 2.0 * R1 * R1 * u * u) / q;
  };
  auto eval = [R1, R2, xc, yc, zc](double w, Eigen::Ref<Eigen::VectorXd> o) {
    const double u = std::sin(w);
    o(0) = xc + R1 * std::sin(2.0 * w);
    o(1) = yc + 2.0 * u * std::sqrt(R1 * (R2 - R1 * u * u));
    o(2) = zc + R1 * std::cos(2.0 * w);
  };
  auto d1 = [R1, y_d1](double w, Eigen::Ref<Eigen::VectorXd> o) {
    o(0) = 2.0 * R1 * std::cos(2.0 * w);
    o(1) = y_d1(w);
    o(2) = -2.0 * R1 * std::sin(2.0 * w);
  };
  auto d2 = [R1, y_d1](double w, Eigen::Ref<Eigen::VectorXd> o) {
    o(0) = -4.0 * R1 * std::sin(2.0 * w);
    const double h = 1e-5;
    o(1) = (-y_d1(w + 2.0 * h) + 8.0 * y_d1(w + h) - 8.0 * y_d1(w - h) +
            y_d1(w - 2.0 * h)) /
           (12.0 * h);
    o(2) = -4.0 * R1 * std::cos(2.0 * w);
  };
  Interval win{0.0, 2.0 * M_PI};
  const double bound = scan_tangent_bound(d1, 3, win);
  return ParametricPath("cylinder_intersection", 3, eval, d1, d2, win, bound);
}

// (3,2)-torus knot around the given center.
ParametricPath make_torus_knot(const PathParams& p) {
  if (!(p.knot_R > 0.0) || !(p.knot_r > 0.0) || !(p.knot_R > p.knot_r))
    throw std::invalid_argument("torus_knot: requires knot_R > knot_r > 0");
  const double R = p.knot_R, r = p.knot_r;
  const double cx = p.knot_cx, cy = p.knot_cy, cz = p.knot_cz;

  auto eval = [=](double w, Eigen::Ref<Eigen::VectorXd> o) {
    const double rho = R + r * std::cos(3.0 * w);
    o(0) = cx + rho * std::cos(2.0 * w);
    o(1) = cy + rho * std::sin(2.0 * w);
    o(2) = cz + r * std::sin(3.0 * w);
  };
  auto d1 = [=](double w, Eigen::Ref<Eigen::VectorXd> o) {
    const double s3 = std::sin(3.0 * w), c3 = std::cos(3.0 * w);
    const double s2 = std::sin(2.0 * w), c2 = std::cos(2.0 * w);
    const double rho = R + r * c3;
    o(0) = -3.0 * r * s3 * c2 - 2.0 * rho * s2;
    o(1) = -3.0 * r * s3 * s2 + 2.0 * rho * c2;
    o(2) = 3.0 * r * c3;
  };
  auto d2 = [=](double w, Eigen::Ref<Eigen::VectorXd> o) {
    const double s3 = std::sin(3.0 * w), c3 = std::cos(3.0 * w);
    const double s2 = std::sin(2.0 * w), c2 = std::cos(2.0 * w);
    const double rho = R + r * c3;
    o(0) = -9.0 * r * c3 * c2 + 12.0 * r * s3 * s2 - 4.0 * rho * c2;
    o(1) = -9.0 * r * c3 * s2 - 12.0 * r * s3 * c2 - 4.0 * rho * s2;
    o(2) = -9.0 * r * s3;
  };
  Interval win{0.0, 2.0 * M_PI};
  const double bound = scan_tangent_bound(d1, 3, win);
  return ParametricPath("torus_knot", 3, eval, d1, d2, win, bound);
}

}  // namespace

const std::vector<std::string>& builtin_path_names() {
  static const std::vector<std::string> names = {
      "sinusoid", "cassini", "lemniscate", "cylinder_intersection",
      "torus_knot"};
  return names;
}

ParametricPath builtin_path(const std::string& name, const PathParams& params) {
  if (name == "sinusoid") return make_sinusoid();
  if (name == "cassini") return make_cassini(params.ra, params.rb);
  if (name == "lemniscate") return make_lemniscate();
  if (name == "cylinder_intersection") return make_cylinder_intersection(params);
  if (name == "torus_knot") return make_torus_knot(params);
  std::string known;
  for (const auto& n : builtin_path_names()) known += " " + n;
  throw std::invalid_argument("builtin_path: unknown path '" + name +
                              "'; known:" + known);
}

Eigen::VectorXd phi(const ParametricPath& path, const Eigen::VectorXd& xi) {
  const int m = path.dim_m();
  if (xi.size() != m + 1)
    throw std::invalid_argument("phi: xi must have dim_m + 1 entries");
  Eigen::VectorXd f(m);
  path.eval_into(xi(m), f);
  return xi.head(m) - f;
}

namespace {

// Squared distance objective; reuses the caller's buffer.
inline double sq_dist(const ParametricPath& path, const Eigen::VectorXd& point,
                      double w, Eigen::VectorXd& buf) {
  path.eval_into(w, buf);
  buf -= point;
  return buf.squaredNorm();
}

double golden_refine(const std::function<double(double)>& f2, double a,
                     double b) {
  constexpr double kInvPhi = 0.6180339887498949;
  constexpr double kTol = 1e-8;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = f2(x1), f2v = f2(x2);
  while (b - a > kTol) {
    if (f1 < f2v) {
      b = x2;
      x2 = x1;
      f2v = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = f2(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2v;
      x2 = a + kInvPhi * (b - a);
      f2v = f2(x2);
    }
  }
  const double mid = 0.5 * (a + b);
  return std::min({f2(mid), f1, f2v});
}

double min_over_window(const std::function<double(double)>& f2,
                       const Interval& window, int resolution) {
  if (window.empty())
    throw std::invalid_argument("dist_to_path: empty parameter window");
  if (resolution < 100)
    throw std::invalid_argument("dist_to_path: resolution must be >= 100");
  const double step = window.width() / resolution;
  double best = std::numeric_limits<double>::infinity();
  int best_i = 0;
  for (int i = 0; i <= resolution; ++i) {
    const double v = f2(window.lo + i * step);
    if (v < best) {
      best = v;
      best_i = i;
    }
  }
  const double a = window.lo + std::max(0, best_i - 1) * step;
  const double b = window.lo + std::min(resolution, best_i + 1) * step;
  return std::min(best, golden_refine(f2, a, b));
}

}  // namespace

double dist_to_path(const ParametricPath& path, const Eigen::VectorXd& point,
                    const Interval& window, int resolution) {
  if (point.size() != path.dim_m())
    throw std::invalid_argument("dist_to_path: point dimension mismatch");
  Eigen::VectorXd buf(path.dim_m());
  auto f2 = [&](double w) { return sq_dist(path, point, w, buf); };
  return std::sqrt(min_over_window(f2, window, resolution));
}

double dist_to_path(const ParametricPath& path, const Eigen::VectorXd& point,
                    int resolution) {
  return dist_to_path(path, point, path.w_window(), resolution);
}

double dist_to_path_hgh(const ParametricPath& path, const Eigen::VectorXd& xi,
                        const Interval& window, int resolution) {
  const int m = path.dim_m();
  if (xi.size() != m + 1)
    throw std::invalid_argument("dist_to_path_hgh: xi dimension mismatch");
  Eigen::VectorXd buf(m);
  const double w = xi(m);
  auto f2 = [&](double wp) {
    path.eval_into(wp, buf);
    buf -= xi.head(m);
    return buf.squaredNorm() + (wp - w) * (wp - w);
  };
  return std::sqrt(min_over_window(f2, window, resolution));
}

}  // namespace vfc
