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
#include <vector>

namespace vfc {

/// Closed parameter interval [lo, hi].
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool empty() const { return !(lo <= hi); }
  double width() const { return hi - lo; }
};

/// A desired geometric path given as a parameter-to-point map f(w) together
/// with its first two derivatives. All three evaluators accept any real w;
/// w_window is the interval the distance oracle scans by default.
class ParametricPath {
 public:
  // Evaluators write dim_m components into the output block.
  using EvalFn = std::function<void(double, Eigen::Ref<Eigen::VectorXd>)>;

  ParametricPath(std::string name, int dim_m, EvalFn eval, EvalFn d1,
                 EvalFn d2, Interval w_window, double tangent_bound);

  int dim_m() const { return dim_m_; }
  const std::string& name() const { return name_; }
  const Interval& w_window() const { return w_window_; }

  /// Max over the window of |f'_i(w)|; every component derivative stays
  /// within this bound.
  double tangent_bound() const { return tangent_bound_; }

  Eigen::VectorXd eval(double w) const;
  Eigen::VectorXd d1(double w) const;
  Eigen::VectorXd d2(double w) const;

  // Allocation-free variants for hot loops (out must have dim_m entries).
  void eval_into(double w, Eigen::Ref<Eigen::VectorXd> out) const;
  void d1_into(double w, Eigen::Ref<Eigen::VectorXd> out) const;
  void d2_into(double w, Eigen::Ref<Eigen::VectorXd> out) const;

 private:
  std::string name_;
  int dim_m_;
  EvalFn eval_, d1_, d2_;
  Interval w_window_;
  double tangent_bound_;
};

/// Binary m-by-n selection matrix extracting (q_{s1},...,q_{sm}) from q.
/// Indices are 1-based and strictly increasing, matching the usual
/// constraint-matrix convention.
class SelectionMatrix {
 public:
  SelectionMatrix(std::vector<int> indices, int n);

  int rows_m() const { return static_cast<int>(indices_.size()); }
  int cols_n() const { return cols_n_; }
  const std::vector<int>& indices() const { return indices_; }
  const Eigen::MatrixXd& matrix() const { return entries_; }

  /// Exact selection A q = q^s (no arithmetic, just element picks).
  Eigen::VectorXd apply(const Eigen::VectorXd& q) const;

 private:
  std::vector<int> indices_;
  int cols_n_;
  Eigen::MatrixXd entries_;
};

/// Builds the selection matrix for 1-based indices s_1 < ... < s_m from
/// {1..n}. Throws std::invalid_argument on duplicate, out-of-range or
/// non-increasing indices.
SelectionMatrix make_selection_matrix(const std::vector<int>& indices, int n);

/// Parameters for the built-in path catalog. Only the fields relevant to a
/// given path are read; defaults reproduce the standard benchmark curves.
struct PathParams {
  // Cassini oval (x^2+y^2+ra^2)^2 - 4 ra^2 x^2 - rb^4 = 0; requires rb > ra.
  double ra = 3.0;
  double rb = 3.15;
  // Cylinder intersection (x-xc)^2+(z-zc)^2 = R1^2, (y-yc)^2+z^2 = R2^2.
  double R1 = 0.5;
  double R2 = 1.5;
  double xc = 0.0;
  double yc = 2.5;
  double zc = 1.0;
  // (3,2)-torus knot: main radius, tube radius, center.
  double knot_R = 1.0;
  double knot_r = 0.2;
  double knot_cx = 0.0;
  double knot_cy = 2.0;
  double knot_cz = 1.0;
};

/// Catalog names accepted by builtin_path.
const std::vector<std::string>& builtin_path_names();

/// Builds a catalog path with analytic eval/d1/d2 (the cylinder
/// intersection's y'' uses high-order central differences; see the source).
/// Throws std::invalid_argument on unknown name or invalid parameters.
ParametricPath builtin_path(const std::string& name, const PathParams& params = {});

/// phi_i(xi) = zeta_i - f_i(w) for xi = (zeta, w).
Eigen::VectorXd phi(const ParametricPath& path, const Eigen::VectorXd& xi);

/// Distance from a point to the path, minimized over the given parameter
/// window: dense scan with `resolution` samples followed by golden-section
/// refinement of the bracketing interval to width 1e-8.
double dist_to_path(const ParametricPath& path, const Eigen::VectorXd& point,
                    const Interval& window, int resolution);

/// Same, over the path's own w_window.
double dist_to_path(const ParametricPath& path, const Eigen::VectorXd& point,
                    int resolution = 2000);

/// Distance from an augmented point xi = (zeta, w) to the augmented path
/// {(f(w'), w')}, minimized over the given window of w'.
double dist_to_path_hgh(const ParametricPath& path, const Eigen::VectorXd& xi,
                        const Interval& window, int resolution = 2000);

}  // namespace vfc
