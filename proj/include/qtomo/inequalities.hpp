// Copyright 2026 The qtomo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cmath>
#include <string>

#include "qtomo/common.hpp"
#include "qtomo/statistics.hpp"
#include "qtomo/tomography.hpp"
#include "qtomo/wigner.hpp"

namespace qtomo {

/// Ordered cut points -inf < x1 <= x2 <= x3 < inf partitioning the line.
struct CutPoints {
  double x1, x2, x3;

  CutPoints(double a, double b, double c) : x1(a), x2(b), x3(c) {
    require(std::isfinite(a) && std::isfinite(b) && std::isfinite(c), "InvalidParameter",
            "cut points must be finite");
    require(a <= b && b <= c, "InvalidParameter", "cut points must be ordered");
  }
};

/// Masses of the four partition cells (-inf,x1], (x1,x2], (x2,x3], (x3,inf).
struct FourProbabilities {
  std::array<double, 4> p{0.0, 0.0, 0.0, 0.0};
  double sum() const { return p[0] + p[1] + p[2] + p[3]; }
};

/// Wigner-squared strip functionals over the same q-partition.
struct FourFunctionals {
  std::array<double, 4> pi{0.0, 0.0, 0.0, 0.0};
  double sum() const { return pi[0] + pi[1] + pi[2] + pi[3]; }
};

namespace detail {

/// Cumulative trapezoidal mass of a piecewise-linear density, evaluated at an
/// arbitrary point: the cell containing the point contributes the exact
/// integral of the linear interpolant, so cell splits stay mass-preserving.
class RowCdf {
 public:
  RowCdf(std::vector<double> values, double x_min, double dx)
      : values_(std::move(values)), x_min_(x_min), dx_(dx) {
    const int n = static_cast<int>(values_.size());
    cum_.resize(values_.size());
    double acc = 0.0;
    cum_[0] = 0.0;
    for (int j = 1; j < n; ++j) {
      acc += 0.5 * (values_[static_cast<std::size_t>(j - 1)] +
                    values_[static_cast<std::size_t>(j)]) * dx_;
      cum_[static_cast<std::size_t>(j)] = acc;
    }
  }

  double total() const { return cum_.back(); }

  /// Mass of (-inf, x].
  double operator()(double x) const {
    const int n = static_cast<int>(values_.size());
    const double f = (x - x_min_) / dx_;
    if (f <= 0.0) return 0.0;
    if (f >= n - 1) return total();
    const int j = static_cast<int>(f);
    const double t = f - j;
    const double w0 = values_[static_cast<std::size_t>(j)];
    const double w1 = values_[static_cast<std::size_t>(j + 1)];
    // integral of the linear interpolant over the partial cell
    return cum_[static_cast<std::size_t>(j)] + dx_ * (t * w0 + 0.5 * t * t * (w1 - w0));
  }

 private:
  std::vector<double> values_;
  double x_min_, dx_;
  std::vector<double> cum_;
};

inline RowCdf row_cdf(const Eigen::MatrixXd& values, int row, double x_min, double dx) {
  std::vector<double> v(static_cast<std::size_t>(values.cols()));
  for (int j = 0; j < values.cols(); ++j) v[static_cast<std::size_t>(j)] = values(row, j);
  return RowCdf(std::move(v), x_min, dx);
}

}  // namespace detail

/// Partition the tomogram at phase theta into the four cell masses.
inline FourProbabilities four_probs(const OpticalTomogram& opt, double theta,
                                    const CutPoints& cuts) {
  const auto [row, flip] = theta_row(opt, theta);
  const detail::RowCdf cdf = detail::row_cdf(opt.values, row, opt.x_min, opt.dx());
  const double total = cdf.total();
  require(total > 0.0, "InvalidParameter", "tomogram row carries no mass");

  // folded phase means the stored row is the X-reflection of the physical one
  const double c1 = flip ? -cuts.x3 : cuts.x1;
  const double c2 = flip ? -cuts.x2 : cuts.x2;
  const double c3 = flip ? -cuts.x1 : cuts.x3;
  const double f1 = cdf(c1), f2 = cdf(c2), f3 = cdf(c3);
  FourProbabilities out;
  out.p[0] = f1 / total;
  out.p[1] = (f2 - f1) / total;
  out.p[2] = (f3 - f2) / total;
  out.p[3] = (total - f3) / total;
  if (flip) {
    std::swap(out.p[0], out.p[3]);
    std::swap(out.p[1], out.p[2]);
  }
  for (double& v : out.p) v = std::max(v, 0.0);
  return out;
}

namespace detail {

/// H(p) <= H(rows) + H(cols) for the 2x2 table [p1 p2; p3 p4].
inline InequalityReport subadditivity_report(const std::array<double, 4>& p, std::string name,
                                             double tolerance, std::string note) {
  const double lhs = -(xlogx(p[0]) + xlogx(p[1]) + xlogx(p[2]) + xlogx(p[3]));
  const double rhs = -(xlogx(p[0] + p[1]) + xlogx(p[2] + p[3]) + xlogx(p[0] + p[2]) +
                       xlogx(p[1] + p[3]));
  return make_report(std::move(name), lhs, rhs, rhs - lhs, tolerance, std::move(note));
}

}  // namespace detail

/// Subadditivity analog for the four tomographic probabilities.
inline InequalityReport subadditivity_check(const FourProbabilities& p,
                                            double tolerance = 1e-9) {
  for (double v : p.p) {
    require(v >= 0.0 && std::isfinite(v), "InvalidParameter", "probabilities must be >= 0");
  }
  return detail::subadditivity_report(p.p, "subadditivity", tolerance, {});
}

/// Strip functionals Pi_i = int_strip int W^2 dq dp / (2 pi); strips in q,
/// full range in p. Cut points inside a column are split linearly so the sum
/// equals the full-plane integral exactly.
inline FourFunctionals four_functionals(const WignerGrid& w, const CutPoints& cuts) {
  const GridSpec& grid = w.grid;
  const double peak = w.values.cwiseAbs().maxCoeff();
  // Cuts beyond the grid are fine while no visible mass sits out there.
  double edge = 0.0;
  for (int j = 0; j < grid.n_p; ++j) {
    edge = std::max({edge, std::abs(w.values(0, j)), std::abs(w.values(grid.n_q - 1, j))});
  }
  if ((cuts.x1 < grid.q_min || cuts.x3 > grid.q_max) && edge > 1e-3 * peak) {
    fail("GridTooSmall", "cut strips extend past a grid that still carries mass");
  }

  // p-integrated W^2 per q column (trapezoid in p)
  std::vector<double> column(static_cast<std::size_t>(grid.n_q), 0.0);
  for (int i = 0; i < grid.n_q; ++i) {
    double acc = 0.0;
    for (int j = 0; j < grid.n_p; ++j) {
      const double wp = (j == 0 || j == grid.n_p - 1) ? 0.5 : 1.0;
      acc += wp * sqr(w.values(i, j));
    }
    column[static_cast<std::size_t>(i)] = acc * grid.dp();
  }

  const detail::RowCdf cdf_like(column, grid.q_min, grid.dq());
  const double total = cdf_like.total() / kTwoPi;
  const double f1 = cdf_like(cuts.x1) / kTwoPi;
  const double f2 = cdf_like(cuts.x2) / kTwoPi;
  const double f3 = cdf_like(cuts.x3) / kTwoPi;
  FourFunctionals out;
  out.pi[0] = f1;
  out.pi[1] = f2 - f1;
  out.pi[2] = f3 - f2;
  out.pi[3] = total - f3;
  for (double& v : out.pi) v = std::max(v, 0.0);
  return out;
}

/// Subadditivity analog for the Wigner strip functionals. Mixed states do not
/// sum to 1; the inequality is still evaluated and flagged, never rescaled.
inline InequalityReport wigner_subadditivity_check(const FourFunctionals& pi,
                                                   double tolerance = 1e-9) {
  for (double v : pi.pi) {
    require(v >= 0.0 && std::isfinite(v), "InvalidParameter", "functionals must be >= 0");
  }
  std::string note;
  if (std::abs(pi.sum() - 1.0) > 1e-3) {
    note = "NotNormalized: sum of functionals is " + std::to_string(pi.sum());
  }
  return detail::subadditivity_report(pi.pi, "wigner_subadditivity", tolerance, std::move(note));
}

}  // namespace qtomo
