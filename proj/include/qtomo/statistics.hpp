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

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "qtomo/common.hpp"
#include "qtomo/tomography.hpp"

namespace qtomo {

/// Moments of the quadrature distribution at one phase.
struct MomentReport {
  double theta = 0.0;
  std::vector<std::pair<int, double>> moments;  // (order, <X^order>)
  double mean = 0.0;
  double variance = 0.0;
};

/// Pass/fail record of one inequality. margin is oriented so that
/// satisfied <=> margin >= -tolerance regardless of the inequality sense.
struct InequalityReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool satisfied = false;
  double margin = 0.0;
  double tolerance = 0.0;
  std::string note;
};

inline InequalityReport make_report(std::string name, double lhs, double rhs, double margin,
                                    double tolerance, std::string note = {}) {
  InequalityReport rep;
  rep.name = std::move(name);
  rep.lhs = lhs;
  rep.rhs = rhs;
  rep.margin = margin;
  rep.tolerance = tolerance;
  rep.satisfied = margin >= -tolerance;
  rep.note = std::move(note);
  return rep;
}

/// <X^n> at phase theta by trapezoidal quadrature; theta = 0 gives <q^n>,
/// theta = pi/2 gives <p^n>. Orders above 8 are refused (quadrature guard).
inline double tomographic_moment(const OpticalTomogram& opt, double theta, int n,
                                 WarningSink warnings = nullptr) {
  require(n >= 0, "InvalidParameter", "moment order must be >= 0");
  require(n <= 8, "OrderTooHigh", "moment order capped at 8");
  const auto [row, flip] = theta_row(opt, theta);
  const std::vector<double> xs = opt.x_points();
  const double sign = (flip && n % 2 == 1) ? -1.0 : 1.0;
  double sum = 0.0;
  for (int j = 0; j < opt.n_x; ++j) {
    const double w = (j == 0 || j == opt.n_x - 1) ? 0.5 : 1.0;
    sum += w * opt.values(row, j) * std::pow(xs[static_cast<std::size_t>(j)], n);
  }
  const double edge = std::max(std::abs(opt.values(row, 0) * std::pow(xs.front(), n)),
                               std::abs(opt.values(row, opt.n_x - 1) * std::pow(xs.back(), n)));
  if (edge > 1e-10) warn(warnings, "moment integrand not negligible at the X boundary");
  return sign * sum * opt.dx();
}

inline MomentReport moment_report(const OpticalTomogram& opt, double theta, int max_order = 4) {
  MomentReport rep;
  rep.theta = theta;
  for (int n = 0; n <= max_order; ++n) {
    rep.moments.emplace_back(n, tomographic_moment(opt, theta, n));
  }
  rep.mean = rep.moments[1].second;
  rep.variance = rep.moments[2].second - sqr(rep.mean);
  require(rep.variance >= -1e-10, "InternalError", "negative variance from tomogram");
  return rep;
}

/// Heisenberg uncertainty in tomographic form:
/// Var(X | theta=0) Var(X | theta=pi/2) >= 1/4.
inline InequalityReport heisenberg_check(const OpticalTomogram& opt, double tolerance = 1e-6) {
  const MomentReport mq = moment_report(opt, 0.0, 2);
  const MomentReport mp = moment_report(opt, kPi / 2.0, 2);
  const double lhs = mq.variance * mp.variance;
  const double rhs = 0.25;
  return make_report("heisenberg", lhs, rhs, lhs - rhs, tolerance);
}

/// int w ln w dX with the 0 ln 0 = 0 convention.
inline double entropy_integral(const OpticalTomogram& opt, int row, bool flip) {
  double sum = 0.0;
  for (int j = 0; j < opt.n_x; ++j) {
    const double w = (j == 0 || j == opt.n_x - 1) ? 0.5 : 1.0;
    const int col = flip ? opt.n_x - 1 - j : j;
    sum += w * xlogx(opt.values(row, col));
  }
  return sum * opt.dx();
}

/// Entropic uncertainty: ln(pi e) + int w ln w (theta) + int w ln w (theta + pi/2) <= 0.
inline InequalityReport entropic_check(const OpticalTomogram& opt, double theta,
                                       double tolerance = 1e-6) {
  const auto [row_a, flip_a] = theta_row(opt, theta);
  const auto [row_b, flip_b] = theta_row(opt, theta + kPi / 2.0);
  require(opt.x_symmetric() || (!flip_a && !flip_b), "InvalidParameter",
          "folded entropy needs a symmetric X grid");
  const double lhs = std::log(kPi * std::exp(1.0)) + entropy_integral(opt, row_a, flip_a) +
                     entropy_integral(opt, row_b, flip_b);
  return make_report("entropic", lhs, 0.0, -lhs, tolerance);
}

}  // namespace qtomo
