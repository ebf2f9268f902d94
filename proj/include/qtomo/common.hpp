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
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qtomo {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Error with a machine-readable kind tag ("CutoffTooSmall", "NyquistViolation", ...).
/// The CLI maps kinds onto its JSON error stream; library callers can branch on them.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(kind + ": " + message), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

[[noreturn]] inline void fail(const char* kind, const std::string& message) {
  throw Error(kind, message);
}

inline void require(bool condition, const char* kind, const std::string& message) {
  if (!condition) fail(kind, message);
}

/// Optional sink for non-fatal diagnostics (clipped support, coarse grids, ...).
using WarningSink = std::vector<std::string>*;

inline void warn(WarningSink sink, std::string message) {
  if (sink != nullptr) sink->push_back(std::move(message));
}

/// n equally spaced points covering [lo, hi] inclusive. Computed as a convex
/// combination so that symmetric ranges give bitwise negation-symmetric
/// points: pts[n-1-i] == -pts[i] when lo == -hi.
inline std::vector<double> linspace(double lo, double hi, int n) {
  require(n >= 2 && hi > lo, "InvalidParameter", "linspace needs n >= 2 and hi > lo");
  std::vector<double> pts(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    pts[static_cast<std::size_t>(i)] =
        (lo * static_cast<double>(n - 1 - i) + hi * static_cast<double>(i)) /
        static_cast<double>(n - 1);
  }
  return pts;
}

/// Trapezoidal rule on a uniform grid.
inline double trapezoid(const double* f, int n, double dx) {
  if (n < 2) return 0.0;
  double sum = 0.5 * (f[0] + f[n - 1]);
  for (int i = 1; i + 1 < n; ++i) sum += f[i];
  return sum * dx;
}

inline double trapezoid(const std::vector<double>& f, double dx) {
  return trapezoid(f.data(), static_cast<int>(f.size()), dx);
}

/// x ln x continued by its limit 0 at x = 0; values below 1e-300 are treated
/// as zero so log underflow cannot poison entropy sums.
inline double xlogx(double x) { return x > 1e-300 ? x * std::log(x) : 0.0; }

inline double sqr(double x) { return x * x; }

inline bool nearly_equal(double a, double b, double tol) { return std::abs(a - b) <= tol; }

}  // namespace qtomo
