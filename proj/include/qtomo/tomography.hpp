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

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "qtomo/common.hpp"
#include "qtomo/displacement.hpp"
#include "qtomo/states.hpp"
#include "qtomo/wigner.hpp"

namespace qtomo {

/// Optical tomogram w(X, theta) on a uniform X grid and phases in [0, pi).
/// Angles outside the stored half-range follow w(X, theta + pi) = w(-X, theta).
struct OpticalTomogram {
  std::vector<double> thetas;
  double x_min = -8.0, x_max = 8.0;
  int n_x = 0;
  Eigen::MatrixXd values;  // thetas.size() x n_x

  double clipped_mass = 0.0;   // mass removed by negativity clipping
  double min_raw_value = 0.0;  // most negative value seen before clipping

  int n_theta() const { return static_cast<int>(thetas.size()); }
  double dx() const { return (x_max - x_min) / (n_x - 1); }
  std::vector<double> x_points() const { return linspace(x_min, x_max, n_x); }
  bool x_symmetric() const { return std::abs(x_min + x_max) < 1e-12 * (x_max - x_min); }

  /// Trapezoidal mass of one phase row.
  double mass(int itheta) const {
    double sum = 0.5 * (values(itheta, 0) + values(itheta, n_x - 1));
    for (int j = 1; j + 1 < n_x; ++j) sum += values(itheta, j);
    return sum * dx();
  }
};

/// n phases uniform on [0, pi), starting at 0.
inline std::vector<double> default_thetas(int n = 64) {
  require(n >= 1, "InvalidParameter", "need at least one phase");
  std::vector<double> t(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) t[static_cast<std::size_t>(j)] = kPi * j / n;
  return t;
}

namespace detail {

/// Reduce theta into [0, pi); flip reports whether X must be negated.
inline std::pair<double, bool> fold_theta(double theta) {
  double k = std::floor(theta / kPi);
  double t = theta - k * kPi;
  if (t >= kPi) {  // guard against rounding at the seam
    t -= kPi;
    k += 1.0;
  }
  const bool flip = (static_cast<long long>(std::llround(k)) % 2) != 0;
  return {t, flip};
}

inline void check_thetas_half_range(const std::vector<double>& thetas) {
  for (double t : thetas) {
    require(t >= 0.0 && t < kPi, "InvalidParameter", "phases must lie in [0, pi)");
  }
}

/// Linear interpolation along one tomogram row; zero outside the X range.
inline double row_interp(const OpticalTomogram& opt, int row, double x, bool flip) {
  if (flip) x = -x;
  const double f = (x - opt.x_min) / opt.dx();
  if (f < 0.0 || f > opt.n_x - 1) return 0.0;
  int j = static_cast<int>(f);
  if (j == opt.n_x - 1) --j;
  const double t = f - j;
  return (1 - t) * opt.values(row, j) + t * opt.values(row, j + 1);
}

}  // namespace detail

/// Index of the stored phase matching theta (mod pi, fold-aware). flip is true
/// when the fold negates X. Throws MissingPhase when no stored phase matches.
inline std::pair<int, bool> theta_row(const OpticalTomogram& opt, double theta,
                                      double tol = 1e-6) {
  const auto [t, flip] = detail::fold_theta(theta);
  for (int i = 0; i < opt.n_theta(); ++i) {
    if (std::abs(opt.thetas[static_cast<std::size_t>(i)] - t) <= tol) return {i, flip};
    // the fold seam: theta ~ pi matches row 0 with an extra flip
    if (std::abs(t - kPi) <= tol && std::abs(opt.thetas[static_cast<std::size_t>(i)]) <= tol)
      return {i, !flip};
  }
  fail("MissingPhase", "no stored phase near theta = " + std::to_string(theta));
}

/// w(X, theta) for arbitrary theta and X, bilinear in (theta, X) with the
/// fold rule across the pi seam. Requires uniformly spaced stored phases.
inline double tomogram_value(const OpticalTomogram& opt, double x, double theta) {
  const auto [t, flip] = detail::fold_theta(theta);
  const int nt = opt.n_theta();
  if (nt == 1) return detail::row_interp(opt, 0, x, flip);
  const double dtheta = kPi / nt;
  const double f = t / dtheta;
  int i = static_cast<int>(f);
  if (i >= nt) i = nt - 1;
  const double u = f - i;
  const double lo = detail::row_interp(opt, i, x, flip);
  const double hi = (i + 1 < nt) ? detail::row_interp(opt, i + 1, x, flip)
                                 : detail::row_interp(opt, 0, x, !flip);
  return (1 - u) * lo + u * hi;
}

namespace detail {

/// Clip tiny negative interpolation residue to zero, recording what was lost.
inline void clip_negative(OpticalTomogram& opt) {
  double clipped = 0.0;
  double min_raw = 0.0;
  for (int i = 0; i < opt.n_theta(); ++i) {
    for (int j = 0; j < opt.n_x; ++j) {
      const double v = opt.values(i, j);
      if (v < 0.0) {
        min_raw = std::min(min_raw, v);
        clipped += -v * opt.dx();
        opt.values(i, j) = 0.0;
      }
    }
  }
  opt.clipped_mass = clipped;
  opt.min_raw_value = min_raw;
}

}  // namespace detail

/// Radon transform of a sampled Wigner function:
/// w(X, theta) = (1/2pi) int W(X cos t - s sin t, X sin t + s cos t) ds,
/// by trapezoidal quadrature along the line with bilinear interpolation of W.
inline OpticalTomogram optical_tomogram(const WignerGrid& w, const std::vector<double>& thetas,
                                        double x_min, double x_max, int n_x,
                                        WarningSink warnings = nullptr) {
  detail::check_thetas_half_range(thetas);
  require(n_x >= 16, "InvalidParameter", "X grid needs at least 16 points");
  require(x_min < x_max, "InvalidParameter", "X bounds must be ordered");

  OpticalTomogram opt;
  opt.thetas = thetas;
  opt.x_min = x_min;
  opt.x_max = x_max;
  opt.n_x = n_x;
  opt.values.resize(static_cast<int>(thetas.size()), n_x);

  const GridSpec& grid = w.grid;
  const double peak = w.values.cwiseAbs().maxCoeff();
  const std::vector<double> xs = opt.x_points();
  bool clipped_support = false;
  double worst_edge = 0.0;
  std::vector<double> breaks;
  breaks.reserve(static_cast<std::size_t>(grid.n_q + grid.n_p + 2));

  for (int it = 0; it < opt.n_theta(); ++it) {
    const double c = std::cos(thetas[static_cast<std::size_t>(it)]);
    const double sn = std::sin(thetas[static_cast<std::size_t>(it)]);
    for (int jx = 0; jx < n_x; ++jx) {
      const double x = xs[static_cast<std::size_t>(jx)];
      // clip the line (X c - s sn, X sn + s c) against the grid box
      double t0 = -1e300, t1 = 1e300;
      const double oq = x * c, op = x * sn;
      const double dq_dir = -sn, dp_dir = c;
      bool empty = false;
      for (int axis = 0; axis < 2; ++axis) {
        const double o = axis == 0 ? oq : op;
        const double d = axis == 0 ? dq_dir : dp_dir;
        const double lo = axis == 0 ? grid.q_min : grid.p_min;
        const double hi = axis == 0 ? grid.q_max : grid.p_max;
        if (std::abs(d) < 1e-15) {
          if (o < lo || o > hi) empty = true;
        } else {
          double a = (lo - o) / d, b = (hi - o) / d;
          if (a > b) std::swap(a, b);
          t0 = std::max(t0, a);
          t1 = std::min(t1, b);
        }
      }
      if (empty || t1 <= t0) {
        opt.values(it, jx) = 0.0;
        continue;
      }
      // Split the line at every grid-cell boundary; within one cell the
      // bilinear interpolant restricted to the line is quadratic in s, so
      // per-segment Simpson integrates it exactly.
      breaks.clear();
      breaks.push_back(t0);
      breaks.push_back(t1);
      const auto add_crossings = [&](double origin, double dir, double lo, double dd) {
        if (std::abs(dir) < 1e-12) return;
        double u0 = (origin + t0 * dir - lo) / dd;
        double u1 = (origin + t1 * dir - lo) / dd;
        if (u0 > u1) std::swap(u0, u1);
        for (int k = static_cast<int>(std::ceil(u0)); k <= static_cast<int>(std::floor(u1));
             ++k) {
          const double s = (lo + k * dd - origin) / dir;
          if (s > t0 + 1e-12 && s < t1 - 1e-12) breaks.push_back(s);
        }
      };
      add_crossings(oq, dq_dir, grid.q_min, grid.dq());
      add_crossings(op, dp_dir, grid.p_min, grid.dp());
      std::sort(breaks.begin(), breaks.end());

      double sum = 0.0;
      double left = w.interpolate(oq + t0 * dq_dir, op + t0 * dp_dir);
      double s_left = t0;
      for (std::size_t k = 1; k < breaks.size(); ++k) {
        const double s_right = breaks[k];
        if (s_right - s_left < 1e-13) continue;
        const double mid = 0.5 * (s_left + s_right);
        const double fm = w.interpolate(oq + mid * dq_dir, op + mid * dp_dir);
        const double fr = w.interpolate(oq + s_right * dq_dir, op + s_right * dp_dir);
        sum += (s_right - s_left) / 6.0 * (left + 4.0 * fm + fr);
        left = fr;
        s_left = s_right;
      }
      opt.values(it, jx) = sum / kTwoPi;

      const double edge = std::max(std::abs(w.interpolate(oq + t0 * dq_dir, op + t0 * dp_dir)),
                                   std::abs(w.interpolate(oq + t1 * dq_dir, op + t1 * dp_dir)));
      worst_edge = std::max(worst_edge, edge);
      if (edge > 1e-8) clipped_support = true;
    }
  }
  // Mass visibly leaving the grid is an error; trace amounts are reported.
  if (worst_edge > 1e-3 * peak) {
    fail("SupportClipped", "integration lines exit the grid at |W| = " +
                               std::to_string(worst_edge));
  }
  if (clipped_support) {
    warn(warnings, "integration lines exit the grid with |W| above 1e-8");
  }
  detail::clip_negative(opt);
  return opt;
}

/// Exact tomogram of a Fock-basis state, via the quadrature eigenfunctions:
/// w(X, theta) = sum_{mn} rho_{mn} psi_m(X) psi_n(X) e^{i(n-m) theta}.
/// Valid for any real theta (the fold identity holds automatically), so the
/// evolution and homodyne modules use it where interpolation noise would hurt.
class FockTomogramEvaluator {
 public:
  explicit FockTomogramEvaluator(const FockDensityMatrix& rho) : rho_(rho.elements) {
    require(rho_.rows() == rho_.cols() && rho_.rows() >= 1, "InvalidParameter",
            "density matrix must be square");
  }

  int dim() const { return static_cast<int>(rho_.rows()); }

  /// Oscillator eigenfunctions psi_0..psi_{dim-1} at x (hbar = 1, <x^2>_0 = 1/2).
  static void hermite_column(int dim, double x, Eigen::VectorXd& psi) {
    psi.resize(dim);
    psi(0) = std::pow(kPi, -0.25) * std::exp(-0.5 * x * x);
    if (dim > 1) psi(1) = std::sqrt(2.0) * x * psi(0);
    for (int n = 1; n + 1 < dim; ++n) {
      psi(n + 1) = std::sqrt(2.0 / (n + 1.0)) * x * psi(n) -
                   std::sqrt(n / (n + 1.0)) * psi(n - 1);
    }
  }

  /// One row w(xs, theta).
  std::vector<double> row(double theta, const std::vector<double>& xs) const {
    const int d = dim();
    Eigen::VectorXcd phase(d);
    for (int n = 0; n < d; ++n) phase(n) = std::exp(Complex(0.0, n * theta));
    Eigen::MatrixXcd a(d, d);
    for (int m = 0; m < d; ++m) {
      for (int n = 0; n < d; ++n) {
        a(m, n) = rho_(m, n) * std::conj(phase(m)) * phase(n);
      }
    }
    std::vector<double> out(xs.size());
    Eigen::VectorXd psi;
    for (std::size_t j = 0; j < xs.size(); ++j) {
      hermite_column(d, xs[j], psi);
      const Complex v = psi.cast<Complex>().dot(a * psi.cast<Complex>());
      out[j] = v.real();
    }
    return out;
  }

  double value(double x, double theta) const {
    const std::vector<double> one = row(theta, {x});
    return one[0];
  }

 private:
  Eigen::MatrixXcd rho_;
};

/// Tomogram of a density matrix on a fixed grid, by the exact Fock-basis route.
inline OpticalTomogram tomogram_from_rho(const FockDensityMatrix& rho,
                                         const std::vector<double>& thetas, double x_min,
                                         double x_max, int n_x) {
  detail::check_thetas_half_range(thetas);
  OpticalTomogram opt;
  opt.thetas = thetas;
  opt.x_min = x_min;
  opt.x_max = x_max;
  opt.n_x = n_x;
  opt.values.resize(static_cast<int>(thetas.size()), n_x);
  FockTomogramEvaluator eval(rho);
  const std::vector<double> xs = opt.x_points();
  for (int it = 0; it < opt.n_theta(); ++it) {
    const std::vector<double> row = eval.row(thetas[static_cast<std::size_t>(it)], xs);
    for (int j = 0; j < n_x; ++j) opt.values(it, j) = row[static_cast<std::size_t>(j)];
  }
  detail::clip_negative(opt);
  return opt;
}

/// Mean and variance of the classical tomogram of a Gaussian density along
/// direction (mu, nu): X = mu q + nu p.
inline std::pair<double, double> gaussian_direction_projection(const ClassicalDensity& f,
                                                               double mu, double nu) {
  Eigen::Vector2d n(mu, nu);
  return {n.dot(f.mean), n.dot(f.cov * n)};
}

/// Classical optical tomogram of a Gaussian density, in closed form: the
/// 1-D normal with mean m_q cos t + m_p sin t and variance n^T Sigma n.
inline OpticalTomogram classical_tomogram(const ClassicalDensity& f,
                                          const std::vector<double>& thetas, double x_min,
                                          double x_max, int n_x) {
  detail::check_thetas_half_range(thetas);
  OpticalTomogram opt;
  opt.thetas = thetas;
  opt.x_min = x_min;
  opt.x_max = x_max;
  opt.n_x = n_x;
  opt.values.resize(static_cast<int>(thetas.size()), n_x);
  const std::vector<double> xs = opt.x_points();
  for (int it = 0; it < opt.n_theta(); ++it) {
    const double t = thetas[static_cast<std::size_t>(it)];
    const auto [mean, var] = gaussian_direction_projection(f, std::cos(t), std::sin(t));
    for (int j = 0; j < n_x; ++j) {
      const double z = xs[static_cast<std::size_t>(j)] - mean;
      opt.values(it, j) = std::exp(-0.5 * z * z / var) / std::sqrt(kTwoPi * var);
    }
  }
  return opt;
}

/// Symplectic tomogram value from the optical tomogram through homogeneity:
/// w(X, mu, nu) = (mu^2+nu^2)^{-1/2} w(X / sqrt(mu^2+nu^2), atan2(nu, mu)).
inline double symplectic_view(const OpticalTomogram& opt, double x, double mu, double nu) {
  const double r = std::hypot(mu, nu);
  require(r > 0.0, "DegenerateDirection", "symplectic direction (mu, nu) must be nonzero");
  const double phi = std::atan2(nu, mu);
  return tomogram_value(opt, x / r, phi) / r;
}

/// Lazy symplectic view over a stored optical tomogram.
struct SymplecticTomogram {
  OpticalTomogram base;

  double operator()(double x, double mu, double nu) const {
    return symplectic_view(base, x, mu, nu);
  }
};

namespace detail {

/// Real radial part of the displacement elements at |beta| = r/sqrt(2):
/// R(m,n) = sqrt(min!/max!) (r/sqrt2)^{|m-n|} e^{-r^2/4} L_min^{|m-n|}(r^2/2).
inline void radial_displacement_table(int dim, double r, Eigen::MatrixXd& out) {
  out.resize(dim, dim);
  const double x = 0.5 * r * r;
  const double amp = r / std::sqrt(2.0);
  double pref0 = std::exp(-0.5 * x);
  for (int k = 0; k < dim; ++k) {
    if (k > 0) pref0 *= amp / std::sqrt(static_cast<double>(k));
    double pref = pref0;
    double lag_prev2 = 0.0, lag_prev = 1.0;
    for (int j = 0; j + k < dim; ++j) {
      double lag;
      if (j == 0) {
        lag = 1.0;
      } else if (j == 1) {
        lag = 1.0 + k - x;
      } else {
        lag = ((2.0 * j - 1.0 + k - x) * lag_prev - (j - 1.0 + k) * lag_prev2) / j;
      }
      if (j >= 1) {
        lag_prev2 = lag_prev;
        lag_prev = lag;
      }
      out(j + k, j) = pref * lag;
      out(j, j + k) = pref * lag;
      pref *= std::sqrt((j + 1.0) / (j + 1.0 + k));
    }
  }
}

}  // namespace detail

/// Density operator from the symplectic tomogram,
/// rho = (2 pi)^{-1} int w(X, mu, nu) exp[i(X - mu q - nu p)] dX dmu dnu,
/// computed in polar coordinates (mu, nu) = r(cos phi, sin phi). Homogeneity
/// reduces the integrand to the optical tomogram; the radial integral is
/// truncated where the Gaussian-damped displacement elements fall below 1e-12.
inline FockDensityMatrix rho_from_symplectic(const SymplecticTomogram& sym, int dim,
                                             WarningSink warnings = nullptr) {
  const OpticalTomogram& opt = sym.base;
  require(dim >= 1, "InvalidParameter", "dim must be positive");
  require(opt.n_theta() >= 2 && opt.n_x >= 16, "InvalidParameter", "tomogram too small");
  require(opt.x_symmetric(), "InvalidParameter",
          "symplectic inversion needs a symmetric X grid");
  const double dtheta = kPi / opt.n_theta();
  for (int i = 0; i < opt.n_theta(); ++i) {
    require(std::abs(opt.thetas[static_cast<std::size_t>(i)] - i * dtheta) < 1e-9,
            "InvalidParameter", "symplectic inversion needs uniform phases from 0");
  }
  const double dx = opt.dx();
  require(dx * std::sqrt(2.0 * dim) < kPi, "NyquistViolation",
          "X spacing too coarse for dim " + std::to_string(dim));

  // adaptive radial cutoff from the element envelope
  double r_max = 4.0;
  {
    Eigen::MatrixXd radial;
    while (r_max < 60.0) {
      detail::radial_displacement_table(dim, r_max, radial);
      if (radial.cwiseAbs().maxCoeff() < 1e-12) break;
      r_max += 1.0;
    }
    if (r_max >= 60.0) {
      warn(warnings, "radial damping bound not met by r = 60; truncating");
    } else {
      r_max += 1.0;
    }
  }
  const int n_intervals = 2 * static_cast<int>(std::ceil(r_max / 0.04));
  const int n_r = n_intervals + 1;
  const double dr = r_max / n_intervals;

  // folded angle rows covering [0, 2 pi)
  const int n_phi = 2 * opt.n_theta();
  const std::vector<double> xs = opt.x_points();

  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(dim, dim);
  Eigen::MatrixXd radial;
  Eigen::VectorXcd fourier(n_phi);
  Eigen::VectorXcd g(2 * dim - 1);  // G_k, k = -(dim-1)..(dim-1)
  std::vector<Complex> wave(static_cast<std::size_t>(opt.n_x));

  // e^{i k phi_a} for all k and folded angles; independent of r
  Eigen::MatrixXcd phase_k(2 * dim - 1, n_phi);
  for (int a = 0; a < n_phi; ++a) {
    const Complex unit = std::exp(Complex(0.0, kTwoPi * a / n_phi));
    phase_k(dim - 1, a) = 1.0;
    for (int k = 1; k <= dim - 1; ++k) {
      phase_k(dim - 1 + k, a) = phase_k(dim - 2 + k, a) * unit;
      phase_k(dim - 1 - k, a) = std::conj(phase_k(dim - 1 + k, a));
    }
  }

  for (int ir = 1; ir < n_r; ++ir) {  // integrand vanishes at r = 0
    const double r = ir * dr;
    double simpson = (ir == n_r - 1) ? 1.0 : (ir % 2 == 1 ? 4.0 : 2.0);
    simpson *= dr / 3.0;

    for (int j = 0; j < opt.n_x; ++j) {
      const double trap = (j == 0 || j == opt.n_x - 1) ? 0.5 : 1.0;
      wave[static_cast<std::size_t>(j)] =
          trap * dx * std::exp(Complex(0.0, r * xs[static_cast<std::size_t>(j)]));
    }
    // characteristic function F(r, phi_a) of each folded row
    for (int a = 0; a < n_phi; ++a) {
      Complex f(0.0, 0.0);
      if (a < opt.n_theta()) {
        for (int j = 0; j < opt.n_x; ++j) f += opt.values(a, j) * wave[static_cast<std::size_t>(j)];
      } else {
        const int rowi = a - opt.n_theta();
        for (int j = 0; j < opt.n_x; ++j)
          f += opt.values(rowi, opt.n_x - 1 - j) * wave[static_cast<std::size_t>(j)];
      }
      fourier(a) = f;
    }
    // angular Fourier coefficients G_k(r)
    g.noalias() = phase_k * fourier / static_cast<double>(n_phi);

    detail::radial_displacement_table(dim, r, radial);
    for (int m = 0; m < dim; ++m) {
      for (int n = 0; n < dim; ++n) {
        const int k = m - n;
        Complex ik(1.0, 0.0);  // (-i)^{|k|}
        switch (std::abs(k) % 4) {
          case 0: ik = Complex(1.0, 0.0); break;
          case 1: ik = Complex(0.0, -1.0); break;
          case 2: ik = Complex(-1.0, 0.0); break;
          case 3: ik = Complex(0.0, 1.0); break;
        }
        acc(m, n) += simpson * r * radial(m, n) * ik * g(k + dim - 1);
      }
    }
  }

  FockDensityMatrix rho;
  rho.elements = 0.5 * (acc + acc.adjoint());
  const double tr = rho.trace();
  require(std::abs(tr) > 1e-8, "NormalizationError", "recovered trace is degenerate");
  rho.elements /= tr;
  return rho;
}

}  // namespace qtomo
