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
#include <cmath>
#include <functional>
#include <vector>

#include "qtomo/common.hpp"
#include "qtomo/fourier.hpp"
#include "qtomo/states.hpp"
#include "qtomo/tomography.hpp"

namespace qtomo {

/// H = p^2/2 + U with U = 0 (free motion) or U = omega^2 q^2 / 2.
struct QuadraticHamiltonian {
  enum class Kind { free_motion, harmonic };
  Kind kind = Kind::free_motion;
  double omega = 0.0;

  static QuadraticHamiltonian free_motion() { return {}; }
  static QuadraticHamiltonian harmonic(double omega) {
    require(std::isfinite(omega) && omega > 0.0, "InvalidParameter",
            "harmonic frequency must be finite and positive");
    QuadraticHamiltonian h;
    h.kind = Kind::harmonic;
    h.omega = omega;
    return h;
  }

  double omega_sq() const { return kind == Kind::harmonic ? omega * omega : 0.0; }
};

/// Forward classical flow S(t): z(t) = S(t) z(0). Rotation for the harmonic
/// oscillator, shear for free motion; the Moyal and Liouville flows coincide
/// for quadratic Hamiltonians, so the same matrix drives both propagators.
inline Eigen::Matrix2d flow_matrix(const QuadraticHamiltonian& h, double t) {
  Eigen::Matrix2d s;
  if (h.kind == QuadraticHamiltonian::Kind::free_motion) {
    s << 1.0, t, 0.0, 1.0;
  } else {
    const double w = h.omega;
    s << std::cos(w * t), std::sin(w * t) / w, -w * std::sin(w * t), std::cos(w * t);
  }
  return s;
}

/// Tomogram frames along an exactly propagated trajectory.
struct TomogramTrajectory {
  std::vector<double> times;
  std::vector<OpticalTomogram> frames;
};

namespace detail {

/// Evolved frame values at phase theta: the Radon transform of the flowed
/// distribution equals the symplectic tomogram of the initial state along the
/// pulled-back direction m = S(t)^T (cos theta, sin theta).
template <typename DirectionEval>
OpticalTomogram evolved_frame(const QuadraticHamiltonian& h, double t,
                              const std::vector<double>& thetas, double x_min, double x_max,
                              int n_x, DirectionEval&& eval_direction) {
  OpticalTomogram frame;
  frame.thetas = thetas;
  frame.x_min = x_min;
  frame.x_max = x_max;
  frame.n_x = n_x;
  frame.values.resize(static_cast<int>(thetas.size()), n_x);
  const Eigen::Matrix2d st = flow_matrix(h, t).transpose();
  for (std::size_t it = 0; it < thetas.size(); ++it) {
    const Eigen::Vector2d n(std::cos(thetas[it]), std::sin(thetas[it]));
    const Eigen::Vector2d m = st * n;
    eval_direction(static_cast<int>(it), m(0), m(1), frame);
  }
  return frame;
}

}  // namespace detail

/// Propagate a quantum state under a quadratic Hamiltonian: every frame is
/// evaluated exactly in the Fock basis along the flowed quadrature direction.
inline TomogramTrajectory propagate_quadratic(const FockDensityMatrix& rho,
                                              const QuadraticHamiltonian& h,
                                              const std::vector<double>& times,
                                              const std::vector<double>& thetas,
                                              double x_min = -8.0, double x_max = 8.0,
                                              int n_x = 256) {
  detail::check_thetas_half_range(thetas);
  require(!times.empty(), "InvalidParameter", "need at least one time");
  FockTomogramEvaluator eval(rho);
  const std::vector<double> xs = linspace(x_min, x_max, n_x);

  TomogramTrajectory traj;
  traj.times = times;
  for (double t : times) {
    traj.frames.push_back(detail::evolved_frame(
        h, t, thetas, x_min, x_max, n_x,
        [&](int row, double mu, double nu, OpticalTomogram& frame) {
          const double r = std::hypot(mu, nu);
          const double phi = std::atan2(nu, mu);
          std::vector<double> scaled(xs.size());
          for (std::size_t j = 0; j < xs.size(); ++j) scaled[j] = xs[j] / r;
          const std::vector<double> row_vals = eval.row(phi, scaled);
          for (int j = 0; j < frame.n_x; ++j) {
            frame.values(row, j) = row_vals[static_cast<std::size_t>(j)] / r;
          }
        }));
  }
  return traj;
}

/// Propagate a classical Gaussian density; frames are the exact projected
/// normals of the flowed mean and covariance.
inline TomogramTrajectory propagate_quadratic(const ClassicalDensity& density,
                                              const QuadraticHamiltonian& h,
                                              const std::vector<double>& times,
                                              const std::vector<double>& thetas,
                                              double x_min = -8.0, double x_max = 8.0,
                                              int n_x = 256) {
  detail::check_thetas_half_range(thetas);
  require(!times.empty(), "InvalidParameter", "need at least one time");
  const std::vector<double> xs = linspace(x_min, x_max, n_x);

  TomogramTrajectory traj;
  traj.times = times;
  for (double t : times) {
    traj.frames.push_back(detail::evolved_frame(
        h, t, thetas, x_min, x_max, n_x,
        [&](int row, double mu, double nu, OpticalTomogram& frame) {
          const auto [mean, var] = gaussian_direction_projection(density, mu, nu);
          for (int j = 0; j < frame.n_x; ++j) {
            const double z = xs[static_cast<std::size_t>(j)] - mean;
            frame.values(row, j) = std::exp(-0.5 * z * z / var) / std::sqrt(kTwoPi * var);
          }
        }));
  }
  return traj;
}

namespace detail {

/// Field over the full theta circle [0, 2 pi): the stored half-range extended
/// by w(X, theta + pi) = w(-X, theta), which makes theta genuinely periodic.
inline Eigen::MatrixXd full_circle(const OpticalTomogram& opt) {
  const int nt = opt.n_theta();
  Eigen::MatrixXd f(2 * nt, opt.n_x);
  for (int i = 0; i < nt; ++i) {
    for (int j = 0; j < opt.n_x; ++j) {
      f(i, j) = opt.values(i, j);
      f(nt + i, j) = opt.values(i, opt.n_x - 1 - j);
    }
  }
  return f;
}

inline Eigen::MatrixXd d_theta(const Eigen::MatrixXd& f, double dtheta) {
  const int nt = static_cast<int>(f.rows());
  Eigen::MatrixXd out(nt, f.cols());
  for (int i = 0; i < nt; ++i) {
    const int up = (i + 1) % nt;
    const int dn = (i - 1 + nt) % nt;
    out.row(i) = (f.row(up) - f.row(dn)) / (2.0 * dtheta);
  }
  return out;
}

inline Eigen::MatrixXd d_x(const Eigen::MatrixXd& f, double dx) {
  const int nx = static_cast<int>(f.cols());
  Eigen::MatrixXd out(f.rows(), nx);
  out.col(0) = (-3.0 * f.col(0) + 4.0 * f.col(1) - f.col(2)) / (2.0 * dx);
  out.col(nx - 1) = (3.0 * f.col(nx - 1) - 4.0 * f.col(nx - 2) + f.col(nx - 3)) / (2.0 * dx);
  for (int j = 1; j + 1 < nx; ++j) out.col(j) = (f.col(j + 1) - f.col(j - 1)) / (2.0 * dx);
  return out;
}

inline Eigen::MatrixXd inv_dx(const Eigen::MatrixXd& f, double dx) {
  Eigen::MatrixXd out(f.rows(), f.cols());
  const int nx = static_cast<int>(f.cols());
  std::vector<double> row(static_cast<std::size_t>(nx));
  for (int i = 0; i < f.rows(); ++i) {
    for (int j = 0; j < nx; ++j) row[static_cast<std::size_t>(j)] = f(i, j);
    const std::vector<double> anti = spectral_antiderivative(row, dx);
    for (int j = 0; j < nx; ++j) out(i, j) = anti[static_cast<std::size_t>(j)];
  }
  return out;
}

inline Eigen::MatrixXd scale_rows(const Eigen::MatrixXd& f,
                                  const std::function<double(double)>& g,
                                  const std::vector<double>& thetas) {
  Eigen::MatrixXd out = f;
  for (int i = 0; i < f.rows(); ++i) out.row(i) *= g(thetas[static_cast<std::size_t>(i)]);
  return out;
}

inline Eigen::MatrixXd scale_cols(const Eigen::MatrixXd& f, const std::vector<double>& xs) {
  Eigen::MatrixXd out = f;
  for (int j = 0; j < f.cols(); ++j) out.col(j) *= xs[static_cast<std::size_t>(j)];
  return out;
}

struct ResidualGrids {
  std::vector<double> thetas_full;  // 2 n_theta angles over [0, 2 pi)
  std::vector<double> xs;
  double dtheta = 0.0, dx = 0.0, dt = 0.0;
};

inline ResidualGrids residual_grids(const TomogramTrajectory& traj) {
  require(traj.frames.size() >= 3, "GridTooCoarse",
          "time differencing needs at least 3 frames");
  require(traj.frames.size() == traj.times.size(), "InvalidParameter",
          "times and frames must align");
  const OpticalTomogram& first = traj.frames.front();
  const int nt = first.n_theta();
  require(nt >= 16, "GridTooCoarse", "need at least 16 phases for theta differencing");
  require(first.n_x >= 64, "GridTooCoarse", "need at least 64 X points");
  const double dtheta = kPi / nt;
  for (int i = 0; i < nt; ++i) {
    require(std::abs(first.thetas[static_cast<std::size_t>(i)] - i * dtheta) < 1e-9,
            "InvalidParameter", "residuals need uniform phases starting at 0");
  }
  ResidualGrids g;
  g.dtheta = dtheta;
  g.dx = first.dx();
  g.dt = traj.times[1] - traj.times[0];
  require(g.dt > 0.0 && g.dt <= 0.1, "GridTooCoarse", "time step must be in (0, 0.1]");
  for (std::size_t i = 1; i < traj.times.size(); ++i) {
    require(std::abs(traj.times[i] - traj.times[i - 1] - g.dt) < 1e-9, "InvalidParameter",
            "residuals need uniform time steps");
  }
  for (const OpticalTomogram& fr : traj.frames) {
    require(fr.n_theta() == nt && fr.n_x == first.n_x &&
                std::abs(fr.x_min - first.x_min) < 1e-12 &&
                std::abs(fr.x_max - first.x_max) < 1e-12,
            "InvalidParameter", "all frames must share their grids");
  }
  g.thetas_full.resize(static_cast<std::size_t>(2 * nt));
  for (int i = 0; i < 2 * nt; ++i) g.thetas_full[static_cast<std::size_t>(i)] = i * dtheta;
  g.xs = first.x_points();
  return g;
}

/// L2 norm over the interior region (X columns trimmed by `trim`).
inline double interior_norm(const Eigen::MatrixXd& f, int trim) {
  double acc = 0.0;
  for (int i = 0; i < f.rows(); ++i) {
    for (int j = trim; j < f.cols() - trim; ++j) acc += sqr(f(i, j));
  }
  return std::sqrt(acc);
}

/// Shared evaluator for the optical-tomogram kinetic equations. The free
/// streaming part is cos^2 t d_theta - (1/2) sin 2t (1 + X d_X); `potential`
/// supplies the U-dependent operator applied to each frame.
inline double optical_residual(const TomogramTrajectory& traj,
                               const std::function<Eigen::MatrixXd(const Eigen::MatrixXd&)>&
                                   potential) {
  const ResidualGrids g = residual_grids(traj);
  const auto cos2 = [](double t) { return sqr(std::cos(t)); };
  const auto sincos = [](double t) { return std::sin(t) * std::cos(t); };

  std::vector<Eigen::MatrixXd> fields;
  fields.reserve(traj.frames.size());
  for (const OpticalTomogram& fr : traj.frames) fields.push_back(full_circle(fr));

  const int trim = 2;
  double res2 = 0.0;
  double n_dt = 0.0, n_free = 0.0, n_pot = 0.0;
  for (std::size_t i = 1; i + 1 < fields.size(); ++i) {
    const Eigen::MatrixXd dt_field = (fields[i + 1] - fields[i - 1]) / (2.0 * g.dt);
    const Eigen::MatrixXd& f = fields[i];
    const Eigen::MatrixXd free_part =
        scale_rows(d_theta(f, g.dtheta), cos2, g.thetas_full) -
        scale_rows(f + scale_cols(d_x(f, g.dx), g.xs), sincos, g.thetas_full);
    const Eigen::MatrixXd pot_part = potential(f);
    const Eigen::MatrixXd resid = dt_field - free_part - pot_part;
    res2 += sqr(interior_norm(resid, trim));
    n_dt += sqr(interior_norm(dt_field, trim));
    n_free += sqr(interior_norm(free_part, trim));
    n_pot += sqr(interior_norm(pot_part, trim));
  }
  const double denom =
      std::max({std::sqrt(n_dt), std::sqrt(n_free), std::sqrt(n_pot), 1e-30});
  return std::sqrt(res2) / denom;
}

}  // namespace detail

/// Relative L2 residual of the quantum kinetic equation for the optical
/// tomogram on an exactly propagated trajectory. For quadratic U the operator
/// polynomial 2 Im U{...} expands to omega^2 (BC + CB) with
/// B = sin t d_theta [d_X]^{-1} + X cos t and C = (sin t / 2) d_X; the inverse
/// derivative acts on theta derivatives (zero X mass), realized spectrally.
inline double quantum_residual(const TomogramTrajectory& traj, const QuadraticHamiltonian& h) {
  const detail::ResidualGrids g = detail::residual_grids(traj);
  const double w2 = h.omega_sq();
  const auto sin_t = [](double t) { return std::sin(t); };
  const auto cos_t = [](double t) { return std::cos(t); };

  const auto b_op = [&](const Eigen::MatrixXd& field) -> Eigen::MatrixXd {
    return detail::scale_rows(detail::inv_dx(detail::d_theta(field, g.dtheta), g.dx), sin_t,
                              g.thetas_full) +
           detail::scale_rows(detail::scale_cols(field, g.xs), cos_t, g.thetas_full);
  };
  const auto c_op = [&](const Eigen::MatrixXd& field) -> Eigen::MatrixXd {
    return 0.5 * detail::scale_rows(detail::d_x(field, g.dx), sin_t, g.thetas_full);
  };

  return detail::optical_residual(traj, [&](const Eigen::MatrixXd& f) -> Eigen::MatrixXd {
    if (w2 == 0.0) return Eigen::MatrixXd::Zero(f.rows(), f.cols());
    return w2 * (b_op(c_op(f)) + c_op(b_op(f)));
  });
}

/// Relative L2 residual of the classical Liouville equation for the optical
/// tomogram: the potential term is dU/dq evaluated at the substituted operator
/// argument composed with sin t d_X (for harmonic U a single B sin t d_X).
inline double classical_residual_optical(const TomogramTrajectory& traj,
                                         const QuadraticHamiltonian& h) {
  const detail::ResidualGrids g = detail::residual_grids(traj);
  const double w2 = h.omega_sq();
  const auto sin_t = [](double t) { return std::sin(t); };
  const auto cos_t = [](double t) { return std::cos(t); };

  const auto b_op = [&](const Eigen::MatrixXd& field) -> Eigen::MatrixXd {
    return detail::scale_rows(detail::inv_dx(detail::d_theta(field, g.dtheta), g.dx), sin_t,
                              g.thetas_full) +
           detail::scale_rows(detail::scale_cols(field, g.xs), cos_t, g.thetas_full);
  };

  return detail::optical_residual(traj, [&](const Eigen::MatrixXd& f) -> Eigen::MatrixXd {
    if (w2 == 0.0) return Eigen::MatrixXd::Zero(f.rows(), f.cols());
    const Eigen::MatrixXd sdx = detail::scale_rows(detail::d_x(f, g.dx), sin_t, g.thetas_full);
    return w2 * b_op(sdx);
  });
}

/// Symplectic-tomogram slices M(X, mu, nu) on a rectangular (mu, nu) patch,
/// one block per time.
struct SymplecticFrameSet {
  std::vector<double> times;
  std::vector<double> mus, nus;
  double x_min = -8.0, x_max = 8.0;
  int n_x = 0;
  // frames[t] has rows indexed by (imu * nus.size() + inu)
  std::vector<Eigen::MatrixXd> frames;

  double dx() const { return (x_max - x_min) / (n_x - 1); }
  int row(int imu, int inu) const { return imu * static_cast<int>(nus.size()) + inu; }
};

/// Sample symplectic frames from an optical-tomogram trajectory through the
/// homogeneity view (interpolating route).
inline SymplecticFrameSet symplectic_frames(const TomogramTrajectory& traj,
                                            const std::vector<double>& mus,
                                            const std::vector<double>& nus) {
  SymplecticFrameSet set;
  set.times = traj.times;
  set.mus = mus;
  set.nus = nus;
  set.x_min = traj.frames.front().x_min;
  set.x_max = traj.frames.front().x_max;
  set.n_x = traj.frames.front().n_x;
  const std::vector<double> xs = linspace(set.x_min, set.x_max, set.n_x);
  for (const OpticalTomogram& fr : traj.frames) {
    Eigen::MatrixXd block(static_cast<int>(mus.size() * nus.size()), set.n_x);
    for (std::size_t a = 0; a < mus.size(); ++a) {
      for (std::size_t b = 0; b < nus.size(); ++b) {
        for (int j = 0; j < set.n_x; ++j) {
          block(set.row(static_cast<int>(a), static_cast<int>(b)), j) =
              symplectic_view(fr, xs[static_cast<std::size_t>(j)], mus[a], nus[b]);
        }
      }
    }
    set.frames.push_back(std::move(block));
  }
  return set;
}

/// Exact classical symplectic frames of a Gaussian density: the distribution
/// of mu q(t) + nu p(t) is the normal projected along S(t)^T (mu, nu). This is
/// the homogeneity evaluation rule applied to the analytic optical tomogram.
inline SymplecticFrameSet classical_symplectic_frames(const ClassicalDensity& density,
                                                      const QuadraticHamiltonian& h,
                                                      const std::vector<double>& times,
                                                      const std::vector<double>& mus,
                                                      const std::vector<double>& nus,
                                                      double x_min = -8.0, double x_max = 8.0,
                                                      int n_x = 256) {
  SymplecticFrameSet set;
  set.times = times;
  set.mus = mus;
  set.nus = nus;
  set.x_min = x_min;
  set.x_max = x_max;
  set.n_x = n_x;
  const std::vector<double> xs = linspace(x_min, x_max, n_x);
  for (double t : times) {
    const Eigen::Matrix2d st = flow_matrix(h, t).transpose();
    Eigen::MatrixXd block(static_cast<int>(mus.size() * nus.size()), n_x);
    for (std::size_t a = 0; a < mus.size(); ++a) {
      for (std::size_t b = 0; b < nus.size(); ++b) {
        const Eigen::Vector2d m = st * Eigen::Vector2d(mus[a], nus[b]);
        const auto [mean, var] = gaussian_direction_projection(density, m(0), m(1));
        for (int j = 0; j < n_x; ++j) {
          const double z = xs[static_cast<std::size_t>(j)] - mean;
          block(set.row(static_cast<int>(a), static_cast<int>(b)), j) =
              std::exp(-0.5 * z * z / var) / std::sqrt(kTwoPi * var);
        }
      }
    }
    set.frames.push_back(std::move(block));
  }
  return set;
}

/// Relative L2 residual of the classical Liouville equation for the
/// symplectic tomogram: dM/dt = mu dM/dnu + dU/dq{q -> -[d_X]^{-1} d_mu} nu d_X M.
inline double classical_residual_symplectic(const SymplecticFrameSet& set,
                                            const QuadraticHamiltonian& h) {
  require(set.frames.size() >= 3, "GridTooCoarse", "time differencing needs >= 3 frames");
  require(set.mus.size() >= 5 && set.nus.size() >= 5, "GridTooCoarse",
          "need at least 5 mu and nu samples");
  require(set.n_x >= 64, "GridTooCoarse", "need at least 64 X points");
  const double dt = set.times[1] - set.times[0];
  require(dt > 0.0 && dt <= 0.1, "GridTooCoarse", "time step must be in (0, 0.1]");
  for (std::size_t i = 1; i < set.times.size(); ++i) {
    require(std::abs(set.times[i] - set.times[i - 1] - dt) < 1e-9, "InvalidParameter",
            "uniform time steps required");
  }
  const int n_mu = static_cast<int>(set.mus.size());
  const int n_nu = static_cast<int>(set.nus.size());
  const double dmu = set.mus[1] - set.mus[0];
  const double dnu = set.nus[1] - set.nus[0];
  const double w2 = h.omega_sq();
  const double dx = set.dx();

  double res2 = 0.0, n_dt = 0.0, n_adv = 0.0, n_pot = 0.0;
  const int trim = 2;
  for (std::size_t i = 1; i + 1 < set.frames.size(); ++i) {
    const Eigen::MatrixXd& f = set.frames[i];
    const Eigen::MatrixXd dt_field = (set.frames[i + 1] - set.frames[i - 1]) / (2.0 * dt);

    Eigen::MatrixXd adv = Eigen::MatrixXd::Zero(f.rows(), f.cols());
    Eigen::MatrixXd pot = Eigen::MatrixXd::Zero(f.rows(), f.cols());
    if (w2 != 0.0) {
      // dU/dq{q -> -[d_X]^{-1} d_mu} nu d_X M = -w^2 [d_X]^{-1} d_mu (nu d_X M)
      Eigen::MatrixXd nudx = detail::d_x(f, dx);
      for (int a = 0; a < n_mu; ++a) {
        for (int b = 0; b < n_nu; ++b) {
          nudx.row(set.row(a, b)) *= set.nus[static_cast<std::size_t>(b)];
        }
      }
      Eigen::MatrixXd dmu_field = Eigen::MatrixXd::Zero(f.rows(), f.cols());
      for (int a = 1; a + 1 < n_mu; ++a) {
        for (int b = 0; b < n_nu; ++b) {
          dmu_field.row(set.row(a, b)) =
              (nudx.row(set.row(a + 1, b)) - nudx.row(set.row(a - 1, b))) / (2.0 * dmu);
        }
      }
      pot = -w2 * detail::inv_dx(dmu_field, dx);
    }
    for (int a = 0; a < n_mu; ++a) {
      for (int b = 1; b + 1 < n_nu; ++b) {
        adv.row(set.row(a, b)) = set.mus[static_cast<std::size_t>(a)] *
                                 (f.row(set.row(a, b + 1)) - f.row(set.row(a, b - 1))) /
                                 (2.0 * dnu);
      }
    }

    const Eigen::MatrixXd resid = dt_field - adv - pot;
    // interior in mu, nu and X
    for (int a = 1; a + 1 < n_mu; ++a) {
      for (int b = 1; b + 1 < n_nu; ++b) {
        const int r = set.row(a, b);
        for (int j = trim; j < set.n_x - trim; ++j) {
          res2 += sqr(resid(r, j));
          n_dt += sqr(dt_field(r, j));
          n_adv += sqr(adv(r, j));
          n_pot += sqr(pot(r, j));
        }
      }
    }
  }
  const double denom = std::max({std::sqrt(n_dt), std::sqrt(n_adv), std::sqrt(n_pot), 1e-30});
  return std::sqrt(res2) / denom;
}

}  // namespace qtomo
