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

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "qtomo/common.hpp"
#include "qtomo/inequalities.hpp"
#include "qtomo/statistics.hpp"
#include "qtomo/tomography.hpp"

namespace qtomo {

/// One simulated homodyne record: local-oscillator phase and quadrature value.
struct QuadratureSample {
  double theta = 0.0;
  double x = 0.0;
};

/// Reproducible sampled dataset. Regenerating with the same seed reproduces
/// the records bit for bit on any platform (raw mt19937_64 output only).
struct QuadratureDataset {
  std::vector<QuadratureSample> records;
  std::uint64_t seed = 0;
  std::string source;  // description of the generating state, or "external"
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Uniform doubles in [0,1) from the top 53 bits of mt19937_64; avoids
/// std::uniform_real_distribution, whose output is implementation-defined.
class UniformBits {
 public:
  explicit UniformBits(std::uint64_t seed) : gen_(seed) {}
  double next() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 gen_;
};

}  // namespace detail

/// Draw n_per_theta samples of X from w(X, theta) for each requested phase by
/// inverse-CDF sampling of the piecewise-linear CDF on the X grid. Each phase
/// uses a generator seeded from (seed, phase index), so per-phase blocks are
/// independent of evaluation order.
inline QuadratureDataset sample_quadratures(const OpticalTomogram& opt,
                                            const std::vector<double>& thetas, int n_per_theta,
                                            std::uint64_t seed) {
  require(n_per_theta >= 1, "InvalidParameter", "need at least one sample per phase");
  QuadratureDataset data;
  data.seed = seed;
  data.records.reserve(thetas.size() * static_cast<std::size_t>(n_per_theta));
  const std::vector<double> xs = opt.x_points();
  const double dx = opt.dx();

  for (std::size_t k = 0; k < thetas.size(); ++k) {
    const auto [row, flip] = theta_row(opt, thetas[k]);
    // cumulative trapezoidal masses at the nodes, normalized to 1
    std::vector<double> cum(static_cast<std::size_t>(opt.n_x), 0.0);
    for (int j = 1; j < opt.n_x; ++j) {
      cum[static_cast<std::size_t>(j)] =
          cum[static_cast<std::size_t>(j - 1)] +
          0.5 * (opt.values(row, j - 1) + opt.values(row, j)) * dx;
    }
    const double total = cum.back();
    require(total > 0.0, "InvalidParameter", "cannot sample from an empty tomogram row");
    for (double& c : cum) c /= total;

    detail::UniformBits rng(detail::splitmix64(seed ^ detail::splitmix64(k + 1)));
    for (int i = 0; i < n_per_theta; ++i) {
      const double u = rng.next();
      const auto it = std::upper_bound(cum.begin(), cum.end(), u);
      int j = static_cast<int>(it - cum.begin());
      j = std::clamp(j, 1, opt.n_x - 1);
      const double c0 = cum[static_cast<std::size_t>(j - 1)];
      const double c1 = cum[static_cast<std::size_t>(j)];
      const double frac = (c1 > c0) ? (u - c0) / (c1 - c0) : 0.5;
      double x = xs[static_cast<std::size_t>(j - 1)] + frac * dx;
      if (flip) x = -x;
      data.records.push_back({thetas[k], x});
    }
  }
  return data;
}

/// Histogram density estimate with node-centered bins aligned to the X grid,
/// plus per-cell multinomial standard errors.
struct EstimatedTomogram {
  OpticalTomogram tomogram;
  Eigen::MatrixXd std_errors;      // same shape as tomogram.values
  Eigen::MatrixXd counts;          // raw per-bin counts
  std::vector<long> n_samples;     // per phase
};

inline EstimatedTomogram estimate_tomogram(const QuadratureDataset& data, double x_min,
                                           double x_max, int n_x) {
  require(n_x >= 16, "InvalidParameter", "X grid needs at least 16 points");
  require(x_min < x_max, "InvalidParameter", "X bounds must be ordered");

  // collect unique phases in first-appearance order, then sort
  std::vector<double> thetas;
  for (const QuadratureSample& rec : data.records) {
    bool found = false;
    for (double t : thetas) {
      if (std::abs(t - rec.theta) < 1e-12) {
        found = true;
        break;
      }
    }
    if (!found) thetas.push_back(rec.theta);
  }
  std::sort(thetas.begin(), thetas.end());
  require(!thetas.empty(), "InsufficientSamples", "dataset is empty");
  for (double t : thetas) {
    require(t >= 0.0 && t < kPi, "InvalidParameter", "dataset phases must lie in [0, pi)");
  }

  EstimatedTomogram est;
  est.tomogram.thetas = thetas;
  est.tomogram.x_min = x_min;
  est.tomogram.x_max = x_max;
  est.tomogram.n_x = n_x;
  const int nt = static_cast<int>(thetas.size());
  est.tomogram.values = Eigen::MatrixXd::Zero(nt, n_x);
  est.counts = Eigen::MatrixXd::Zero(nt, n_x);
  est.std_errors = Eigen::MatrixXd::Zero(nt, n_x);
  est.n_samples.assign(static_cast<std::size_t>(nt), 0);

  const double dx = est.tomogram.dx();
  for (const QuadratureSample& rec : data.records) {
    int row = -1;
    for (int i = 0; i < nt; ++i) {
      if (std::abs(thetas[static_cast<std::size_t>(i)] - rec.theta) < 1e-12) {
        row = i;
        break;
      }
    }
    int j = static_cast<int>(std::lround((rec.x - x_min) / dx));
    j = std::clamp(j, 0, n_x - 1);
    est.counts(row, j) += 1.0;
    ++est.n_samples[static_cast<std::size_t>(row)];
  }
  for (int i = 0; i < nt; ++i) {
    const long n = est.n_samples[static_cast<std::size_t>(i)];
    require(n >= 100, "InsufficientSamples",
            "need at least 100 samples per phase, got " + std::to_string(n));
    for (int j = 0; j < n_x; ++j) {
      const double p = est.counts(i, j) / static_cast<double>(n);
      est.tomogram.values(i, j) = p / dx;
      est.std_errors(i, j) = std::sqrt(p * (1.0 - p) / static_cast<double>(n)) / dx;
    }
  }
  return est;
}

namespace detail {

/// Cell masses of the empirical measure over the four cut intervals, fractions
/// of a bin split linearly. Returns the four p and their per-sample count n.
inline std::array<double, 4> empirical_four_probs(const EstimatedTomogram& est, int row,
                                                  bool flip, const CutPoints& cuts) {
  const int n_x = est.tomogram.n_x;
  const double dx = est.tomogram.dx();
  const double n = static_cast<double>(est.n_samples[static_cast<std::size_t>(row)]);
  const double c1 = flip ? -cuts.x3 : cuts.x1;
  const double c2 = flip ? -cuts.x2 : cuts.x2;
  const double c3 = flip ? -cuts.x1 : cuts.x3;
  const auto mass_below = [&](double x) {
    // bins are [x_j - dx/2, x_j + dx/2) around the nodes
    const double f = (x - (est.tomogram.x_min - 0.5 * dx)) / dx;
    if (f <= 0.0) return 0.0;
    double acc = 0.0;
    const int whole = std::min(static_cast<int>(f), n_x);
    for (int j = 0; j < whole; ++j) acc += est.counts(row, j);
    if (whole < n_x) acc += (f - whole) * est.counts(row, whole);
    return acc / n;
  };
  const double f1 = mass_below(c1), f2 = mass_below(c2), f3 = mass_below(c3);
  std::array<double, 4> p{f1, f2 - f1, f3 - f2, 1.0 - f3};
  if (flip) {
    std::swap(p[0], p[3]);
    std::swap(p[1], p[2]);
  }
  for (double& v : p) v = std::max(v, 0.0);
  return p;
}

/// Delta-method standard error of (rhs - lhs) of the subadditivity report
/// under multinomial sampling of the four cells.
inline double subadditivity_margin_se(const std::array<double, 4>& p, double n) {
  std::array<double, 4> grad{};
  for (int i = 0; i < 4; ++i) {
    if (p[static_cast<std::size_t>(i)] <= 0.0) {
      grad[static_cast<std::size_t>(i)] = 0.0;  // empty cells carry no variance
      continue;
    }
    const double d_lhs = -(std::log(p[static_cast<std::size_t>(i)]) + 1.0);
    const int pair_mate = i ^ 1;  // (p1+p2), (p3+p4) marginal
    const int cross_mate = i ^ 2;  // (p1+p3), (p2+p4) marginal
    const double pair_sum = p[static_cast<std::size_t>(i)] + p[static_cast<std::size_t>(pair_mate)];
    const double cross_sum = p[static_cast<std::size_t>(i)] + p[static_cast<std::size_t>(cross_mate)];
    const double d_rhs = -(std::log(pair_sum) + 1.0) - (std::log(cross_sum) + 1.0);
    grad[static_cast<std::size_t>(i)] = d_rhs - d_lhs;
  }
  // multinomial covariance (diag(p) - p p^T)/n
  double quad = 0.0;
  double mean_grad = 0.0;
  for (int i = 0; i < 4; ++i) mean_grad += grad[static_cast<std::size_t>(i)] * p[static_cast<std::size_t>(i)];
  for (int i = 0; i < 4; ++i) {
    quad += p[static_cast<std::size_t>(i)] * sqr(grad[static_cast<std::size_t>(i)]);
  }
  quad -= sqr(mean_grad);
  return std::sqrt(std::max(quad, 0.0) / n);
}

/// Standard error of int w ln w dX for one histogram row.
inline double entropy_integral_se(const EstimatedTomogram& est, int row) {
  const double n = static_cast<double>(est.n_samples[static_cast<std::size_t>(row)]);
  double quad = 0.0, mean = 0.0;
  for (int j = 0; j < est.tomogram.n_x; ++j) {
    const double p = est.counts(row, j) / n;
    if (p <= 0.0) continue;
    const double w = est.tomogram.values(row, j);
    const double g = std::log(w) + 1.0;  // d/dp of p ln(p/dx) = ln w + 1
    mean += g * p;
    quad += p * sqr(g);
  }
  quad -= sqr(mean);
  return std::sqrt(std::max(quad, 0.0) / n);
}

/// Variance of the sample variance via central moments of the histogram.
inline double variance_se(const EstimatedTomogram& est, int row) {
  const double n = static_cast<double>(est.n_samples[static_cast<std::size_t>(row)]);
  const std::vector<double> xs = est.tomogram.x_points();
  double mean = 0.0;
  for (int j = 0; j < est.tomogram.n_x; ++j) {
    mean += xs[static_cast<std::size_t>(j)] * est.counts(row, j);
  }
  mean /= n;
  double m2 = 0.0, m4 = 0.0;
  for (int j = 0; j < est.tomogram.n_x; ++j) {
    const double d = xs[static_cast<std::size_t>(j)] - mean;
    const double c = est.counts(row, j);
    m2 += c * d * d;
    m4 += c * d * d * d * d;
  }
  m2 /= n;
  m4 /= n;
  return std::sqrt(std::max(m4 - m2 * m2, 0.0) / n);
}

}  // namespace detail

/// Run the inequality battery on a histogram estimate, with tolerances widened
/// to three propagated standard errors on top of the analytic floor.
inline std::vector<InequalityReport> checked_inequalities(const EstimatedTomogram& est,
                                                          const CutPoints& cuts, double theta) {
  const OpticalTomogram& opt = est.tomogram;
  std::vector<InequalityReport> reports;

  // subadditivity on the empirical four-cell masses
  {
    const auto [row, flip] = theta_row(opt, theta);
    const std::array<double, 4> p = detail::empirical_four_probs(est, row, flip, cuts);
    const double n = static_cast<double>(est.n_samples[static_cast<std::size_t>(row)]);
    const double se = detail::subadditivity_margin_se(p, n);
    FourProbabilities fp;
    fp.p = p;
    InequalityReport rep = subadditivity_check(fp, 3.0 * se + 1e-9);
    reports.push_back(rep);
  }

  // Heisenberg with variance noise propagated through the product
  {
    const auto [row_q, flip_q] = theta_row(opt, 0.0);
    const auto [row_p, flip_p] = theta_row(opt, kPi / 2.0);
    (void)flip_q;
    (void)flip_p;
    const MomentReport mq = moment_report(opt, 0.0, 2);
    const MomentReport mp = moment_report(opt, kPi / 2.0, 2);
    const double se_q = detail::variance_se(est, row_q);
    const double se_p = detail::variance_se(est, row_p);
    const double se = std::sqrt(sqr(mp.variance * se_q) + sqr(mq.variance * se_p));
    const double lhs = mq.variance * mp.variance;
    reports.push_back(make_report("heisenberg", lhs, 0.25, lhs - 0.25, 3.0 * se + 1e-6));
  }

  // entropic check with summed per-row entropy errors
  {
    const auto [row_a, flip_a] = theta_row(opt, theta);
    const auto [row_b, flip_b] = theta_row(opt, theta + kPi / 2.0);
    const double lhs = std::log(kPi * std::exp(1.0)) + entropy_integral(opt, row_a, flip_a) +
                       entropy_integral(opt, row_b, flip_b);
    const double se = std::sqrt(sqr(detail::entropy_integral_se(est, row_a)) +
                                sqr(detail::entropy_integral_se(est, row_b)));
    reports.push_back(make_report("entropic", lhs, 0.0, -lhs, 3.0 * se + 1e-6));
  }
  return reports;
}

}  // namespace qtomo
