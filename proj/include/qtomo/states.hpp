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
#include <complex>
#include <string>
#include <vector>

#include "qtomo/common.hpp"

namespace qtomo {

using Complex = std::complex<double>;

// Conventions used throughout: hbar = 1, q = (a + a^dag)/sqrt(2),
// p = (a - a^dag)/(i sqrt(2)), alpha = (q + i p)/sqrt(2).

/// Density matrix in the truncated number basis.
struct FockDensityMatrix {
  Eigen::MatrixXcd elements;

  int dim() const { return static_cast<int>(elements.rows()); }
  double trace() const { return elements.trace().real(); }
  /// Tr rho^2; for Hermitian rho this is the squared Frobenius norm.
  double purity() const { return elements.squaredNorm(); }

  double hermiticity_defect() const {
    return (elements - elements.adjoint()).cwiseAbs().maxCoeff();
  }
  double min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(elements);
    return solver.eigenvalues().minCoeff();
  }
};

inline double purity(const FockDensityMatrix& rho) { return rho.purity(); }

/// Specification of a catalog state.
struct StateSpec {
  enum class Kind { fock, coherent, squeezed_vacuum, cat, thermal };

  Kind kind = Kind::fock;
  int n = 0;               // fock
  Complex alpha{0.0, 0.0};  // coherent, cat
  double r = 0.0;          // squeezed_vacuum
  double phi = 0.0;        // squeezed_vacuum
  int parity = +1;         // cat: +1 even, -1 odd
  double nbar = 0.0;       // thermal
  int cutoff = 0;          // 0 requests the recommended cutoff

  static StateSpec fock_state(int n, int cutoff = 0) {
    StateSpec s;
    s.kind = Kind::fock;
    s.n = n;
    s.cutoff = cutoff;
    return s;
  }
  static StateSpec coherent(Complex alpha, int cutoff = 0) {
    StateSpec s;
    s.kind = Kind::coherent;
    s.alpha = alpha;
    s.cutoff = cutoff;
    return s;
  }
  static StateSpec squeezed(double r, double phi = 0.0, int cutoff = 0) {
    StateSpec s;
    s.kind = Kind::squeezed_vacuum;
    s.r = r;
    s.phi = phi;
    s.cutoff = cutoff;
    return s;
  }
  static StateSpec cat(Complex alpha, int parity, int cutoff = 0) {
    StateSpec s;
    s.kind = Kind::cat;
    s.alpha = alpha;
    s.parity = parity;
    s.cutoff = cutoff;
    return s;
  }
  static StateSpec thermal(double nbar, int cutoff = 0) {
    StateSpec s;
    s.kind = Kind::thermal;
    s.nbar = nbar;
    s.cutoff = cutoff;
    return s;
  }

  std::string kind_name() const {
    switch (kind) {
      case Kind::fock: return "fock";
      case Kind::coherent: return "coherent";
      case Kind::squeezed_vacuum: return "squeezed_vacuum";
      case Kind::cat: return "cat";
      case Kind::thermal: return "thermal";
    }
    return "unknown";
  }
};

namespace detail {

inline void validate_parameters(const StateSpec& spec) {
  const auto finite = [](double x) { return std::isfinite(x); };
  switch (spec.kind) {
    case StateSpec::Kind::fock:
      require(spec.n >= 0, "InvalidParameter", "fock index must be >= 0");
      break;
    case StateSpec::Kind::coherent:
      require(finite(spec.alpha.real()) && finite(spec.alpha.imag()), "InvalidParameter",
              "coherent amplitude must be finite");
      break;
    case StateSpec::Kind::squeezed_vacuum:
      require(finite(spec.r) && finite(spec.phi), "InvalidParameter",
              "squeezing parameters must be finite");
      break;
    case StateSpec::Kind::cat:
      require(finite(spec.alpha.real()) && finite(spec.alpha.imag()), "InvalidParameter",
              "cat amplitude must be finite");
      require(spec.parity == 1 || spec.parity == -1, "InvalidParameter",
              "cat parity must be +1 or -1");
      require(std::abs(spec.alpha) > 0.0, "InvalidParameter",
              "cat amplitude must be nonzero");
      break;
    case StateSpec::Kind::thermal:
      require(finite(spec.nbar), "InvalidParameter", "thermal nbar must be finite");
      require(spec.nbar >= 0.0, "InvalidParameter", "thermal nbar must be >= 0");
      break;
  }
}

// Fock-basis amplitudes of the pure catalog states, cutoff-independent by
// construction so truncation only drops tail terms.
inline Eigen::VectorXcd coherent_amplitudes(Complex alpha, int dim) {
  Eigen::VectorXcd b(dim);
  b(0) = std::exp(-0.5 * std::norm(alpha));
  for (int n = 1; n < dim; ++n) b(n) = b(n - 1) * alpha / std::sqrt(static_cast<double>(n));
  return b;
}

inline Eigen::VectorXcd squeezed_amplitudes(double r, double phi, int dim) {
  if (r < 0.0) {  // negative squeezing is a phase rotation of the positive one
    r = -r;
    phi += kPi;
  }
  Eigen::VectorXcd b = Eigen::VectorXcd::Zero(dim);
  const Complex factor = -std::exp(Complex(0.0, phi)) * std::tanh(r);
  b(0) = 1.0 / std::sqrt(std::cosh(r));
  for (int k = 1; 2 * k < dim; ++k) {
    const double m = 2.0 * k;
    b(2 * k) = b(2 * k - 2) * factor * std::sqrt((m - 1.0) * m) / m;
  }
  return b;
}

inline Eigen::VectorXcd cat_amplitudes(Complex alpha, int parity, int dim) {
  const double overlap = std::exp(-2.0 * std::norm(alpha));  // <-alpha|alpha>
  const double norm2 = 2.0 * (1.0 + parity * overlap);
  Eigen::VectorXcd plus = coherent_amplitudes(alpha, dim);
  Eigen::VectorXcd minus = coherent_amplitudes(-alpha, dim);
  return (plus + static_cast<double>(parity) * minus) / std::sqrt(norm2);
}

/// Population beyond the cutoff of the untruncated state.
inline double tail_population(const StateSpec& spec, int cutoff) {
  switch (spec.kind) {
    case StateSpec::Kind::fock:
      return spec.n < cutoff ? 0.0 : 1.0;
    case StateSpec::Kind::coherent: {
      const double lambda = std::norm(spec.alpha);
      if (lambda == 0.0) return 0.0;
      double term = std::exp(-lambda);
      double head = 0.0;
      for (int n = 0; n < cutoff; ++n) {
        head += term;
        term *= lambda / (n + 1);
      }
      return std::max(0.0, 1.0 - head);
    }
    case StateSpec::Kind::squeezed_vacuum: {
      const double t2 = sqr(std::tanh(std::abs(spec.r)));
      if (t2 == 0.0) return cutoff >= 1 ? 0.0 : 1.0;
      // p_{2k} = C(2k,k) (t2/4)^k / cosh r, summed over 2k >= cutoff.
      double p = 1.0 / std::cosh(std::abs(spec.r));
      double tail = 0.0;
      double head = 0.0;
      for (int k = 0; 2 * k < cutoff + 400; ++k) {
        if (2 * k >= cutoff) {
          tail += p;
          if (p < 1e-18 * (head + tail)) break;
        } else {
          head += p;
        }
        p *= t2 * (2.0 * k + 1.0) / (2.0 * k + 2.0);
      }
      return tail;
    }
    case StateSpec::Kind::cat: {
      const double lambda = std::norm(spec.alpha);
      const double overlap = std::exp(-2.0 * lambda);
      const double norm2 = 2.0 * (1.0 + spec.parity * overlap);
      // |b_n|^2 = 4 Poisson_n(lambda) e^{-?}/norm2 on the matching parity.
      double term = std::exp(-lambda);
      double tail = 0.0;
      for (int n = 0; n < cutoff + 600; ++n) {
        const bool matches = (n % 2 == 0) == (spec.parity == 1);
        if (n >= cutoff && matches) {
          tail += 4.0 * term / norm2;
          if (term < 1e-250) break;
        }
        term *= lambda / (n + 1);
      }
      return tail;
    }
    case StateSpec::Kind::thermal: {
      if (spec.nbar == 0.0) return cutoff >= 1 ? 0.0 : 1.0;
      const double q = spec.nbar / (spec.nbar + 1.0);
      return std::pow(q, cutoff);
    }
  }
  return 1.0;
}

}  // namespace detail

inline double tail_population(const StateSpec& spec, int cutoff) {
  detail::validate_parameters(spec);
  require(cutoff >= 1, "InvalidParameter", "cutoff must be >= 1");
  return detail::tail_population(spec, cutoff);
}

/// Smallest cutoff we recommend for a state. Based on Poisson/geometric tail
/// bounds: fock -> n+1, coherent/cat -> |alpha|^2 + 6|alpha| + 10,
/// squeezed -> 10 e^{2r}, thermal -> geometric tail below 1e-10. The formula
/// value is grown when the exact tail still exceeds the 1e-10 construction
/// bound (this bites for squeezing r ~ 1).
inline int recommended_cutoff(const StateSpec& spec) {
  detail::validate_parameters(spec);
  int cutoff = 1;
  switch (spec.kind) {
    case StateSpec::Kind::fock:
      cutoff = spec.n + 1;
      break;
    case StateSpec::Kind::coherent:
    case StateSpec::Kind::cat: {
      const double a = std::abs(spec.alpha);
      cutoff = static_cast<int>(std::ceil(a * a + 6.0 * a + 10.0));
      break;
    }
    case StateSpec::Kind::squeezed_vacuum:
      cutoff = static_cast<int>(std::ceil(10.0 * std::exp(2.0 * std::abs(spec.r))));
      break;
    case StateSpec::Kind::thermal: {
      if (spec.nbar == 0.0) {
        cutoff = 2;
      } else {
        const double q = spec.nbar / (spec.nbar + 1.0);
        cutoff = static_cast<int>(std::ceil(std::log(1e-10) / std::log(q))) + 2;
      }
      break;
    }
  }
  while (detail::tail_population(spec, cutoff) >= 1e-10) cutoff += 2;
  return cutoff;
}

/// Build the density matrix of a catalog state. Throws CutoffTooSmall when the
/// untruncated tail beyond the requested cutoff reaches 1e-10.
inline FockDensityMatrix build_state(const StateSpec& spec) {
  detail::validate_parameters(spec);
  const int dim = spec.cutoff > 0 ? spec.cutoff : recommended_cutoff(spec);
  require(dim >= 1, "InvalidParameter", "cutoff must be >= 1");
  const double tail = detail::tail_population(spec, dim);
  if (tail >= 1e-10) {
    fail("CutoffTooSmall", "tail population " + std::to_string(tail) + " at cutoff " +
                               std::to_string(dim) + " for " + spec.kind_name());
  }

  FockDensityMatrix rho;
  switch (spec.kind) {
    case StateSpec::Kind::fock: {
      rho.elements = Eigen::MatrixXcd::Zero(dim, dim);
      rho.elements(spec.n, spec.n) = 1.0;
      break;
    }
    case StateSpec::Kind::coherent: {
      const Eigen::VectorXcd b = detail::coherent_amplitudes(spec.alpha, dim);
      rho.elements = b * b.adjoint();
      break;
    }
    case StateSpec::Kind::squeezed_vacuum: {
      const Eigen::VectorXcd b = detail::squeezed_amplitudes(spec.r, spec.phi, dim);
      rho.elements = b * b.adjoint();
      break;
    }
    case StateSpec::Kind::cat: {
      const Eigen::VectorXcd b = detail::cat_amplitudes(spec.alpha, spec.parity, dim);
      rho.elements = b * b.adjoint();
      break;
    }
    case StateSpec::Kind::thermal: {
      rho.elements = Eigen::MatrixXcd::Zero(dim, dim);
      const double q = spec.nbar / (spec.nbar + 1.0);
      double p = 1.0 / (spec.nbar + 1.0);
      for (int n = 0; n < dim; ++n) {
        rho.elements(n, n) = p;
        p *= q;
      }
      break;
    }
  }
  return rho;
}

/// First and second quadrature moments of a Fock-basis state, from the ladder
/// expectations <a>, <a^2>, <n>.
struct QuadratureMoments {
  double mean_q = 0.0;
  double mean_p = 0.0;
  double var_q = 0.0;
  double var_p = 0.0;
  double cov_qp = 0.0;
};

inline QuadratureMoments quadrature_moments(const FockDensityMatrix& rho) {
  const int dim = rho.dim();
  Complex a_mean(0.0, 0.0);
  Complex a2_mean(0.0, 0.0);
  double n_mean = 0.0;
  for (int m = 0; m < dim; ++m) {
    n_mean += m * rho.elements(m, m).real();
    if (m >= 1) a_mean += std::sqrt(static_cast<double>(m)) * rho.elements(m, m - 1);
    if (m >= 2)
      a2_mean += std::sqrt(static_cast<double>(m) * (m - 1.0)) * rho.elements(m, m - 2);
  }
  QuadratureMoments out;
  out.mean_q = std::sqrt(2.0) * a_mean.real();
  out.mean_p = std::sqrt(2.0) * a_mean.imag();
  const double q2 = a2_mean.real() + n_mean + 0.5;
  const double p2 = n_mean + 0.5 - a2_mean.real();
  out.var_q = q2 - sqr(out.mean_q);
  out.var_p = p2 - sqr(out.mean_p);
  out.cov_qp = a2_mean.imag() - out.mean_q * out.mean_p;
  return out;
}

/// Classical Gaussian phase-space density (the only classical family needed:
/// it evolves exactly under quadratic Hamiltonians).
struct ClassicalDensity {
  Eigen::Vector2d mean;
  Eigen::Matrix2d cov;

  static ClassicalDensity gaussian(double mean_q, double mean_p, const Eigen::Matrix2d& cov) {
    require((cov - cov.transpose()).cwiseAbs().maxCoeff() <= 1e-12, "InvalidParameter",
            "covariance must be symmetric");
    const double det = cov.determinant();
    require(cov(0, 0) > 0.0 && det > 0.0, "InvalidParameter",
            "covariance must be positive definite");
    ClassicalDensity d;
    d.mean << mean_q, mean_p;
    d.cov = 0.5 * (cov + cov.transpose());
    return d;
  }
};

/// Pointwise evaluation of the Gaussian density.
inline double eval_classical(const ClassicalDensity& density, double q, double p) {
  const Eigen::Matrix2d inv = density.cov.inverse();
  const double det = density.cov.determinant();
  Eigen::Vector2d z(q - density.mean(0), p - density.mean(1));
  const double quad = z.dot(inv * z);
  return std::exp(-0.5 * quad) / (kTwoPi * std::sqrt(det));
}

}  // namespace qtomo
