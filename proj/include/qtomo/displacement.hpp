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

#include "qtomo/common.hpp"
#include "qtomo/states.hpp"

namespace qtomo {

// Number-basis matrix elements of the displacement operator
// D(beta) = exp(beta a^dag - beta^* a), in the associated-Laguerre closed form
//   <m|D|n> = sqrt(n!/m!) beta^{m-n} e^{-|beta|^2/2} L_n^{(m-n)}(|beta|^2),  m >= n,
// with the m < n case obtained from (-beta^*)^{n-m} and swapped factorials.

/// Single element, evaluated through lgamma and std::assoc_laguerre. Reference
/// path; the table below is the production evaluator.
inline Complex displacement_element(int m, int n, Complex beta) {
  require(m >= 0 && n >= 0, "InvalidParameter", "negative Fock index");
  const double x = std::norm(beta);
  if (x == 0.0) return m == n ? 1.0 : 0.0;
  const int lo = std::min(m, n);
  const int k = std::abs(m - n);
  const double log_pref = 0.5 * (std::lgamma(lo + 1.0) - std::lgamma(lo + k + 1.0)) +
                          k * 0.5 * std::log(x) - 0.5 * x;
  const Complex unit = beta / std::abs(beta);
  Complex phase(1.0, 0.0);
  const Complex base = (m >= n) ? unit : -std::conj(unit);
  for (int i = 0; i < k; ++i) phase *= base;
  return std::exp(log_pref) * phase *
         std::assoc_laguerre(static_cast<unsigned>(lo), static_cast<unsigned>(k), x);
}

/// Reusable dim x dim table of <m|D(beta)|n>. The closed form is evaluated
/// diagonal-by-diagonal with multiplicative prefactor updates, which is the
/// log-factorial-stabilized form without per-element transcendentals.
class DisplacementTable {
 public:
  explicit DisplacementTable(int dim) : dim_(dim), table_(dim, dim) {
    require(dim >= 1 && dim <= 512, "InvalidParameter", "displacement table dim out of range");
  }

  int dim() const { return dim_; }

  const Eigen::MatrixXcd& compute(Complex beta) {
    const double x = std::norm(beta);
    if (x == 0.0) {
      table_.setIdentity();
      return table_;
    }
    const double amp = std::sqrt(x);
    const Complex unit = beta / amp;
    const double damp = std::exp(-0.5 * x);

    Complex unit_k(1.0, 0.0);  // unit^k
    double pref0 = damp;       // |beta|^k e^{-x/2} / sqrt(k!)
    double sign_k = 1.0;       // (-1)^k
    for (int k = 0; k < dim_; ++k) {
      if (k > 0) {
        pref0 *= amp / std::sqrt(static_cast<double>(k));
        unit_k *= unit;
        sign_k = -sign_k;
      }
      const Complex upper = unit_k;                   // beta-direction phase
      const Complex lower = sign_k * std::conj(unit_k);  // (-beta^*)-direction phase
      double pref = pref0;
      double lag_prev2 = 0.0;
      double lag_prev = 1.0;  // L_0^k
      for (int j = 0; j + k < dim_; ++j) {
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
        table_(j + k, j) = pref * lag * upper;
        if (k > 0) table_(j, j + k) = pref * lag * lower;
        pref *= std::sqrt((j + 1.0) / (j + 1.0 + k));
      }
    }
    return table_;
  }

 private:
  int dim_;
  Eigen::MatrixXcd table_;
};

}  // namespace qtomo
