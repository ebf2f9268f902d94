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

#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <complex>
#include <vector>

#include "oracles.hpp"
#include "qtomo/states.hpp"

namespace {

using qtomo::FockDensityMatrix;
using qtomo::StateSpec;

std::vector<StateSpec> catalog() {
  return {
      StateSpec::fock_state(0),
      StateSpec::fock_state(1),
      StateSpec::fock_state(4),
      StateSpec::coherent({0.5, 0.0}),
      StateSpec::coherent({1.0, 0.5}),
      StateSpec::coherent({2.0, 0.0}),
      StateSpec::squeezed(0.5),
      StateSpec::squeezed(1.0, 0.7),
      StateSpec::cat({1.5, 0.0}, +1),
      StateSpec::cat({1.0, 0.0}, -1),
      StateSpec::thermal(0.5),
      StateSpec::thermal(2.0),
  };
}

TEST_CASE("vacuum is the basis state") {
  const FockDensityMatrix rho = qtomo::build_state(StateSpec::fock_state(0, 8));
  REQUIRE(rho.dim() == 8);
  REQUIRE(rho.elements(0, 0) == std::complex<double>(1.0, 0.0));
  REQUIRE(rho.elements.cwiseAbs().sum() == 1.0);
}

TEST_CASE("coherent state matches the Poissonian closed form") {
  const double a = 1.0 / std::sqrt(2.0);
  const FockDensityMatrix rho = qtomo::build_state(StateSpec::coherent({a, 0.0}, 16));
  for (int n = 0; n < 16; ++n) {
    for (int m = 0; m < 16; ++m) {
      const double expected = std::exp(-0.5) * std::pow(a, n + m) /
                              std::sqrt(std::tgamma(n + 1.0) * std::tgamma(m + 1.0));
      REQUIRE_THAT(rho.elements(n, m).real(), Catch::Matchers::WithinAbs(expected, 1e-12));
      REQUIRE_THAT(rho.elements(n, m).imag(), Catch::Matchers::WithinAbs(0.0, 1e-15));
    }
  }
}

TEST_CASE("thermal state is the geometric diagonal") {
  const FockDensityMatrix rho = qtomo::build_state(StateSpec::thermal(0.5, 24));
  for (int n = 0; n < 24; ++n) {
    const double expected = (1.0 / 1.5) * std::pow(0.5 / 1.5, n);
    REQUIRE_THAT(rho.elements(n, n).real(), Catch::Matchers::WithinAbs(expected, 1e-14));
  }
  REQUIRE_THAT(rho.trace(), Catch::Matchers::WithinAbs(1.0, 1e-8));
}

TEST_CASE("purity of catalog examples") {
  REQUIRE_THAT(qtomo::build_state(StateSpec::fock_state(3)).purity(),
               Catch::Matchers::WithinAbs(1.0, 1e-12));
  const FockDensityMatrix th = qtomo::build_state(StateSpec::thermal(0.5));
  REQUIRE_THAT(th.purity(), Catch::Matchers::WithinAbs(0.5, 1e-8));
  // confirm against the direct matrix trace of rho^2
  const double direct = (th.elements * th.elements).trace().real();
  REQUIRE_THAT(th.purity(), Catch::Matchers::WithinAbs(direct, 1e-12));
  REQUIRE_THAT(qtomo::build_state(StateSpec::cat({2.0, 0.0}, +1)).purity(),
               Catch::Matchers::WithinAbs(1.0, 1e-8));
}

TEST_CASE("purity of thermal states is 1/(2 nbar + 1)") {
  for (double nbar : {0.3, 0.5, 2.0}) {
    const FockDensityMatrix rho = qtomo::build_state(StateSpec::thermal(nbar));
    REQUIRE_THAT(rho.purity(), Catch::Matchers::WithinAbs(1.0 / (2.0 * nbar + 1.0), 1e-8));
  }
}

TEST_CASE("catalog states satisfy the density-matrix invariants") {
  for (const StateSpec& spec : catalog()) {
    const FockDensityMatrix rho = qtomo::build_state(spec);
    INFO("state " << spec.kind_name());
    REQUIRE(rho.hermiticity_defect() <= 1e-12);
    REQUIRE_THAT(rho.trace(), Catch::Matchers::WithinAbs(1.0, 1e-8));
    REQUIRE(rho.min_eigenvalue() >= -1e-10);
    if (spec.kind != StateSpec::Kind::thermal) {
      REQUIRE(rho.purity() >= 1.0 - 1e-8);
    }
  }
}

TEST_CASE("doubling the cutoff leaves elements unchanged") {
  for (const StateSpec& spec : catalog()) {
    StateSpec coarse = spec;
    coarse.cutoff = qtomo::recommended_cutoff(spec);
    StateSpec fine = spec;
    fine.cutoff = 2 * coarse.cutoff;
    const FockDensityMatrix a = qtomo::build_state(coarse);
    const FockDensityMatrix b = qtomo::build_state(fine);
    const double diff =
        (b.elements.topLeftCorner(a.dim(), a.dim()) - a.elements).cwiseAbs().maxCoeff();
    INFO("state " << spec.kind_name());
    REQUIRE(diff < 1e-10);
  }
}

TEST_CASE("squeezed vacuum has the textbook quadrature variances") {
  const double r = 0.5;
  // generous cutoff so the n-weighted truncation tail stays below the tolerance
  const FockDensityMatrix rho = qtomo::build_state(StateSpec::squeezed(r, 0.0, 48));
  const qtomo::QuadratureMoments m = qtomo::quadrature_moments(rho);
  REQUIRE_THAT(m.var_q, Catch::Matchers::WithinAbs(0.5 * std::exp(-2.0 * r), 1e-10));
  REQUIRE_THAT(m.var_p, Catch::Matchers::WithinAbs(0.5 * std::exp(2.0 * r), 1e-10));
  REQUIRE_THAT(m.mean_q, Catch::Matchers::WithinAbs(0.0, 1e-12));
}

TEST_CASE("quadrature moments match operator expectations") {
  for (const StateSpec& spec : catalog()) {
    const FockDensityMatrix rho = qtomo::build_state(spec);
    const qtomo::QuadratureMoments m = qtomo::quadrature_moments(rho);
    INFO("state " << spec.kind_name());
    REQUIRE_THAT(m.mean_q, Catch::Matchers::WithinAbs(oracles::expect_q_power(rho, 1), 1e-9));
    REQUIRE_THAT(m.mean_p, Catch::Matchers::WithinAbs(oracles::expect_p_power(rho, 1), 1e-9));
    REQUIRE_THAT(m.var_q + m.mean_q * m.mean_q,
                 Catch::Matchers::WithinAbs(oracles::expect_q_power(rho, 2), 1e-9));
    REQUIRE_THAT(m.var_p + m.mean_p * m.mean_p,
                 Catch::Matchers::WithinAbs(oracles::expect_p_power(rho, 2), 1e-9));
  }
}

TEST_CASE("construction rejects bad parameters") {
  REQUIRE_THROWS_AS(qtomo::build_state(StateSpec::thermal(-1.0)), qtomo::Error);
  REQUIRE_THROWS_AS(qtomo::build_state(StateSpec::coherent(
                        {std::numeric_limits<double>::quiet_NaN(), 0.0})),
                    qtomo::Error);
  REQUIRE_THROWS_AS(qtomo::build_state(StateSpec::cat({1.0, 0.0}, 0)), qtomo::Error);
  try {
    qtomo::build_state(StateSpec::thermal(-1.0));
  } catch (const qtomo::Error& e) {
    REQUIRE(e.kind() == "InvalidParameter");
  }
}

TEST_CASE("construction rejects cutoffs with visible tails") {
  REQUIRE_THROWS_AS(qtomo::build_state(StateSpec::coherent({2.0, 0.0}, 6)), qtomo::Error);
  REQUIRE_THROWS_AS(qtomo::build_state(StateSpec::fock_state(5, 4)), qtomo::Error);
  try {
    qtomo::build_state(StateSpec::fock_state(5, 4));
  } catch (const qtomo::Error& e) {
    REQUIRE(e.kind() == "CutoffTooSmall");
  }
}

TEST_CASE("recommended cutoffs keep tails below 1e-10") {
  for (const StateSpec& spec : catalog()) {
    const int cutoff = qtomo::recommended_cutoff(spec);
    REQUIRE(qtomo::tail_population(spec, cutoff) < 1e-10);
  }
}

TEST_CASE("classical Gaussian evaluation") {
  const Eigen::Matrix2d half = 0.5 * Eigen::Matrix2d::Identity();
  const qtomo::ClassicalDensity g = qtomo::ClassicalDensity::gaussian(0.0, 0.0, half);
  REQUIRE_THAT(qtomo::eval_classical(g, 0.0, 0.0),
               Catch::Matchers::WithinAbs(1.0 / oracles::kPi, 1e-15));
  REQUIRE(qtomo::eval_classical(g, 10.0, 0.0) < 1e-40);

  const qtomo::ClassicalDensity u =
      qtomo::ClassicalDensity::gaussian(1.0, -1.0, Eigen::Matrix2d::Identity());
  REQUIRE_THAT(qtomo::eval_classical(u, 1.0, -1.0),
               Catch::Matchers::WithinAbs(1.0 / (2.0 * oracles::kPi), 1e-15));
}

TEST_CASE("classical Gaussian normalizes on the grid") {
  const qtomo::ClassicalDensity g =
      qtomo::ClassicalDensity::gaussian(0.0, 0.0, 0.5 * Eigen::Matrix2d::Identity());
  const int n = 129;
  const double lo = -8.0, hi = 8.0;
  const double h = (hi - lo) / (n - 1);
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    const double wq = (i == 0 || i == n - 1) ? 0.5 : 1.0;
    for (int j = 0; j < n; ++j) {
      const double wp = (j == 0 || j == n - 1) ? 0.5 : 1.0;
      total += wq * wp * qtomo::eval_classical(g, lo + i * h, lo + j * h);
    }
  }
  REQUIRE_THAT(total * h * h, Catch::Matchers::WithinAbs(1.0, 1e-6));
}

TEST_CASE("classical density rejects bad covariances") {
  Eigen::Matrix2d notspd;
  notspd << 1.0, 2.0, 2.0, 1.0;  // det < 0
  REQUIRE_THROWS_AS(qtomo::ClassicalDensity::gaussian(0, 0, notspd), qtomo::Error);
}

}  // namespace
