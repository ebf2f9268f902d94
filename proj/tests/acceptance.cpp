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

// End-to-end acceptance run. Each criterion prints one PASS/FAIL line; the
// process exit code is the number of failed criteria.
// Usage: acceptance [path-to-qtomo-binary]

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "qtomo/evolution.hpp"
#include "qtomo/homodyne.hpp"
#include "qtomo/inequalities.hpp"
#include "qtomo/io.hpp"
#include "qtomo/statistics.hpp"
#include "qtomo/states.hpp"
#include "qtomo/tomography.hpp"
#include "qtomo/wigner.hpp"

namespace {

using Clock = std::chrono::steady_clock;
using qtomo::CutPoints;
using qtomo::FockDensityMatrix;
using qtomo::GridSpec;
using qtomo::kPi;
using qtomo::OpticalTomogram;
using qtomo::QuadraticHamiltonian;
using qtomo::StateSpec;
using qtomo::WignerGrid;

int g_failures = 0;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void report(int criterion, bool pass, const std::string& detail, double elapsed) {
  std::printf("[%s] criterion %d: %s (%.1f s)\n", pass ? "PASS" : "FAIL", criterion,
              detail.c_str(), elapsed);
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::vector<StateSpec> catalog() {
  return {
      StateSpec::fock_state(0),        StateSpec::fock_state(1),
      StateSpec::fock_state(2),        StateSpec::fock_state(3),
      StateSpec::fock_state(4),        StateSpec::coherent({0.5, 0.0}),
      StateSpec::coherent({1.0, 0.5}), StateSpec::coherent({2.0, 0.0}),
      StateSpec::squeezed(0.5),        StateSpec::squeezed(1.0),
      StateSpec::cat({1.0, 0.0}, -1),  StateSpec::cat({1.5, 0.0}, +1),
  };
}

OpticalTomogram wide_exact_tomogram(const FockDensityMatrix& rho, int n_thetas) {
  const qtomo::QuadratureMoments m = qtomo::quadrature_moments(rho);
  const double sigma = std::sqrt(std::max({m.var_q, m.var_p, 0.5}));
  const double extent =
      std::max(8.0, std::ceil(std::max(std::abs(m.mean_q), std::abs(m.mean_p)) + 8.5 * sigma));
  const int n_x = 2 * static_cast<int>(std::ceil(extent / 0.0625)) + 1;
  return qtomo::tomogram_from_rho(rho, qtomo::default_thetas(n_thetas), -extent, extent, n_x);
}

// --- criterion 1: vacuum pipeline exactness -------------------------------

void criterion_1() {
  const auto t0 = Clock::now();
  bool pass = true;
  std::string detail = "vacuum pipeline W(0,0)=2, w(0,t)=pi^-1/2, Heisenberg=1/4, entropic=0";

  const FockDensityMatrix vac = qtomo::build_state(StateSpec::fock_state(0, 8));
  // Eq. (1.6) at the origin
  pass = pass && std::abs(qtomo::wigner_point(vac, 0.0, 0.0) - 2.0) < 1e-6;

  // Eq. (1.8) at X = 0 for every default phase
  const qtomo::FockTomogramEvaluator eval(vac);
  const double wexp = 1.0 / std::sqrt(kPi);
  for (double theta : qtomo::default_thetas(64)) {
    pass = pass && std::abs(eval.value(0.0, theta) - wexp) < 1e-6;
  }

  // Eqs. (1.15) and (1.1) on the default tomogram grids
  const OpticalTomogram opt =
      qtomo::tomogram_from_rho(vac, qtomo::default_thetas(64), -8.0, 8.0, 256);
  const qtomo::InequalityReport heis = qtomo::heisenberg_check(opt);
  const qtomo::InequalityReport entr = qtomo::entropic_check(opt, 0.0);
  pass = pass && std::abs(heis.lhs - 0.25) < 1e-6 && heis.satisfied;
  pass = pass && std::abs(entr.lhs) < 1e-6 && entr.satisfied;

  const double elapsed = seconds_since(t0);
  pass = pass && elapsed < 5.0;
  report(1, pass, detail, elapsed);
}

// --- criterion 2: round-trip fidelity --------------------------------------

void criterion_2() {
  const auto t0 = Clock::now();
  bool pass = true;
  double worst_wigner = 0.0, worst_tomo = 0.0;

  for (const StateSpec& spec : catalog()) {
    const FockDensityMatrix rho = qtomo::build_state(spec);
    const WignerGrid w = qtomo::wigner_from_rho(rho, GridSpec::symmetric(8, 8, 128, 128));

    const FockDensityMatrix via_wigner = qtomo::rho_from_wigner(w, rho.dim());
    const double err_w = (via_wigner.elements - rho.elements).norm();
    worst_wigner = std::max(worst_wigner, err_w);

    const OpticalTomogram opt =
        qtomo::optical_tomogram(w, qtomo::default_thetas(64), -8.0, 8.0, 256);
    const FockDensityMatrix via_tomo =
        qtomo::rho_from_symplectic(qtomo::SymplecticTomogram{opt}, rho.dim());
    const double err_t = (via_tomo.elements - rho.elements).norm();
    worst_tomo = std::max(worst_tomo, err_t);
  }
  pass = worst_wigner < 1e-3 && worst_tomo < 5e-3;
  const double elapsed = seconds_since(t0);
  pass = pass && elapsed < 60.0;
  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "round trips: Wigner worst %.2e (<1e-3), tomogram worst %.2e (<5e-3)",
                worst_wigner, worst_tomo);
  report(2, pass, detail, elapsed);
}

// --- criterion 3: moment equality ------------------------------------------

void criterion_3() {
  const auto t0 = Clock::now();
  bool pass = true;
  double worst = 0.0;
  for (const StateSpec& spec : catalog()) {
    const FockDensityMatrix rho = qtomo::build_state(spec);
    const OpticalTomogram opt = wide_exact_tomogram(rho, 4);
    for (int n = 1; n <= 4; ++n) {
      const double dq =
          std::abs(qtomo::tomographic_moment(opt, 0.0, n) - oracles::expect_q_power(rho, n));
      const double dp = std::abs(qtomo::tomographic_moment(opt, kPi / 2.0, n) -
                                 oracles::expect_p_power(rho, n));
      worst = std::max({worst, dq, dp});
    }
  }
  pass = worst < 1e-5;
  char detail[120];
  std::snprintf(detail, sizeof(detail), "moments n<=4 vs Fock expectations, worst |diff| %.2e",
                worst);
  report(3, pass, detail, seconds_since(t0));
}

// --- criterion 4: inequality suite ------------------------------------------

void criterion_4() {
  const auto t0 = Clock::now();
  int violations = 0;
  oracles::Rng rng(20260810);

  // 1000 random simplex points
  for (int trial = 0; trial < 1000; ++trial) {
    qtomo::FourProbabilities p;
    double total = 0.0;
    for (double& v : p.p) {
      v = -std::log(std::max(rng.uniform(), 1e-300));
      total += v;
    }
    for (double& v : p.p) v /= total;
    if (!qtomo::subadditivity_check(p, 1e-12).satisfied) ++violations;
  }

  // catalog x 16 phases x 100 random cut triples on the radon pipeline
  for (const StateSpec& spec : catalog()) {
    const FockDensityMatrix rho = qtomo::build_state(spec);
    const WignerGrid w = qtomo::wigner_from_rho(rho, GridSpec::symmetric(8, 8, 128, 128));
    const OpticalTomogram opt =
        qtomo::optical_tomogram(w, qtomo::default_thetas(16), -8.0, 8.0, 256);
    for (int k = 0; k < 16; ++k) {
      for (int trial = 0; trial < 100; ++trial) {
        std::array<double, 3> cuts{2.0 * rng.normal(), 2.0 * rng.normal(),
                                   2.0 * rng.normal()};
        std::sort(cuts.begin(), cuts.end());
        const qtomo::FourProbabilities p = qtomo::four_probs(
            opt, opt.thetas[static_cast<std::size_t>(k)], CutPoints(cuts[0], cuts[1], cuts[2]));
        if (std::abs(p.sum() - 1.0) > 1e-8) ++violations;
        if (!qtomo::subadditivity_check(p).satisfied) ++violations;
      }
    }
  }

  // pure states x 100 random cuts for the Wigner-functional inequality
  double worst_sum = 0.0;
  for (const StateSpec& spec : catalog()) {
    if (spec.kind == StateSpec::Kind::thermal) continue;
    const FockDensityMatrix rho = qtomo::build_state(spec);
    const WignerGrid w = qtomo::wigner_from_rho(rho, GridSpec::adequate_for(rho));
    for (int trial = 0; trial < 100; ++trial) {
      std::array<double, 3> cuts{2.0 * rng.normal(), 2.0 * rng.normal(), 2.0 * rng.normal()};
      std::sort(cuts.begin(), cuts.end());
      const qtomo::FourFunctionals f =
          qtomo::four_functionals(w, CutPoints(cuts[0], cuts[1], cuts[2]));
      worst_sum = std::max(worst_sum, std::abs(f.sum() - 1.0));
      if (std::abs(f.sum() - 1.0) > 1e-4) ++violations;
      if (!qtomo::wigner_subadditivity_check(f).satisfied) ++violations;
    }
  }

  // equality case pins 2 ln 2
  qtomo::FourProbabilities quarters;
  quarters.p = {0.25, 0.25, 0.25, 0.25};
  const qtomo::InequalityReport eq = qtomo::subadditivity_check(quarters);
  const bool equality_ok = std::abs(eq.lhs - 2.0 * std::log(2.0)) < 1e-9 &&
                           std::abs(eq.rhs - 2.0 * std::log(2.0)) < 1e-9;

  const bool pass = violations == 0 && equality_ok;
  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "subadditivity suite: %d violations, worst |sum(Pi)-1| %.2e, equality at 2ln2",
                violations, worst_sum);
  report(4, pass, detail, seconds_since(t0));
}

// --- criterion 5: PDE residuals ---------------------------------------------

std::vector<double> centered_times(double t0, double dt, int n) {
  std::vector<double> out;
  for (int i = 0; i < n; ++i) out.push_back(t0 + dt * (i - n / 2));
  return out;
}

void criterion_5() {
  const auto t0 = Clock::now();
  bool pass = true;
  std::string log;

  // quantum kinetic equation, Eq. (35)
  {
    const FockDensityMatrix rho = qtomo::build_state(StateSpec::coherent({1.0, 0.0}, 32));
    const QuadraticHamiltonian h = QuadraticHamiltonian::harmonic(1.0);
    const auto coarse = qtomo::propagate_quadratic(rho, h, centered_times(0.15, 0.01, 3),
                                                   qtomo::default_thetas(64), -8.0, 8.0, 256);
    const auto fine = qtomo::propagate_quadratic(rho, h, centered_times(0.15, 0.005, 3),
                                                 qtomo::default_thetas(128), -8.0, 8.0, 512);
    const double rc = qtomo::quantum_residual(coarse, h);
    const double rf = qtomo::quantum_residual(fine, h);
    const double order = std::log2(rc / rf);
    auto shuffled = coarse;
    std::swap(shuffled.frames.front(), shuffled.frames.back());
    const double neg = qtomo::quantum_residual(shuffled, h);
    pass = pass && rc < 1e-2 && order >= 1.8 && neg > 10.0 * rc;
    char buf[96];
    std::snprintf(buf, sizeof(buf), "q35 %.1e ord %.2f neg %.0fx", rc, order, neg / rc);
    log += buf;
  }

  // classical optical Liouville, Eq. (54)
  {
    const qtomo::ClassicalDensity g =
        qtomo::ClassicalDensity::gaussian(0.7, 0.1, 0.5 * Eigen::Matrix2d::Identity());
    const QuadraticHamiltonian h = QuadraticHamiltonian::harmonic(1.0);
    const auto coarse = qtomo::propagate_quadratic(g, h, centered_times(0.2, 0.01, 3),
                                                   qtomo::default_thetas(64), -8.0, 8.0, 256);
    const auto fine = qtomo::propagate_quadratic(g, h, centered_times(0.2, 0.005, 3),
                                                 qtomo::default_thetas(128), -8.0, 8.0, 512);
    const double rc = qtomo::classical_residual_optical(coarse, h);
    const double rf = qtomo::classical_residual_optical(fine, h);
    const double order = std::log2(rc / rf);
    auto shuffled = coarse;
    std::swap(shuffled.frames.front(), shuffled.frames.back());
    const double neg = qtomo::classical_residual_optical(shuffled, h);
    pass = pass && rc < 1e-2 && order >= 1.8 && neg > 10.0 * rc;
    char buf[96];
    std::snprintf(buf, sizeof(buf), " | c54 %.1e ord %.2f neg %.0fx", rc, order, neg / rc);
    log += buf;
  }

  // classical symplectic Liouville, Eq. (55)
  {
    const qtomo::ClassicalDensity g =
        qtomo::ClassicalDensity::gaussian(0.5, 0.3, 0.5 * Eigen::Matrix2d::Identity());
    const QuadraticHamiltonian h = QuadraticHamiltonian::harmonic(1.0);
    const auto coarse = qtomo::classical_symplectic_frames(
        g, h, centered_times(0.2, 0.01, 3), qtomo::linspace(0.45, 0.95, 9),
        qtomo::linspace(0.45, 0.95, 9), -8.0, 8.0, 256);
    const auto fine = qtomo::classical_symplectic_frames(
        g, h, centered_times(0.2, 0.005, 3), qtomo::linspace(0.45, 0.95, 17),
        qtomo::linspace(0.45, 0.95, 17), -8.0, 8.0, 512);
    const double rc = qtomo::classical_residual_symplectic(coarse, h);
    const double rf = qtomo::classical_residual_symplectic(fine, h);
    const double order = std::log2(rc / rf);
    auto shuffled = coarse;
    std::swap(shuffled.frames.front(), shuffled.frames.back());
    const double neg = qtomo::classical_residual_symplectic(shuffled, h);
    pass = pass && rc < 1e-2 && order >= 1.8 && neg > 10.0 * rc;
    char buf[96];
    std::snprintf(buf, sizeof(buf), " | c55 %.1e ord %.2f neg %.0fx", rc, order, neg / rc);
    log += buf;
  }

  report(5, pass, "PDE residuals " + log, seconds_since(t0));
}

// --- criterion 6: homodyne loop ---------------------------------------------

void criterion_6() {
  const auto t0 = Clock::now();
  int violations = 0;
  oracles::Rng rng(607);

  for (const StateSpec& spec : catalog()) {
    const FockDensityMatrix rho = qtomo::build_state(spec);
    const OpticalTomogram opt =
        qtomo::tomogram_from_rho(rho, qtomo::default_thetas(16), -12.0, 12.0, 385);
    const qtomo::QuadratureDataset data =
        qtomo::sample_quadratures(opt, opt.thetas, 100000, 42);
    const qtomo::EstimatedTomogram est = qtomo::estimate_tomogram(data, -12.0, 12.0, 385);
    for (int trial = 0; trial < 20; ++trial) {
      std::array<double, 3> cuts{rng.normal(), rng.normal(), rng.normal()};
      std::sort(cuts.begin(), cuts.end());
      const std::vector<qtomo::InequalityReport> reports = qtomo::checked_inequalities(
          est, CutPoints(cuts[0], cuts[1], cuts[2]), 0.0);
      for (const qtomo::InequalityReport& rep : reports) {
        if (!rep.satisfied) ++violations;
      }
    }
  }

  // adversarial control: clipped quadratures must fail the Heisenberg check
  bool control_failed = false;
  {
    const FockDensityMatrix vac = qtomo::build_state(StateSpec::fock_state(0, 8));
    const OpticalTomogram opt =
        qtomo::tomogram_from_rho(vac, qtomo::default_thetas(16), -8.0, 8.0, 257);
    qtomo::QuadratureDataset data = qtomo::sample_quadratures(opt, opt.thetas, 20000, 13);
    for (qtomo::QuadratureSample& rec : data.records) {
      rec.x = std::clamp(rec.x, -0.1, 0.1);
    }
    const qtomo::EstimatedTomogram est = qtomo::estimate_tomogram(data, -8.0, 8.0, 257);
    const std::vector<qtomo::InequalityReport> reports =
        qtomo::checked_inequalities(est, CutPoints(-0.1, 0.0, 0.1), 0.0);
    control_failed = !reports[1].satisfied;
  }

  const double elapsed = seconds_since(t0);
  const bool pass = violations == 0 && control_failed && elapsed < 120.0;
  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "homodyne loop: %d violations out of catalog x 20 cuts, adversarial control %s",
                violations, control_failed ? "fails as required" : "UNEXPECTEDLY PASSES");
  report(6, pass, detail, elapsed);
}

// --- criterion 7: determinism ------------------------------------------------

void criterion_7(const std::string& cli) {
  const auto t0 = Clock::now();
  bool pass = true;
  std::string detail = "byte-identical artifacts across reruns";

  // library level
  {
    const FockDensityMatrix rho = qtomo::build_state(StateSpec::coherent({0.7, 0.2}));
    const OpticalTomogram opt =
        qtomo::tomogram_from_rho(rho, qtomo::default_thetas(8), -8.0, 8.0, 257);
    const auto d1 = qtomo::sample_quadratures(opt, opt.thetas, 5000, 12345);
    const auto d2 = qtomo::sample_quadratures(opt, opt.thetas, 5000, 12345);
    pass = pass && qtomo::dataset_to_csv(d1) == qtomo::dataset_to_csv(d2);
  }

  // CLI level
  if (!cli.empty()) {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "qtomo_acceptance";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const std::string out = dir.string();
    qtomo::atomic_write(out + "/spec.json",
                        qtomo::state_spec_to_json(StateSpec::coherent({0.7, 0.2})).dump());
    const std::string cmd = cli + " --out " + out + " --seed 99 simulate --spec " + out +
                            "/spec.json --phases 4 --samples 2000 > /dev/null";
    pass = pass && WEXITSTATUS(std::system(cmd.c_str())) == 0;
    const std::string first_data = qtomo::read_file(out + "/dataset.csv");
    const std::string first_est = qtomo::read_file(out + "/estimate.csv");
    const std::string first_rep = qtomo::read_file(out + "/simulate_reports.json");
    pass = pass && WEXITSTATUS(std::system(cmd.c_str())) == 0;
    pass = pass && qtomo::read_file(out + "/dataset.csv") == first_data;
    pass = pass && qtomo::read_file(out + "/estimate.csv") == first_est;
    pass = pass && qtomo::read_file(out + "/simulate_reports.json") == first_rep;
  } else {
    detail += " (library only; no CLI path given)";
  }
  report(7, pass, detail, seconds_since(t0));
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7(cli);
  std::printf("%s\n", g_failures == 0 ? "ACCEPTANCE: ALL CRITERIA PASSED"
                                      : "ACCEPTANCE: FAILURES PRESENT");
  return g_failures;
}
