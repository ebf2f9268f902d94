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

// Command-line front end: build states, compute Wigner functions and
// tomograms, run uncertainty/subadditivity checks, propagate under quadratic
// Hamiltonians, and simulate homodyne sampling. Artifacts are written
// atomically; exit codes: 0 success (all checks satisfied), 1 at least one
// inequality unsatisfied, 2 input or validation error.

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "qtomo/evolution.hpp"
#include "qtomo/homodyne.hpp"
#include "qtomo/inequalities.hpp"
#include "qtomo/io.hpp"
#include "qtomo/statistics.hpp"
#include "qtomo/states.hpp"
#include "qtomo/tomography.hpp"
#include "qtomo/wigner.hpp"

namespace {

using qtomo::Json;

struct GlobalOptions {
  std::string out_dir = ".";
  std::uint64_t seed = 20260810;
  double tol = -1.0;  // negative: use per-check defaults
  std::string grid;   // "qmin,qmax,pmin,pmax,nq,np"
};

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::string cell;
  std::istringstream in(text);
  while (std::getline(in, cell, ',')) {
    if (cell.empty()) continue;
    out.push_back(std::stod(cell));
  }
  return out;
}

qtomo::GridSpec parse_grid(const std::string& text) {
  if (text.empty()) return qtomo::GridSpec::standard();
  const std::vector<double> v = parse_double_list(text);
  qtomo::require(v.size() == 6, "InvalidParameter",
                 "--grid expects qmin,qmax,pmin,pmax,nq,np");
  return qtomo::GridSpec(v[0], v[1], v[2], v[3], static_cast<int>(v[4]),
                         static_cast<int>(v[5]));
}

qtomo::StateSpec load_spec(const std::string& path) {
  const Json j = Json::parse(qtomo::read_file(path));
  return qtomo::state_spec_from_json(j);
}

std::string artifact_path(const GlobalOptions& g, const std::string& name) {
  return g.out_dir + "/" + name;
}

qtomo::OpticalTomogram standard_tomogram(const qtomo::FockDensityMatrix& rho,
                                         const qtomo::GridSpec& grid, int n_thetas) {
  const qtomo::WignerGrid w = qtomo::wigner_from_rho(rho, grid);
  return qtomo::optical_tomogram(w, qtomo::default_thetas(n_thetas), grid.q_min, grid.q_max,
                                 257);
}

int run_state(const GlobalOptions& g, const std::string& spec_path) {
  const qtomo::StateSpec spec = load_spec(spec_path);
  const qtomo::FockDensityMatrix rho = qtomo::build_state(spec);
  qtomo::atomic_write(artifact_path(g, "state.csv"), qtomo::density_to_csv(rho));
  Json summary;
  summary["spec"] = qtomo::state_spec_to_json(spec);
  summary["dim"] = rho.dim();
  summary["trace"] = rho.trace();
  summary["purity"] = rho.purity();
  std::cout << summary.dump(2) << "\n";
  return 0;
}

int run_wigner(const GlobalOptions& g, const std::string& spec_path) {
  const qtomo::StateSpec spec = load_spec(spec_path);
  const qtomo::FockDensityMatrix rho = qtomo::build_state(spec);
  const qtomo::GridSpec grid = parse_grid(g.grid);
  const qtomo::WignerGrid w = qtomo::wigner_from_rho(rho, grid);
  qtomo::atomic_write(artifact_path(g, "wigner.csv"), qtomo::wigner_to_csv(w));
  qtomo::atomic_write(artifact_path(g, "wigner.json"), qtomo::wigner_to_json(w).dump(2) + "\n");
  Json summary;
  summary["normalization"] = w.normalization();
  summary["max"] = w.values.maxCoeff();
  summary["min"] = w.values.minCoeff();
  std::cout << summary.dump(2) << "\n";
  return 0;
}

int run_tomogram(const GlobalOptions& g, const std::string& spec_path, int n_thetas,
                 const std::string& method) {
  const qtomo::StateSpec spec = load_spec(spec_path);
  const qtomo::FockDensityMatrix rho = qtomo::build_state(spec);
  const qtomo::GridSpec grid = parse_grid(g.grid);
  qtomo::OpticalTomogram opt;
  if (method == "radon") {
    opt = standard_tomogram(rho, grid, n_thetas);
  } else if (method == "exact") {
    opt = qtomo::tomogram_from_rho(rho, qtomo::default_thetas(n_thetas), grid.q_min,
                                   grid.q_max, 257);
  } else {
    qtomo::fail("InvalidParameter", "--method must be radon or exact");
  }
  qtomo::atomic_write(artifact_path(g, "tomogram.csv"), qtomo::tomogram_to_csv(opt));
  qtomo::atomic_write(artifact_path(g, "tomogram.json"),
                      qtomo::tomogram_to_json(opt).dump(2) + "\n");
  Json summary;
  summary["n_theta"] = opt.n_theta();
  summary["clipped_mass"] = opt.clipped_mass;
  std::cout << summary.dump(2) << "\n";
  return 0;
}

int emit_reports(const GlobalOptions& g, const std::vector<qtomo::InequalityReport>& reports,
                 const std::string& filename) {
  Json arr = Json::array();
  bool all_ok = true;
  for (const qtomo::InequalityReport& rep : reports) {
    arr.push_back(qtomo::report_to_json(rep));
    all_ok = all_ok && rep.satisfied;
  }
  qtomo::atomic_write(artifact_path(g, filename), arr.dump(2) + "\n");
  std::cout << arr.dump(2) << "\n";
  return all_ok ? 0 : 1;
}

int run_check(const GlobalOptions& g, const std::string& spec_path,
              const std::string& tomogram_path, double theta) {
  qtomo::OpticalTomogram opt;
  if (!spec_path.empty()) {
    const qtomo::StateSpec spec = load_spec(spec_path);
    const qtomo::FockDensityMatrix rho = qtomo::build_state(spec);
    opt = qtomo::tomogram_from_rho(rho, qtomo::default_thetas(64), -8.0, 8.0, 257);
  } else {
    opt = qtomo::tomogram_from_csv(qtomo::read_file(tomogram_path));
  }
  const double tol = g.tol > 0 ? g.tol : 1e-6;
  std::vector<qtomo::InequalityReport> reports;
  reports.push_back(qtomo::heisenberg_check(opt, tol));
  reports.push_back(qtomo::entropic_check(opt, theta, tol));
  return emit_reports(g, reports, "reports.json");
}

int run_ineq(const GlobalOptions& g, const std::string& spec_path,
             const std::string& tomogram_path, double theta,
             const std::vector<std::string>& cut_args) {
  qtomo::OpticalTomogram opt;
  qtomo::FockDensityMatrix rho;
  bool have_state = false;
  if (!spec_path.empty()) {
    const qtomo::StateSpec spec = load_spec(spec_path);
    rho = qtomo::build_state(spec);
    have_state = true;
    opt = qtomo::tomogram_from_rho(rho, qtomo::default_thetas(64), -8.0, 8.0, 257);
  } else {
    opt = qtomo::tomogram_from_csv(qtomo::read_file(tomogram_path));
  }
  const double tol = g.tol > 0 ? g.tol : 1e-9;

  std::vector<qtomo::InequalityReport> reports;
  for (const std::string& arg : cut_args) {
    const std::vector<double> v = parse_double_list(arg);
    qtomo::require(v.size() == 3, "InvalidParameter", "--cuts expects x1,x2,x3");
    const qtomo::CutPoints cuts(v[0], v[1], v[2]);
    reports.push_back(
        qtomo::subadditivity_check(qtomo::four_probs(opt, theta, cuts), tol));
    if (have_state) {
      const qtomo::GridSpec grid = qtomo::GridSpec::adequate_for(rho);
      const qtomo::WignerGrid w = qtomo::wigner_from_rho(rho, grid);
      reports.push_back(
          qtomo::wigner_subadditivity_check(qtomo::four_functionals(w, cuts), tol));
    }
  }
  // uncertainty checks ride along whenever both phases are stored
  try {
    const double utol = g.tol > 0 ? g.tol : 1e-6;
    reports.push_back(qtomo::heisenberg_check(opt, utol));
    reports.push_back(qtomo::entropic_check(opt, theta, utol));
  } catch (const qtomo::Error& e) {
    if (e.kind() != "MissingPhase") throw;
  }
  return emit_reports(g, reports, "ineq_reports.json");
}

int run_evolve(const GlobalOptions& g, const std::string& spec_path, bool free_motion,
               double omega, const std::string& times_arg) {
  const qtomo::StateSpec spec = load_spec(spec_path);
  const qtomo::FockDensityMatrix rho = qtomo::build_state(spec);
  const qtomo::QuadraticHamiltonian h = free_motion
                                            ? qtomo::QuadraticHamiltonian::free_motion()
                                            : qtomo::QuadraticHamiltonian::harmonic(omega);
  const std::vector<double> times = parse_double_list(times_arg);
  qtomo::require(!times.empty(), "InvalidParameter", "--times expects a comma list");
  const qtomo::TomogramTrajectory traj =
      qtomo::propagate_quadratic(rho, h, times, qtomo::default_thetas(64), -8.0, 8.0, 256);
  for (std::size_t i = 0; i < traj.frames.size(); ++i) {
    char name[64];
    std::snprintf(name, sizeof(name), "frame_%03zu.csv", i);
    qtomo::atomic_write(artifact_path(g, name), qtomo::tomogram_to_csv(traj.frames[i]));
  }
  Json report;
  report["times"] = times;
  bool uniform = times.size() >= 3;
  for (std::size_t i = 2; i < times.size() && uniform; ++i) {
    uniform = std::abs((times[i] - times[i - 1]) - (times[1] - times[0])) < 1e-9;
  }
  if (uniform) {
    report["quantum_residual"] = qtomo::quantum_residual(traj, h);
  } else {
    report["quantum_residual"] = nullptr;
    report["note"] = "residual needs >= 3 uniformly spaced times";
  }
  qtomo::atomic_write(artifact_path(g, "residual.json"), report.dump(2) + "\n");
  std::cout << report.dump(2) << "\n";
  return 0;
}

int run_simulate(const GlobalOptions& g, const std::string& spec_path, int phases, int samples,
                 const std::string& cuts_arg) {
  const qtomo::StateSpec spec = load_spec(spec_path);
  const qtomo::FockDensityMatrix rho = qtomo::build_state(spec);
  const qtomo::OpticalTomogram opt =
      qtomo::tomogram_from_rho(rho, qtomo::default_thetas(64), -8.0, 8.0, 257);
  qtomo::QuadratureDataset data =
      qtomo::sample_quadratures(opt, qtomo::default_thetas(phases), samples, g.seed);
  data.source = qtomo::state_spec_to_json(spec).dump();
  const qtomo::EstimatedTomogram est = qtomo::estimate_tomogram(data, -8.0, 8.0, 257);

  const std::vector<double> v = parse_double_list(cuts_arg);
  qtomo::require(v.size() == 3, "InvalidParameter", "--cuts expects x1,x2,x3");
  const std::vector<qtomo::InequalityReport> reports =
      qtomo::checked_inequalities(est, qtomo::CutPoints(v[0], v[1], v[2]), 0.0);

  qtomo::atomic_write(artifact_path(g, "dataset.csv"), qtomo::dataset_to_csv(data));
  qtomo::atomic_write(artifact_path(g, "dataset.json"),
                      qtomo::dataset_sidecar(data).dump(2) + "\n");
  qtomo::atomic_write(artifact_path(g, "estimate.csv"),
                      qtomo::tomogram_to_csv(est.tomogram));
  return emit_reports(g, reports, "simulate_reports.json");
}

int run_roundtrip(const GlobalOptions& g, const std::string& spec_path) {
  const qtomo::StateSpec spec = load_spec(spec_path);
  const qtomo::FockDensityMatrix rho = qtomo::build_state(spec);
  const qtomo::GridSpec grid = g.grid.empty() ? qtomo::GridSpec::adequate_for(rho)
                                              : parse_grid(g.grid);
  const qtomo::WignerGrid w = qtomo::wigner_from_rho(rho, grid);
  const qtomo::FockDensityMatrix back = qtomo::rho_from_wigner(w, rho.dim());
  const double err_wigner = (back.elements - rho.elements).norm();

  const qtomo::OpticalTomogram opt =
      qtomo::optical_tomogram(w, qtomo::default_thetas(64), grid.q_min, grid.q_max, 257);
  const qtomo::FockDensityMatrix back2 =
      qtomo::rho_from_symplectic(qtomo::SymplecticTomogram{opt}, rho.dim());
  const double err_tomo = (back2.elements - rho.elements).norm();

  Json report;
  report["wigner_roundtrip_frobenius"] = err_wigner;
  report["tomogram_roundtrip_frobenius"] = err_tomo;
  report["wigner_bound"] = 1e-3;
  report["tomogram_bound"] = 5e-3;
  qtomo::atomic_write(artifact_path(g, "roundtrip.json"), report.dump(2) + "\n");
  std::cout << report.dump(2) << "\n";
  return (err_wigner < 1e-3 && err_tomo < 5e-3) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tomographic-probability toolkit"};
  app.require_subcommand(1);

  GlobalOptions g;
  app.add_option("--out", g.out_dir, "output directory for artifacts");
  app.add_option("--seed", g.seed, "random seed for sampling commands");
  app.add_option("--tol", g.tol, "tolerance override for checks");
  app.add_option("--grid", g.grid, "phase-space grid: qmin,qmax,pmin,pmax,nq,np");

  std::string spec_path, tomogram_path, method = "radon", times_arg, cuts_single = "-1,0,1";
  std::vector<std::string> cuts_args;
  double theta = 0.0, omega = 1.0;
  bool free_motion = false;
  int n_thetas = 64, phases = 16, samples = 100000;

  CLI::App* c_state = app.add_subcommand("state", "build and export a state");
  c_state->add_option("--spec", spec_path, "StateSpec JSON file")->required();

  CLI::App* c_wigner = app.add_subcommand("wigner", "Wigner function on a grid");
  c_wigner->add_option("--spec", spec_path, "StateSpec JSON file")->required();

  CLI::App* c_tomo = app.add_subcommand("tomogram", "optical tomogram");
  c_tomo->add_option("--spec", spec_path, "StateSpec JSON file")->required();
  c_tomo->add_option("--thetas", n_thetas, "number of phases");
  c_tomo->add_option("--method", method, "radon (default) or exact");

  CLI::App* c_check = app.add_subcommand("check", "uncertainty checks");
  c_check->add_option("--state,--spec", spec_path, "StateSpec JSON file");
  c_check->add_option("--tomogram", tomogram_path, "tomogram CSV file");
  c_check->add_option("--theta", theta, "phase for the entropic check");

  CLI::App* c_ineq = app.add_subcommand("ineq", "four-cut inequality checks");
  c_ineq->add_option("--spec,--state", spec_path, "StateSpec JSON file");
  c_ineq->add_option("--tomogram", tomogram_path, "tomogram CSV file");
  c_ineq->add_option("--theta", theta, "phase of the cuts");
  c_ineq->add_option("--cuts", cuts_args, "cut triple x1,x2,x3 (repeatable)");

  CLI::App* c_evolve = app.add_subcommand("evolve", "propagate under a quadratic Hamiltonian");
  c_evolve->add_option("--spec", spec_path, "StateSpec JSON file")->required();
  c_evolve->add_flag("--free", free_motion, "free motion (U = 0)");
  c_evolve->add_option("--harmonic", omega, "harmonic frequency omega");
  c_evolve->add_option("--times", times_arg, "comma list of times")->required();

  CLI::App* c_sim = app.add_subcommand("simulate", "homodyne sampling loop");
  c_sim->add_option("--spec", spec_path, "StateSpec JSON file")->required();
  c_sim->add_option("--phases", phases, "number of phases");
  c_sim->add_option("--samples", samples, "samples per phase");
  c_sim->add_option("--cuts", cuts_single, "cut triple for the subadditivity check");

  CLI::App* c_round = app.add_subcommand("roundtrip", "state -> Wigner -> tomogram -> state");
  c_round->add_option("--spec", spec_path, "StateSpec JSON file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (c_state->parsed()) return run_state(g, spec_path);
    if (c_wigner->parsed()) return run_wigner(g, spec_path);
    if (c_tomo->parsed()) return run_tomogram(g, spec_path, n_thetas, method);
    if (c_check->parsed()) {
      qtomo::require(!spec_path.empty() || !tomogram_path.empty(), "InvalidParameter",
                     "check needs --state or --tomogram");
      return run_check(g, spec_path, tomogram_path, theta);
    }
    if (c_ineq->parsed()) {
      qtomo::require(!spec_path.empty() || !tomogram_path.empty(), "InvalidParameter",
                     "ineq needs --spec or --tomogram");
      if (cuts_args.empty()) cuts_args.push_back("-1,0,1");
      return run_ineq(g, spec_path, tomogram_path, theta, cuts_args);
    }
    if (c_evolve->parsed()) return run_evolve(g, spec_path, free_motion, omega, times_arg);
    if (c_sim->parsed()) return run_simulate(g, spec_path, phases, samples, cuts_single);
    if (c_round->parsed()) return run_roundtrip(g, spec_path);
  } catch (const qtomo::Error& e) {
    Json err;
    err["error"] = e.kind();
    err["message"] = e.what();
    std::cerr << err.dump() << "\n";
    return 2;
  } catch (const std::exception& e) {
    Json err;
    err["error"] = "Error";
    err["message"] = e.what();
    std::cerr << err.dump() << "\n";
    return 2;
  }
  return 2;
}
