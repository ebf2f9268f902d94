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

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qtomo/common.hpp"
#include "qtomo/homodyne.hpp"
#include "qtomo/statistics.hpp"
#include "qtomo/states.hpp"
#include "qtomo/tomography.hpp"
#include "qtomo/wigner.hpp"

namespace qtomo {

using Json = nlohmann::ordered_json;

namespace detail {

/// Shortest round-trip decimal form; keeps artifacts byte-stable across runs.
inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace detail

/// Write content to path atomically (temp file in place, then rename), so no
/// partial artifact survives a failure.
inline void atomic_write(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    require(out.good(), "IoError", "cannot open " + tmp);
    out << content;
    require(out.good(), "IoError", "short write to " + tmp);
  }
  require(std::rename(tmp.c_str(), path.c_str()) == 0, "IoError", "cannot rename into " + path);
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), "IoError", "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------------------
// StateSpec <-> JSON: {"kind": "coherent", "alpha": [re, im], "cutoff": 16}

inline Json state_spec_to_json(const StateSpec& spec) {
  Json j;
  j["kind"] = spec.kind_name();
  switch (spec.kind) {
    case StateSpec::Kind::fock: j["n"] = spec.n; break;
    case StateSpec::Kind::coherent:
      j["alpha"] = {spec.alpha.real(), spec.alpha.imag()};
      break;
    case StateSpec::Kind::squeezed_vacuum:
      j["r"] = spec.r;
      j["phi"] = spec.phi;
      break;
    case StateSpec::Kind::cat:
      j["alpha"] = {spec.alpha.real(), spec.alpha.imag()};
      j["parity"] = spec.parity;
      break;
    case StateSpec::Kind::thermal: j["nbar"] = spec.nbar; break;
  }
  if (spec.cutoff > 0) j["cutoff"] = spec.cutoff;
  return j;
}

inline StateSpec state_spec_from_json(const Json& j) {
  require(j.is_object() && j.contains("kind"), "InvalidParameter",
          "state spec needs a \"kind\" field");
  const std::string kind = j.at("kind").get<std::string>();
  StateSpec spec;
  const auto complex_field = [&](const char* name) -> Complex {
    require(j.contains(name), "InvalidParameter", std::string("missing field ") + name);
    const Json& v = j.at(name);
    if (v.is_array()) {
      require(v.size() == 2, "InvalidParameter", "complex fields are [re, im]");
      return Complex(v.at(0).get<double>(), v.at(1).get<double>());
    }
    return Complex(v.get<double>(), 0.0);
  };
  if (kind == "fock") {
    spec.kind = StateSpec::Kind::fock;
    require(j.contains("n"), "InvalidParameter", "fock spec needs n");
    spec.n = j.at("n").get<int>();
  } else if (kind == "coherent") {
    spec.kind = StateSpec::Kind::coherent;
    spec.alpha = complex_field("alpha");
  } else if (kind == "squeezed_vacuum") {
    spec.kind = StateSpec::Kind::squeezed_vacuum;
    require(j.contains("r"), "InvalidParameter", "squeezed spec needs r");
    spec.r = j.at("r").get<double>();
    spec.phi = j.value("phi", 0.0);
  } else if (kind == "cat") {
    spec.kind = StateSpec::Kind::cat;
    spec.alpha = complex_field("alpha");
    require(j.contains("parity"), "InvalidParameter", "cat spec needs parity");
    spec.parity = j.at("parity").get<int>();
  } else if (kind == "thermal") {
    spec.kind = StateSpec::Kind::thermal;
    require(j.contains("nbar"), "InvalidParameter", "thermal spec needs nbar");
    spec.nbar = j.at("nbar").get<double>();
  } else {
    fail("InvalidParameter", "unknown state kind: " + kind);
  }
  spec.cutoff = j.value("cutoff", 0);
  return spec;
}

// ---------------------------------------------------------------------------
// Density matrix CSV: rows "m,n,re,im"

inline std::string density_to_csv(const FockDensityMatrix& rho) {
  std::string out = "m,n,re,im\n";
  for (int m = 0; m < rho.dim(); ++m) {
    for (int n = 0; n < rho.dim(); ++n) {
      out += std::to_string(m) + "," + std::to_string(n) + "," +
             detail::fmt(rho.elements(m, n).real()) + "," +
             detail::fmt(rho.elements(m, n).imag()) + "\n";
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Wigner CSV: rows "q,p,w" (row-major in q) and JSON with grid + flat values

inline std::string wigner_to_csv(const WignerGrid& w) {
  const std::vector<double> qs = w.grid.q_points();
  const std::vector<double> ps = w.grid.p_points();
  std::string out = "q,p,w\n";
  for (int i = 0; i < w.grid.n_q; ++i) {
    for (int j = 0; j < w.grid.n_p; ++j) {
      out += detail::fmt(qs[static_cast<std::size_t>(i)]) + "," +
             detail::fmt(ps[static_cast<std::size_t>(j)]) + "," + detail::fmt(w.values(i, j)) +
             "\n";
    }
  }
  return out;
}

inline Json wigner_to_json(const WignerGrid& w) {
  Json j;
  j["grid"] = {{"q_min", w.grid.q_min}, {"q_max", w.grid.q_max}, {"p_min", w.grid.p_min},
               {"p_max", w.grid.p_max}, {"n_q", w.grid.n_q},     {"n_p", w.grid.n_p}};
  std::vector<double> flat;
  flat.reserve(static_cast<std::size_t>(w.grid.n_q) * static_cast<std::size_t>(w.grid.n_p));
  for (int i = 0; i < w.grid.n_q; ++i) {
    for (int jj = 0; jj < w.grid.n_p; ++jj) flat.push_back(w.values(i, jj));
  }
  j["values"] = flat;
  return j;
}

// ---------------------------------------------------------------------------
// Tomogram CSV: rows "theta,X,w"; also the ingestion format for measured data

inline std::string tomogram_to_csv(const OpticalTomogram& opt) {
  const std::vector<double> xs = opt.x_points();
  std::string out = "theta,X,w\n";
  for (int i = 0; i < opt.n_theta(); ++i) {
    for (int j = 0; j < opt.n_x; ++j) {
      out += detail::fmt(opt.thetas[static_cast<std::size_t>(i)]) + "," +
             detail::fmt(xs[static_cast<std::size_t>(j)]) + "," + detail::fmt(opt.values(i, j)) +
             "\n";
    }
  }
  return out;
}

inline Json tomogram_to_json(const OpticalTomogram& opt) {
  Json j;
  j["thetas"] = opt.thetas;
  j["x_min"] = opt.x_min;
  j["x_max"] = opt.x_max;
  j["n_x"] = opt.n_x;
  std::vector<double> flat;
  for (int i = 0; i < opt.n_theta(); ++i) {
    for (int jj = 0; jj < opt.n_x; ++jj) flat.push_back(opt.values(i, jj));
  }
  j["values"] = flat;
  return j;
}

namespace detail {

inline std::vector<std::vector<double>> parse_numeric_csv(const std::string& text,
                                                          std::size_t n_cols) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream ls(line);
    std::string cell;
    bool numeric = true;
    while (std::getline(ls, cell, ',')) {
      try {
        std::size_t used = 0;
        const double v = std::stod(cell, &used);
        row.push_back(v);
        if (used == 0) numeric = false;
      } catch (const std::exception&) {
        numeric = false;
        break;
      }
    }
    if (first && !numeric) {  // header line
      first = false;
      continue;
    }
    first = false;
    require(numeric && row.size() == n_cols, "InvalidParameter",
            "malformed CSV line: " + line);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace detail

/// Parse a "theta,X,w" tomogram CSV. The grid must be a full rectangle with
/// uniform X spacing; phases must lie in [0, pi).
inline OpticalTomogram tomogram_from_csv(const std::string& text) {
  const std::vector<std::vector<double>> rows = detail::parse_numeric_csv(text, 3);
  require(!rows.empty(), "InvalidParameter", "empty tomogram CSV");

  std::vector<double> thetas;
  std::vector<double> xs;
  for (const auto& r : rows) {
    if (thetas.empty() || std::abs(r[0] - thetas.back()) > 1e-12) {
      bool known = false;
      for (double t : thetas) {
        if (std::abs(t - r[0]) < 1e-12) known = true;
      }
      if (!known) thetas.push_back(r[0]);
    }
    if (thetas.size() == 1) xs.push_back(r[1]);
  }
  const int nt = static_cast<int>(thetas.size());
  const int nx = static_cast<int>(xs.size());
  require(nt >= 1 && nx >= 2, "InvalidParameter", "tomogram CSV needs a rectangular grid");
  require(rows.size() == static_cast<std::size_t>(nt) * static_cast<std::size_t>(nx),
          "InvalidParameter", "tomogram CSV is not a full rectangle");
  const double dx = (xs.back() - xs.front()) / (nx - 1);
  for (int j = 0; j < nx; ++j) {
    require(std::abs(xs[static_cast<std::size_t>(j)] - (xs.front() + j * dx)) < 1e-9,
            "InvalidParameter", "tomogram CSV needs a uniform X grid");
  }

  OpticalTomogram opt;
  opt.thetas = thetas;
  opt.x_min = xs.front();
  opt.x_max = xs.back();
  opt.n_x = nx;
  opt.values.resize(nt, nx);
  for (int i = 0; i < nt; ++i) {
    for (int j = 0; j < nx; ++j) {
      const auto& r = rows[static_cast<std::size_t>(i) * static_cast<std::size_t>(nx) +
                           static_cast<std::size_t>(j)];
      require(std::abs(r[0] - thetas[static_cast<std::size_t>(i)]) < 1e-12, "InvalidParameter",
              "tomogram CSV rows out of order");
      opt.values(i, j) = r[2];
    }
  }
  detail::check_thetas_half_range(opt.thetas);
  return opt;
}

// ---------------------------------------------------------------------------
// Quadrature dataset CSV: rows "theta,X" plus a JSON sidecar

inline std::string dataset_to_csv(const QuadratureDataset& data) {
  std::string out = "theta,X\n";
  for (const QuadratureSample& rec : data.records) {
    out += detail::fmt(rec.theta) + "," + detail::fmt(rec.x) + "\n";
  }
  return out;
}

inline Json dataset_sidecar(const QuadratureDataset& data) {
  Json j;
  j["seed"] = data.seed;
  j["source"] = data.source;
  // per-phase record counts, in first-appearance order
  Json counts = Json::array();
  std::vector<double> seen;
  std::vector<long> tally;
  for (const QuadratureSample& rec : data.records) {
    bool found = false;
    for (std::size_t i = 0; i < seen.size(); ++i) {
      if (std::abs(seen[i] - rec.theta) < 1e-12) {
        ++tally[i];
        found = true;
        break;
      }
    }
    if (!found) {
      seen.push_back(rec.theta);
      tally.push_back(1);
    }
  }
  for (std::size_t i = 0; i < seen.size(); ++i) {
    counts.push_back({{"theta", seen[i]}, {"count", tally[i]}});
  }
  j["counts"] = counts;
  return j;
}

inline QuadratureDataset dataset_from_csv(const std::string& text) {
  const std::vector<std::vector<double>> rows = detail::parse_numeric_csv(text, 2);
  require(!rows.empty(), "InvalidParameter", "empty dataset CSV");
  QuadratureDataset data;
  data.source = "external";
  for (const auto& r : rows) {
    require(std::isfinite(r[0]) && std::isfinite(r[1]), "InvalidParameter",
            "dataset contains non-finite entries");
    data.records.push_back({r[0], r[1]});
  }
  return data;
}

// ---------------------------------------------------------------------------
// Reports

inline Json report_to_json(const InequalityReport& rep) {
  Json j;
  j["name"] = rep.name;
  j["lhs"] = rep.lhs;
  j["rhs"] = rep.rhs;
  j["satisfied"] = rep.satisfied;
  j["margin"] = rep.margin;
  j["tolerance"] = rep.tolerance;
  if (!rep.note.empty()) j["note"] = rep.note;
  return j;
}

inline Json moment_report_to_json(const MomentReport& rep) {
  Json j;
  j["theta"] = rep.theta;
  Json moments = Json::array();
  for (const auto& [order, value] : rep.moments) {
    moments.push_back({{"order", order}, {"value", value}});
  }
  j["moments"] = moments;
  j["mean"] = rep.mean;
  j["variance"] = rep.variance;
  return j;
}

}  // namespace qtomo
