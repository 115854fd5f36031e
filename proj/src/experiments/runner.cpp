// Copyright 2026 The mdicert Authors
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

#include "mdicert/experiments/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "mdicert/experiments/calibration.hpp"
#include "mdicert/kernels.hpp"
#include "mdicert/oracle.hpp"

namespace mdicert::experiments {

using nlohmann::json;
namespace fs = std::filesystem;

const char* const kResultsHeader =
    "point,protocol,r,eta_A,eta_B,eta,xi,nu,epsilon,sigma_star,phase_var_1,phase_var_2,phase_var_3,"
    "witness,std_error,threshold,expected,violated,n_total";
const char* const kRegionHeader = "i,j,axis1,axis2,expected,threshold,difference";
const char* const kContourHeader = "polyline,vertex,axis1,axis2,residual";
const char* const kSpotCheckHeader = "i,j,axis1,axis2,witness,std_error,threshold,expected,violated,n_total";
const char* const kOracleHeader =
    "point,engine,engine_se,oracle,oracle_se,combined_se,z,pass,expected_plus,expected_minus,z_plus,z_minus,"
    "matched_variant";
const char* const kCalibrationHeader = "index,v_im,v_pm,alpha_x,alpha_p,fit_alpha_x,fit_alpha_p";

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

namespace {

using Clock = std::chrono::steady_clock;

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  return out;
}

void prepare_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory '" + dir.string() + "': " + ec.message());
}

void write_json(const fs::path& path, const json& doc) {
  auto out = open_output(path);
  out << doc.dump(2) << '\n';
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

json estimate_json(const WitnessEstimate& e) {
  return json{{"value", e.value},           {"std_error", e.std_error}, {"threshold", e.threshold},
              {"sigma_star", e.sigma_star}, {"k", e.k},                 {"n_total", e.n_total},
              {"violated", e.violated()}};
}

// Wraps argument errors from the estimators, which only fire on values that
// slipped past config validation.
template <class Fn>
auto infeasible_guard(Fn&& fn) {
  try {
    return fn();
  } catch (const std::invalid_argument& e) {
    throw InfeasibleError(e.what());
  } catch (const std::domain_error& e) {
    throw InfeasibleError(e.what());
  }
}

// results.csv column index (1-based, for gnuplot) of a sweep parameter.
int results_column(Protocol protocol, const std::string& parameter) {
  if (parameter == "r") return 3;
  if (parameter == "eta_A") return 4;
  if (parameter == "eta_B") return 5;
  if (parameter == "eta") return protocol == Protocol::kEw ? 4 : 6;
  if (parameter == "xi") return 7;
  if (parameter == "nu") return 8;
  if (parameter == "epsilon") return 9;
  if (parameter == "sigma_star") return 10;
  if (parameter == "phase_var" || parameter == "phase_var_1") return 11;
  if (parameter == "phase_var_2") return 12;
  if (parameter == "phase_var_3") return 13;
  return 1;
}

}  // namespace

double expected_witness(const RunConfig& c) {
  switch (c.protocol) {
    case Protocol::kEw:
      return ew_model_expected(c.ew);
    case Protocol::kMemory:
      return mdiep_expected(c.memory.eta, c.memory.xi, c.mdiep_variant);
    case Protocol::kSimonDuan: {
      const auto& s = c.simon_duan;
      return 2.0 * s.epsilon * s.epsilon * (s.eta * std::exp(-2.0 * s.r) + 1.0 - s.eta);
    }
  }
  return 0.0;
}

PointResult run_point(const RunConfig& c, int threads) {
  return infeasible_guard([&] {
    PointResult res;
    res.config = c;
    const EstimateOptions options{threads, c.violation_k};
    switch (c.protocol) {
      case Protocol::kEw:
        res.estimate = estimate_mdiew(c.ew, options);
        break;
      case Protocol::kMemory:
        res.estimate = estimate_mdiep(c.memory, options);
        break;
      case Protocol::kSimonDuan: {
        const SimonDuanEstimate sd = estimate_simon_duan(c.simon_duan, threads);
        res.estimate.value = sd.value;
        res.estimate.std_error = sd.std_error;
        res.estimate.threshold = 2.0;
        res.estimate.sigma_star = std::numeric_limits<double>::infinity();
        res.estimate.k = c.violation_k;
        res.estimate.n_total = sd.n_total;
        break;
      }
    }
    res.expected = expected_witness(c);
    return res;
  });
}

std::vector<PointResult> run_sweep(const RunConfig& c, int threads) {
  std::vector<PointResult> out;
  for (const RunConfig& point : expand_sweep(c)) out.push_back(run_point(point, threads));
  return out;
}

void write_results_csv(std::ostream& out, const std::vector<PointResult>& results) {
  out << kResultsHeader << '\n';
  std::size_t index = 0;
  for (const PointResult& res : results) {
    const RunConfig& c = res.config;
    // Columns r .. phase_var_3; blank where the protocol has no such parameter.
    std::vector<std::string> p(11);
    switch (c.protocol) {
      case Protocol::kEw:
        p[0] = format_double(c.ew.r);
        p[1] = format_double(c.ew.eta_A);
        p[2] = format_double(c.ew.eta_B);
        p[6] = format_double(c.ew.epsilon);
        p[7] = format_double(res.estimate.sigma_star);
        p[8] = format_double(c.ew.phase_noise.theta1);
        p[9] = format_double(c.ew.phase_noise.theta2);
        p[10] = format_double(c.ew.phase_noise.theta3);
        break;
      case Protocol::kMemory:
        p[3] = format_double(c.memory.eta);
        p[4] = format_double(c.memory.xi);
        p[5] = format_double(c.memory.nu);
        p[7] = format_double(res.estimate.sigma_star);
        break;
      case Protocol::kSimonDuan:
        p[0] = format_double(c.simon_duan.r);
        p[3] = format_double(c.simon_duan.eta);
        p[6] = format_double(c.simon_duan.epsilon);
        break;
    }
    out << index++ << ',' << to_string(c.protocol);
    for (const auto& field : p) out << ',' << field;
    const WitnessEstimate& e = res.estimate;
    out << ',' << format_double(e.value) << ',' << format_double(e.std_error) << ',' << format_double(e.threshold)
        << ',' << format_double(res.expected) << ',' << (e.violated() ? "true" : "false") << ',' << e.n_total
        << '\n';
  }
}

int cmd_run(RunConfig c, const fs::path& out_dir, int threads) {
  const auto start = Clock::now();
  c.output = out_dir.string();
  const auto results = run_sweep(c, threads);
  prepare_dir(out_dir);
  {
    auto csv = open_output(out_dir / "results.csv");
    write_results_csv(csv, results);
  }

  json rows = json::array();
  bool any_violation = false;
  for (std::size_t i = 0; i < results.size(); ++i) {
    json row = estimate_json(results[i].estimate);
    row["point"] = i;
    row["expected"] = results[i].expected;
    for (const auto& axis : c.sweep) row[axis.parameter] = parameter_value(results[i].config, axis.parameter);
    any_violation = any_violation || results[i].estimate.violated();
    rows.push_back(row);
  }
  json summary;
  summary["config"] = to_json(c);
  summary["seed"] = c.seed;
  summary["kernel_isa"] = std::string(kernels::isa_name(kernels::active().isa));
  summary["results"] = rows;
  summary["verdict"] = any_violation ? "violated" : "not violated";
  summary["wall_time_s"] = seconds_since(start);
  write_json(out_dir / "summary.json", summary);

  {
    auto gp = open_output(out_dir / "plot.gp");
    gp << "set datafile separator ','\nset key autotitle columnhead\nset ylabel 'witness'\n";
    if (c.sweep.empty()) {
      gp << "set xlabel 'point'\nplot 'results.csv' using 1:14:15 with yerrorbars title 'witness', \\\n"
            "     '' using 1:16 with linespoints title 'threshold', '' using 1:17 with lines title 'expected'\n";
    } else {
      const int col = results_column(c.protocol, c.sweep.front().parameter);
      gp << "set xlabel '" << c.sweep.front().parameter << "'\n";
      if (c.sweep.front().log) gp << "set logscale x\n";
      gp << "plot 'results.csv' using " << col << ":14:15 with yerrorbars title 'witness', \\\n"
         << "     '' using " << col << ":16 with linespoints title 'threshold', '' using " << col
         << ":17 with lines title 'expected'\n";
    }
  }
  std::cout << results.size() << " point(s) written to " << out_dir.string() << " ("
            << (any_violation ? "violation" : "no violation") << ")\n";
  return 0;
}

int cmd_region(RunConfig c, const fs::path& out_dir, int threads) {
  const auto start = Clock::now();
  c.output = out_dir.string();
  const RegionModel model(c);
  const RegionGrid grid = evaluate_region(model);
  std::vector<double> diff(grid.expected.size());
  for (std::size_t k = 0; k < diff.size(); ++k) diff[k] = grid.expected[k] - grid.threshold[k];
  for (double d : diff) {
    if (!std::isfinite(d)) throw InfeasibleError("region: non-finite value on the grid");
  }
  const auto lines = zero_contour(grid.v1, grid.v2, diff, [&](double a, double b) { return model.difference(a, b); });

  prepare_dir(out_dir);
  std::size_t negative = 0;
  {
    auto csv = open_output(out_dir / "region.csv");
    csv << kRegionHeader << '\n';
    for (std::size_t i = 0; i < grid.v1.size(); ++i) {
      for (std::size_t j = 0; j < grid.v2.size(); ++j) {
        const std::size_t k = i * grid.v2.size() + j;
        if (diff[k] < 0.0) ++negative;
        csv << i << ',' << j << ',' << format_double(grid.v1[i]) << ',' << format_double(grid.v2[j]) << ','
            << format_double(grid.expected[k]) << ',' << format_double(grid.threshold[k]) << ','
            << format_double(diff[k]) << '\n';
      }
    }
  }
  double max_residual = 0.0;
  std::size_t n_vertices = 0;
  {
    auto csv = open_output(out_dir / "contour.csv");
    csv << kContourHeader << '\n';
    for (std::size_t l = 0; l < lines.size(); ++l) {
      for (std::size_t v = 0; v < lines[l].size(); ++v) {
        const auto& p = lines[l][v];
        max_residual = std::max(max_residual, std::abs(p.residual));
        ++n_vertices;
        csv << l << ',' << v << ',' << format_double(p.a1) << ',' << format_double(p.a2) << ','
            << format_double(p.residual) << '\n';
      }
    }
  }

  json spots = json::array();
  if (!c.region->spot_checks.empty()) {
    auto csv = open_output(out_dir / "spot_checks.csv");
    csv << kSpotCheckHeader << '\n';
    for (const auto& [i, j] : c.region->spot_checks) {
      RunConfig point = c;
      point.sweep.clear();
      const double a1 = grid.v1[static_cast<std::size_t>(i)];
      const double a2 = grid.v2[static_cast<std::size_t>(j)];
      apply_parameter(point, c.region->axis1.parameter, a1);
      apply_parameter(point, c.region->axis2.parameter, a2);
      finalize(point);
      const PointResult res = run_point(point, threads);
      const std::size_t k = static_cast<std::size_t>(i) * grid.v2.size() + static_cast<std::size_t>(j);
      const WitnessEstimate& e = res.estimate;
      csv << i << ',' << j << ',' << format_double(a1) << ',' << format_double(a2) << ',' << format_double(e.value)
          << ',' << format_double(e.std_error) << ',' << format_double(e.threshold) << ','
          << format_double(grid.expected[k]) << ',' << (e.violated() ? "true" : "false") << ',' << e.n_total
          << '\n';
      json s = estimate_json(e);
      s["i"] = i;
      s["j"] = j;
      s["expected"] = grid.expected[k];
      spots.push_back(s);
    }
  }

  json summary;
  summary["config"] = to_json(c);
  summary["seed"] = c.seed;
  summary["axis1"] = model.axis1().parameter;
  summary["axis2"] = model.axis2().parameter;
  summary["cells"] = diff.size();
  summary["negative_cells"] = negative;
  summary["polylines"] = lines.size();
  summary["contour_vertices"] = n_vertices;
  summary["max_contour_residual"] = max_residual;
  summary["spot_checks"] = spots;
  summary["wall_time_s"] = seconds_since(start);
  write_json(out_dir / "summary.json", summary);

  {
    auto gp = open_output(out_dir / "plot.gp");
    gp << "set datafile separator ','\n"
       << "set xlabel '" << model.axis1().parameter << "'\nset ylabel '" << model.axis2().parameter << "'\n"
       << "set cblabel 'expected - threshold'\nset palette defined (-1 'blue', 0 'white', 1 'red')\n"
       << "plot 'region.csv' using 3:4:7 every ::1 with image notitle, \\\n"
       << "     'contour.csv' using 3:4 every ::1 with points pt 7 ps 0.3 lc 'black' notitle\n";
  }
  std::cout << negative << " of " << diff.size() << " cells below threshold, " << lines.size()
            << " contour polyline(s) written to " << out_dir.string() << '\n';
  return 0;
}

OracleComparison compare_with_oracle(const RunConfig& c, int threads, double n_se) {
  return infeasible_guard([&] {
    OracleComparison cmp;
    const EstimateOptions options{threads, c.violation_k};
    switch (c.protocol) {
      case Protocol::kEw:
        cmp.engine = estimate_mdiew(c.ew, options);
        cmp.oracle = oracle_ew_witness(c.ew, options);
        break;
      case Protocol::kMemory:
        cmp.engine = estimate_mdiep(c.memory, options);
        cmp.oracle = oracle_memory_witness(c.memory, options);
        break;
      case Protocol::kSimonDuan:
        throw ConfigError("oracle-check: not available for protocol simon-duan");
    }
    cmp.combined_se = std::hypot(cmp.engine.std_error, cmp.oracle.std_error);
    cmp.z = (cmp.engine.value - cmp.oracle.value) / cmp.combined_se;
    cmp.pass = std::abs(cmp.z) <= n_se;
    if (c.protocol == Protocol::kMemory) {
      const double plus = mdiep_expected(c.memory.eta, c.memory.xi, MdiepVariant::kPlus);
      const double minus = mdiep_expected(c.memory.eta, c.memory.xi, MdiepVariant::kMinus);
      cmp.z_plus = (cmp.oracle.value - plus) / cmp.oracle.std_error;
      cmp.z_minus = (cmp.oracle.value - minus) / cmp.oracle.std_error;
      cmp.variant_separation = (plus - minus) / cmp.oracle.std_error;
      if (c.memory.xi == 0.0) {
        cmp.matched_variant = "either";
      } else {
        cmp.matched_variant = std::abs(cmp.z_plus) < std::abs(cmp.z_minus) ? "plus" : "minus";
      }
    }
    return cmp;
  });
}

int cmd_oracle_check(RunConfig c, const fs::path& out_dir, int threads) {
  const auto start = Clock::now();
  c.output = out_dir.string();
  const auto points = expand_sweep(c);
  std::vector<OracleComparison> results;
  for (const RunConfig& p : points) results.push_back(compare_with_oracle(p, threads));

  prepare_dir(out_dir);
  bool all_pass = true;
  json rows = json::array();
  {
    auto csv = open_output(out_dir / "oracle_check.csv");
    csv << kOracleHeader << '\n';
    for (std::size_t i = 0; i < results.size(); ++i) {
      const auto& r = results[i];
      const RunConfig& p = points[i];
      all_pass = all_pass && r.pass;
      const bool memory = p.protocol == Protocol::kMemory;
      csv << i << ',' << format_double(r.engine.value) << ',' << format_double(r.engine.std_error) << ','
          << format_double(r.oracle.value) << ',' << format_double(r.oracle.std_error) << ','
          << format_double(r.combined_se) << ',' << format_double(r.z) << ',' << (r.pass ? "true" : "false");
      if (memory) {
        csv << ',' << format_double(mdiep_expected(p.memory.eta, p.memory.xi, MdiepVariant::kPlus)) << ','
            << format_double(mdiep_expected(p.memory.eta, p.memory.xi, MdiepVariant::kMinus)) << ','
            << format_double(r.z_plus) << ',' << format_double(r.z_minus) << ',' << r.matched_variant << '\n';
      } else {
        csv << ",,,,,\n";
      }
      json row{{"point", i},
               {"engine", estimate_json(r.engine)},
               {"oracle", estimate_json(r.oracle)},
               {"combined_se", r.combined_se},
               {"z", r.z},
               {"pass", r.pass}};
      if (memory) {
        row["z_plus"] = r.z_plus;
        row["z_minus"] = r.z_minus;
        row["variant_separation_se"] = r.variant_separation;
        row["matched_variant"] = r.matched_variant;
      }
      for (const auto& axis : c.sweep) row[axis.parameter] = parameter_value(p, axis.parameter);
      rows.push_back(row);
      std::cout << "point " << i << ": engine " << format_double(r.engine.value) << " oracle "
                << format_double(r.oracle.value) << " z " << format_double(r.z) << (r.pass ? " PASS" : " FAIL");
      if (memory) std::cout << " variant " << r.matched_variant;
      std::cout << '\n';
    }
  }
  json summary;
  summary["config"] = to_json(c);
  summary["seed"] = c.seed;
  summary["tolerance_se"] = 4.0;
  summary["results"] = rows;
  summary["pass"] = all_pass;
  summary["wall_time_s"] = seconds_since(start);
  write_json(out_dir / "summary.json", summary);
  return 0;
}

namespace {

std::array<std::array<double, 2>, 2> parse_matrix(const json& v) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_array() || v[0].size() != 2 || !v[1].is_array() ||
      v[1].size() != 2) {
    throw ConfigError("calibrate.synthetic.response: expected a 2x2 array");
  }
  std::array<std::array<double, 2>, 2> m{};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      if (!v[i][j].is_number()) throw ConfigError("calibrate.synthetic.response: expected numbers");
      m[i][j] = v[i][j].get<double>();
    }
  }
  return m;
}

std::array<double, 2> parse_pair(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    throw ConfigError(where + ": expected [number, number]");
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

std::vector<CalibrationSample> read_samples_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("calibrate: cannot open samples file '" + path.string() + "'");
  std::vector<CalibrationSample> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (lineno == 1 && line.find_first_of("0123456789") != 0 && line[0] != '-' && line[0] != '.' &&
        line[0] != '+') {
      continue;  // header row
    }
    std::array<double, 4> v{};
    std::istringstream ss(line);
    std::string cell;
    int k = 0;
    while (std::getline(ss, cell, ',') && k < 4) {
      try {
        std::size_t used = 0;
        v[static_cast<std::size_t>(k)] = std::stod(cell, &used);
      } catch (const std::exception&) {
        throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": not a number '" + cell + "'");
      }
      ++k;
    }
    if (k != 4) throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": expected 4 columns");
    out.push_back({v[0], v[1], v[2], v[3]});
  }
  return out;
}

}  // namespace

int cmd_calibrate(const json& doc, const fs::path& out_dir) {
  if (!doc.is_object()) throw ConfigError("calibrate: config must be a JSON object");
  for (const auto& item : doc.items()) {
    static const std::set<std::string> allowed{"samples", "samples_csv", "synthetic", "targets", "seed", "output"};
    if (!allowed.count(item.key())) throw ConfigError("calibrate: unknown key '" + item.key() + "'");
  }
  const int sources = static_cast<int>(doc.contains("samples")) + static_cast<int>(doc.contains("samples_csv")) +
                      static_cast<int>(doc.contains("synthetic"));
  if (sources != 1) throw ConfigError("calibrate: give exactly one of samples, samples_csv, synthetic");
  std::uint64_t seed = 1;
  if (doc.contains("seed")) {
    if (!doc.at("seed").is_number_integer() || doc.at("seed").get<std::int64_t>() < 0) {
      if (!doc.at("seed").is_number_unsigned()) throw ConfigError("calibrate.seed: expected a non-negative integer");
    }
    seed = doc.at("seed").get<std::uint64_t>();
  }

  std::vector<CalibrationSample> samples;
  if (doc.contains("samples")) {
    const json& s = doc.at("samples");
    if (!s.is_array()) throw ConfigError("calibrate.samples: expected an array of [V_IM, V_PM, alpha_x, alpha_p]");
    for (const json& row : s) {
      if (!row.is_array() || row.size() != 4) throw ConfigError("calibrate.samples: each row needs 4 numbers");
      std::array<double, 4> v{};
      for (std::size_t k = 0; k < 4; ++k) {
        if (!row[k].is_number()) throw ConfigError("calibrate.samples: each row needs 4 numbers");
        v[k] = row[k].get<double>();
      }
      samples.push_back({v[0], v[1], v[2], v[3]});
    }
  } else if (doc.contains("samples_csv")) {
    if (!doc.at("samples_csv").is_string()) throw ConfigError("calibrate.samples_csv: expected a path");
    samples = read_samples_csv(doc.at("samples_csv").get<std::string>());
  } else {
    const json& s = doc.at("synthetic");
    if (!s.is_object()) throw ConfigError("calibrate.synthetic: expected an object");
    SyntheticCalibration spec;
    for (const auto& item : s.items()) {
      const std::string& key = item.key();
      const json& v = item.value();
      if (key == "response") {
        spec.response = parse_matrix(v);
      } else if (key == "offset") {
        spec.offset = parse_pair(v, "calibrate.synthetic.offset");
      } else if (key == "noise" || key == "voltage_range") {
        if (!v.is_number()) throw ConfigError("calibrate.synthetic." + key + ": expected a number");
        (key == "noise" ? spec.noise : spec.voltage_range) = v.get<double>();
      } else if (key == "n_points") {
        if (!v.is_number_integer()) throw ConfigError("calibrate.synthetic.n_points: expected an integer");
        spec.n_points = v.get<int>();
      } else {
        throw ConfigError("calibrate.synthetic: unknown key '" + key + "'");
      }
    }
    samples = infeasible_guard([&] { return synthetic_samples(spec, seed); });
  }

  std::vector<std::array<double, 2>> targets;
  if (doc.contains("targets")) {
    if (!doc.at("targets").is_array()) throw ConfigError("calibrate.targets: expected an array of [alpha_x, alpha_p]");
    for (const json& t : doc.at("targets")) targets.push_back(parse_pair(t, "calibrate.targets"));
  }

  const CalibrationFit fit = infeasible_guard([&] { return fit_calibration(samples); });

  prepare_dir(out_dir);
  {
    auto csv = open_output(out_dir / "calibration.csv");
    csv << kCalibrationHeader << '\n';
    for (std::size_t k = 0; k < samples.size(); ++k) {
      const auto& s = samples[k];
      const auto f = fit.predict(s.v_im, s.v_pm);
      csv << k << ',' << format_double(s.v_im) << ',' << format_double(s.v_pm) << ',' << format_double(s.alpha_x)
          << ',' << format_double(s.alpha_p) << ',' << format_double(f[0]) << ',' << format_double(f[1]) << '\n';
    }
  }
  json compensated = json::array();
  for (const auto& t : targets) {
    const auto v = fit.invert(t[0], t[1]);
    const auto back = fit.predict(v[0], v[1]);
    compensated.push_back(json{{"alpha_x", t[0]},
                               {"alpha_p", t[1]},
                               {"v_im", v[0]},
                               {"v_pm", v[1]},
                               {"replay_residual", std::hypot(back[0] - t[0], back[1] - t[1])}});
  }
  json summary{{"config", doc},
               {"n_samples", fit.n_samples},
               {"response", fit.response},
               {"response_se", fit.response_se},
               {"offset", fit.offset},
               {"offset_se", fit.offset_se},
               {"residual_rms", fit.residual_rms},
               {"compensated", compensated}};
  write_json(out_dir / "summary.json", summary);
  std::cout << "fit " << fit.n_samples << " samples, residual rms " << format_double(fit.residual_rms) << '\n';
  return 0;
}

}  // namespace mdicert::experiments
