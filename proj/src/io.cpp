// Copyright 2026 The cstomo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cstomo/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "cstomo/digest.hpp"

namespace cstomo::io {
namespace {

constexpr const char* kBasisOrder = "f=3 block then f=4 block, m ascending";

template <typename T>
T get_or(const Json& doc, const char* key, const T& fallback) {
  if (!doc.is_object() || !doc.contains(key) || doc.at(key).is_null()) return fallback;
  return doc.at(key).get<T>();
}

std::uint64_t parse_hex(const std::string& s) {
  try {
    return std::stoull(s, nullptr, 16);
  } catch (const std::exception&) {
    throw FormatError("malformed digest '" + s + "'");
  }
}

std::string csv_preamble(std::uint64_t config_digest, const char* header) {
  return std::string("# config_digest: ") + hex_digest(config_digest) + "\n" + header + "\n";
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

double parse_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str()) throw FormatError("malformed number '" + s + "'");
  return v;
}

// Non-comment, non-empty lines of a CSV; the first one is the header.
std::vector<std::string> csv_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    lines.push_back(line);
  }
  return lines;
}

}  // namespace

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot write " + path.string());
  out << text;
  out.flush();
  if (!out) throw FormatError("write failed for " + path.string());
}

Json read_json(const std::filesystem::path& path) {
  try {
    return Json::parse(read_text(path));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_json(const std::filesystem::path& path, const Json& doc) { write_text(path, doc.dump(2) + "\n"); }

std::uint64_t config_digest(const Json& config) {
  Fnv1a h;
  h.bytes(config.dump());
  return h.value();
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Json operator_to_json(const Operator& op) {
  Json re = Json::array(), im = Json::array();
  for (Eigen::Index j = 0; j < op.rows(); ++j) {
    for (Eigen::Index k = 0; k < op.cols(); ++k) {
      re.push_back(op(j, k).real());
      im.push_back(op(j, k).imag());
    }
  }
  Json doc;
  doc["dim"] = op.rows();
  doc["re"] = std::move(re);
  doc["im"] = std::move(im);
  doc["basis_order"] = kBasisOrder;
  return doc;
}

Operator operator_from_json(const Json& doc) {
  try {
    const int d = doc.at("dim").get<int>();
    const auto re = doc.at("re").get<std::vector<double>>();
    const auto im = doc.at("im").get<std::vector<double>>();
    if (d < 1 || re.size() != static_cast<std::size_t>(d) * d || im.size() != re.size()) {
      throw FormatError("operator document: re/im must hold dim*dim entries");
    }
    Operator op(d, d);
    for (int j = 0; j < d; ++j) {
      for (int k = 0; k < d; ++k) op(j, k) = Complex(re[j * d + k], im[j * d + k]);
    }
    return op;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("operator document: ") + e.what());
  }
}

Json density_to_json(const DensityMatrix& rho) { return operator_to_json(rho.matrix()); }

DensityMatrix density_from_json(const Json& doc) { return DensityMatrix(operator_from_json(doc)); }

Json waveforms_to_json(const ControlWaveforms& w) {
  Json doc;
  doc["T_us"] = w.T_us;
  doc["seed"] = w.seed;
  doc["rf_step_us"] = kRfStepUs;
  doc["uw_step_us"] = kUwStepUs;
  doc["phi_x"] = w.phi_x;
  doc["phi_y"] = w.phi_y;
  doc["phi_uw"] = w.phi_uw;
  return doc;
}

ControlWaveforms waveforms_from_json(const Json& doc) {
  try {
    ControlWaveforms w;
    w.T_us = doc.at("T_us").get<double>();
    w.seed = doc.at("seed").get<std::uint64_t>();
    w.phi_x = doc.at("phi_x").get<std::vector<double>>();
    w.phi_y = doc.at("phi_y").get<std::vector<double>>();
    w.phi_uw = doc.at("phi_uw").get<std::vector<double>>();
    w.validate();
    return w;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("waveform document: ") + e.what());
  }
}

Json inhomogeneity_to_json(const InhomogeneityModel& m) {
  Json doc;
  doc["enabled"] = m.enabled;
  doc["spread"] = m.spread;
  doc["n_samples"] = m.n_samples();
  return doc;
}

InhomogeneityModel inhomogeneity_from_json(const Json& doc) {
  const bool enabled = get_or(doc, "enabled", false);
  if (!enabled) return InhomogeneityModel::disabled();
  return InhomogeneityModel::gauss_hermite(get_or(doc, "spread", 0.0), get_or(doc, "n_samples", 7));
}

Json model_to_json(const ModelDescriptor& model) {
  const ControlParams& p = model.params;
  Json doc;
  doc["omega_rf_rad_per_s"] = p.omega_rf_rad_per_s;
  doc["omega_uw_rad_per_s"] = p.omega_uw_rad_per_s;
  doc["detunings"] = {{"rf_rad_per_s", p.detuning_rf_rad_per_s}, {"uw_rad_per_s", p.detuning_uw_rad_per_s}};
  doc["g_ratio"] = p.g_ratio;
  doc["inhomogeneity"] = inhomogeneity_to_json(model.inhomogeneity);
  return doc;
}

ModelDescriptor model_from_json(const Json& doc, const ModelDescriptor& base) {
  try {
    ModelDescriptor m = base;
    m.params.omega_rf_rad_per_s = get_or(doc, "omega_rf_rad_per_s", m.params.omega_rf_rad_per_s);
    m.params.omega_uw_rad_per_s = get_or(doc, "omega_uw_rad_per_s", m.params.omega_uw_rad_per_s);
    if (doc.contains("detunings")) {
      const Json& det = doc.at("detunings");
      m.params.detuning_rf_rad_per_s = get_or(det, "rf_rad_per_s", m.params.detuning_rf_rad_per_s);
      m.params.detuning_uw_rad_per_s = get_or(det, "uw_rad_per_s", m.params.detuning_uw_rad_per_s);
    }
    m.params.g_ratio = get_or(doc, "g_ratio", m.params.g_ratio);
    if (doc.contains("inhomogeneity")) m.inhomogeneity = inhomogeneity_from_json(doc.at("inhomogeneity"));
    m.params.validate();
    m.inhomogeneity.validate();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("params document: ") + e.what());
  }
}

Json solver_to_json(const SolverConfig& c) {
  Json doc;
  doc["max_iterations"] = c.max_iterations;
  doc["objective_tol"] = c.objective_tol;
  doc["kkt_tol"] = c.kkt_tol;
  doc["power_iterations"] = c.power_iterations;
  doc["epsilon_rel_tol"] = c.epsilon_rel_tol;
  doc["max_multiplier_steps"] = c.max_multiplier_steps;
  doc["restart"] = c.restart;
  return doc;
}

SolverConfig solver_from_json(const Json& doc, const SolverConfig& base) {
  try {
    SolverConfig c = base;
    c.max_iterations = get_or(doc, "max_iterations", c.max_iterations);
    c.objective_tol = get_or(doc, "objective_tol", c.objective_tol);
    c.kkt_tol = get_or(doc, "kkt_tol", c.kkt_tol);
    c.power_iterations = get_or(doc, "power_iterations", c.power_iterations);
    c.epsilon_rel_tol = get_or(doc, "epsilon_rel_tol", c.epsilon_rel_tol);
    c.max_multiplier_steps = get_or(doc, "max_multiplier_steps", c.max_multiplier_steps);
    c.restart = get_or(doc, "restart", c.restart);
    c.validate();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("solver document: ") + e.what());
  }
}

Json suite_config_to_json(const SuiteConfig& c) {
  Json doc;
  doc["n_states"] = c.n_states;
  doc["T_total_us"] = c.T_total_us;
  doc["T_grid_us"] = c.T_grid_us;
  doc["calibration_T_grid_us"] = c.calibration_T_grid_us;
  doc["sample_dt_us"] = c.sample_dt_us;
  doc["K"] = c.K;
  doc["sigma"] = c.sigma;
  doc["waveform_seed"] = c.waveform_seed;
  doc["state_seed"] = c.state_seed;
  doc["noise_seed"] = c.noise_seed;
  doc["truth"] = model_to_json(c.truth);
  doc["reconstruction"] = model_to_json(c.reconstruction);
  doc["solver"] = solver_to_json(c.solver);
  doc["keep_estimates"] = c.keep_estimates;
  return doc;
}

SuiteConfig suite_config_from_json(const Json& doc, const SuiteConfig& base) {
  try {
    SuiteConfig c = base;
    c.n_states = get_or(doc, "n_states", c.n_states);
    c.T_total_us = get_or(doc, "T_total_us", c.T_total_us);
    c.T_grid_us = get_or(doc, "T_grid_us", c.T_grid_us);
    c.calibration_T_grid_us = get_or(doc, "calibration_T_grid_us", c.calibration_T_grid_us);
    c.sample_dt_us = get_or(doc, "sample_dt_us", c.sample_dt_us);
    c.K = get_or(doc, "K", c.K);
    c.sigma = get_or(doc, "sigma", c.sigma);
    c.waveform_seed = get_or(doc, "waveform_seed", c.waveform_seed);
    c.state_seed = get_or(doc, "state_seed", c.state_seed);
    c.noise_seed = get_or(doc, "noise_seed", c.noise_seed);
    if (doc.contains("truth")) c.truth = model_from_json(doc.at("truth"), c.truth);
    if (doc.contains("reconstruction")) c.reconstruction = model_from_json(doc.at("reconstruction"), c.reconstruction);
    if (doc.contains("solver")) c.solver = solver_from_json(doc.at("solver"), c.solver);
    c.keep_estimates = get_or(doc, "keep_estimates", c.keep_estimates);
    c.threads = get_or(doc, "threads", c.threads);
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("config document: ") + e.what());
  }
}

std::string record_csv(const MeasurementRecord& record, std::uint64_t config_digest) {
  std::string out = csv_preamble(config_digest, "t_us,M");
  for (std::size_t i = 0; i < record.size(); ++i) {
    out += format_double(record.times_us[i]);
    out += ',';
    out += format_double(record.values[i]);
    out += '\n';
  }
  return out;
}

Json record_sidecar(const MeasurementRecord& record, std::uint64_t config_digest) {
  Json doc;
  doc["K"] = record.K;
  doc["sigma"] = record.sigma;
  doc["noise_seed"] = record.noise_seed;
  doc["n_samples"] = record.size();
  doc["series_digest"] = hex_digest(record.series_digest);
  doc["config_digest"] = hex_digest(config_digest);
  return doc;
}

std::filesystem::path sidecar_path(const std::filesystem::path& csv_path) {
  return std::filesystem::path(csv_path.string() + ".json");
}

void write_record(const std::filesystem::path& csv_path, const MeasurementRecord& record,
                  std::uint64_t config_digest) {
  write_text(csv_path, record_csv(record, config_digest));
  write_json(sidecar_path(csv_path), record_sidecar(record, config_digest));
}

MeasurementRecord read_record(const std::filesystem::path& csv_path) {
  const auto lines = csv_lines(read_text(csv_path));
  if (lines.empty() || lines.front() != "t_us,M") {
    throw FormatError(csv_path.string() + ": expected header 't_us,M'");
  }
  MeasurementRecord rec;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto cells = split(lines[i], ',');
    if (cells.size() != 2) throw FormatError(csv_path.string() + ": malformed row " + std::to_string(i));
    rec.times_us.push_back(parse_double(cells[0]));
    rec.values.push_back(parse_double(cells[1]));
  }
  const auto side = sidecar_path(csv_path);
  if (std::filesystem::exists(side)) {
    const Json doc = read_json(side);
    rec.K = get_or(doc, "K", 1.0);
    rec.sigma = get_or(doc, "sigma", 0.0);
    rec.noise_seed = get_or<std::uint64_t>(doc, "noise_seed", 0);
    if (doc.contains("series_digest")) rec.series_digest = parse_hex(doc.at("series_digest").get<std::string>());
  }
  try {
    rec.validate();
  } catch (const std::invalid_argument& e) {
    throw FormatError(csv_path.string() + ": " + e.what());
  }
  return rec;
}

Json estimate_to_json(const Estimate& e, std::uint64_t config_digest) {
  Json doc = density_to_json(e.rho_bar);
  doc["estimator"] = to_string(e.kind);
  doc["diagnostics"] = {{"residual", e.residual},
                        {"iterations", e.iterations},
                        {"multiplier", e.multiplier},
                        {"pre_normalization_trace", e.pre_normalization_trace},
                        {"constraint_residual", e.constraint_residual},
                        {"converged", e.converged}};
  doc["config_digest"] = hex_digest(config_digest);
  return doc;
}

Estimate estimate_from_json(const Json& doc) {
  try {
    Estimate e;
    e.kind = estimator_from_string(doc.at("estimator").get<std::string>());
    e.rho_bar = density_from_json(doc);
    const Json& d = doc.at("diagnostics");
    e.residual = d.at("residual").get<double>();
    e.iterations = d.at("iterations").get<int>();
    e.multiplier = d.at("multiplier").get<double>();
    e.pre_normalization_trace = d.at("pre_normalization_trace").get<double>();
    e.constraint_residual = d.at("constraint_residual").get<double>();
    e.converged = d.at("converged").get<bool>();
    return e;
  } catch (const nlohmann::json::exception& ex) {
    throw FormatError(std::string("estimate document: ") + ex.what());
  }
}

Json epsilon_rule_to_json(const EpsilonRule& rule, std::uint64_t config_digest) {
  Json doc;
  doc["slope"] = rule.slope;
  doc["intercept"] = rule.intercept;
  Json cal;
  cal["T_us"] = rule.calibration_T_us;
  cal["samples"] = rule.calibration_samples;
  cal["epsilon"] = rule.calibration_epsilon;
  cal["fidelity"] = rule.calibration_fidelity;
  cal["fit_relative_residual"] = rule.fit_relative_residual;
  doc["calibration"] = std::move(cal);
  doc["config_digest"] = hex_digest(config_digest);
  return doc;
}

EpsilonRule epsilon_rule_from_json(const Json& doc) {
  try {
    EpsilonRule rule;
    rule.slope = doc.at("slope").get<double>();
    rule.intercept = doc.at("intercept").get<double>();
    if (doc.contains("calibration")) {
      const Json& cal = doc.at("calibration");
      rule.calibration_T_us = get_or(cal, "T_us", std::vector<double>{});
      rule.calibration_samples = get_or(cal, "samples", std::vector<double>{});
      rule.calibration_epsilon = get_or(cal, "epsilon", std::vector<double>{});
      rule.calibration_fidelity = get_or(cal, "fidelity", std::vector<double>{});
      rule.fit_relative_residual = get_or(cal, "fit_relative_residual", 0.0);
    }
    return rule;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("epsilon rule document: ") + e.what());
  }
}

std::string curves_csv(const FidelityCurves& curves, std::uint64_t config_digest) {
  std::string out = csv_preamble(config_digest, "T_ms,F_CS,sd_CS,F_LS,sd_LS,n_states");
  for (std::size_t k = 0; k < curves.T_us.size(); ++k) {
    const int n = std::min(curves.cs_stats.count[k], curves.ls_stats.count[k]);
    out += format_double(curves.T_us[k] / 1000.0) + ',' + format_double(curves.cs_stats.mean[k]) + ',' +
           format_double(curves.cs_stats.sd[k]) + ',' + format_double(curves.ls_stats.mean[k]) + ',' +
           format_double(curves.ls_stats.sd[k]) + ',' + std::to_string(n) + '\n';
  }
  return out;
}

std::string per_state_csv(const FidelityCurves& curves, std::uint64_t config_digest) {
  std::string out = csv_preamble(config_digest, "state,T_ms,F_CS,F_LS");
  for (std::size_t s = 0; s < curves.state_index.size(); ++s) {
    for (std::size_t k = 0; k < curves.T_us.size(); ++k) {
      out += std::to_string(curves.state_index[s]) + ',' + format_double(curves.T_us[k] / 1000.0) + ',' +
             format_double(curves.cs[s][k]) + ',' + format_double(curves.ls[s][k]) + '\n';
    }
  }
  return out;
}

std::string eta_csv(const ErrorPenalty& eta, std::uint64_t config_digest) {
  std::string out = csv_preamble(config_digest, "T_ms,eta_CS,eta_LS");
  for (std::size_t k = 0; k < eta.T_us.size(); ++k) {
    out += format_double(eta.T_us[k] / 1000.0) + ',' + format_double(eta.cs[k]) + ',' + format_double(eta.ls[k]) +
           '\n';
  }
  return out;
}

std::string fits_csv(const std::vector<NamedFit>& fits, std::uint64_t config_digest) {
  std::string out = csv_preamble(config_digest, "estimator,tau_ms,residual");
  for (const auto& f : fits) {
    out += f.estimator + ',' + format_double(f.fit.tau_ms) + ',' + format_double(f.fit.relative_residual) + '\n';
  }
  return out;
}

CurveTable read_curves_csv(const std::filesystem::path& path) {
  const auto lines = csv_lines(read_text(path));
  if (lines.empty() || lines.front().rfind("T_ms,F_CS,sd_CS,F_LS,sd_LS", 0) != 0) {
    throw FormatError(path.string() + ": not a curves table");
  }
  CurveTable t;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto cells = split(lines[i], ',');
    if (cells.size() < 5) throw FormatError(path.string() + ": malformed row " + std::to_string(i));
    t.T_ms.push_back(parse_double(cells[0]));
    t.cs_mean.push_back(parse_double(cells[1]));
    t.ls_mean.push_back(parse_double(cells[3]));
  }
  return t;
}

}  // namespace cstomo::io
