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

// cstomo: command-line front end for continuous-measurement tomography runs.
//
// Exit codes: 0 success, 2 usage / invalid argument, 3 solver failure,
// 4 file or format error. Failures print "error-class: <tag>" on stderr.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "cstomo/control_dynamics.hpp"
#include "cstomo/convex_estimators.hpp"
#include "cstomo/digest.hpp"
#include "cstomo/io.hpp"
#include "cstomo/measurement_record.hpp"
#include "cstomo/rng.hpp"
#include "cstomo/spin_model.hpp"
#include "cstomo/tomography_pipeline.hpp"

namespace fs = std::filesystem;
using cstomo::io::Json;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitSolver = 3;
constexpr int kExitIo = 4;
constexpr int kDefaultQuadrature = 5;
/// Truth-model rf spread used by `mismatch` when neither the config nor --spread sets one.
constexpr double kDefaultMismatchSpread = 0.02;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Suite-style parameters: a config file plus flag overrides (flags win).
struct ConfigFlags {
  std::string config_path;
  std::optional<int> n_states;
  std::optional<double> T_total_us;
  std::vector<double> T_grid_us;
  std::vector<double> calibration_T_grid_us;
  std::optional<double> sample_dt_us;
  std::optional<double> K;
  std::optional<double> sigma;
  std::optional<std::uint64_t> waveform_seed;
  std::optional<std::uint64_t> state_seed;
  std::optional<std::uint64_t> noise_seed;
  std::optional<double> spread;
  std::optional<int> quadrature;
  std::optional<int> threads;
  bool keep_estimates = false;

  void attach(CLI::App* app) {
    app->add_option("--config", config_path, "JSON configuration file")->check(CLI::ExistingFile);
    app->add_option("--n-states", n_states, "States per run (first one calibrates epsilon)");
    app->add_option("--T-total-us", T_total_us, "Total record length (us)");
    app->add_option("--T-grid-us", T_grid_us, "Record lengths to evaluate (us, comma separated)")->delimiter(',');
    app->add_option("--calibration-T-grid-us", calibration_T_grid_us, "Record lengths for epsilon calibration")
        ->delimiter(',');
    app->add_option("--dt-us", sample_dt_us, "Sample spacing (us)");
    app->add_option("--K", K, "Probe gain");
    app->add_option("--sigma", sigma, "Per-sample noise standard deviation");
    app->add_option("--waveform-seed", waveform_seed, "Seed of the random control phases");
    app->add_option("--state-seed", state_seed, "Seed of the Haar-random states");
    app->add_option("--noise-seed", noise_seed, "Seed of the measurement noise");
    app->add_option("--spread", spread, "Relative rf-amplitude spread of the truth model (0 disables)");
    app->add_option("--quadrature", quadrature, "Gauss-Hermite points for the inhomogeneity average");
    app->add_option("--threads", threads, "Worker threads (0 = hardware concurrency)");
    app->add_flag("--keep-estimates", keep_estimates, "Write every (state, T) estimate");
  }

  cstomo::SuiteConfig resolve() const {
    cstomo::SuiteConfig c;
    bool explicit_grid = !T_grid_us.empty();
    if (!config_path.empty()) {
      const Json doc = cstomo::io::read_json(config_path);
      explicit_grid = explicit_grid || doc.contains("T_grid_us");
      c = cstomo::io::suite_config_from_json(doc);
    }
    if (n_states) c.n_states = *n_states;
    if (T_total_us) c.T_total_us = *T_total_us;
    if (!T_grid_us.empty()) c.T_grid_us = T_grid_us;
    if (!explicit_grid) {
      // The default grid follows a shortened record.
      std::erase_if(c.T_grid_us, [&](double T) { return T > c.T_total_us + 1e-9; });
      if (c.T_grid_us.empty()) c.T_grid_us = {c.T_total_us};
    }
    if (!calibration_T_grid_us.empty()) c.calibration_T_grid_us = calibration_T_grid_us;
    if (sample_dt_us) c.sample_dt_us = *sample_dt_us;
    if (K) c.K = *K;
    if (sigma) c.sigma = *sigma;
    if (waveform_seed) c.waveform_seed = *waveform_seed;
    if (state_seed) c.state_seed = *state_seed;
    if (noise_seed) c.noise_seed = *noise_seed;
    if (spread || quadrature) {
      const double s = spread ? *spread : c.truth.inhomogeneity.spread;
      const int n = quadrature ? *quadrature
                               : (c.truth.inhomogeneity.enabled ? c.truth.inhomogeneity.n_samples()
                                                                : kDefaultQuadrature);
      c.truth.inhomogeneity =
          s > 0.0 ? cstomo::InhomogeneityModel::gauss_hermite(s, n) : cstomo::InhomogeneityModel::disabled();
    }
    if (threads) c.threads = *threads;
    if (keep_estimates) c.keep_estimates = true;
    c.validate();
    return c;
  }
};

/// Parses a state specification: "haar:<seed>", "mixed", "level:<f>,<m>" or a density JSON file.
cstomo::DensityMatrix parse_state(const std::string& spec, std::optional<cstomo::PureState>* pure = nullptr) {
  const auto space = cstomo::HilbertSpace::cesium_ground();
  if (spec == "mixed") return cstomo::DensityMatrix::maximally_mixed(space.dim());
  if (spec.rfind("haar:", 0) == 0) {
    const auto psi = cstomo::haar_random_pure_state(space.dim(), std::stoull(spec.substr(5)));
    if (pure) *pure = psi;
    return cstomo::DensityMatrix::from_pure(psi);
  }
  if (spec.rfind("level:", 0) == 0) {
    const auto comma = spec.find(',', 6);
    if (comma == std::string::npos) throw UsageError("level state needs 'level:<f>,<m>'");
    const double f = std::stod(spec.substr(6, comma - 6));
    const double m = std::stod(spec.substr(comma + 1));
    const auto psi = cstomo::PureState::basis(space.dim(), space.index(cstomo::Spin::from_double(f), m));
    if (pure) *pure = psi;
    return cstomo::DensityMatrix::from_pure(psi);
  }
  if (fs::exists(spec)) {
    const auto rho = cstomo::io::density_from_json(cstomo::io::read_json(spec));
    // A rank-one file also counts as a pure reference for fidelity reporting.
    if (pure) {
      Eigen::SelfAdjointEigenSolver<cstomo::Operator> es(rho.matrix());
      const Eigen::Index top = rho.dim() - 1;
      if (std::abs(es.eigenvalues()(top) - 1.0) < 1e-9) {
        *pure = cstomo::PureState::normalized(es.eigenvectors().col(top));
      }
    }
    return rho;
  }
  throw UsageError("unknown state '" + spec + "' (haar:<seed>, mixed, level:<f>,<m> or a JSON file)");
}

cstomo::ControlWaveforms load_or_generate_waveforms(const std::string& path, double T_us, std::uint64_t seed) {
  if (!path.empty()) return cstomo::io::waveforms_from_json(cstomo::io::read_json(path));
  return cstomo::random_waveforms(T_us, seed);
}

std::vector<double> to_ms(const std::vector<double>& T_us) {
  std::vector<double> out;
  for (double t : T_us) out.push_back(t / 1000.0);
  return out;
}

cstomo::io::NamedFit try_fit(const std::string& name, const std::vector<double>& T_ms, const std::vector<double>& F,
                             double window_ms) {
  cstomo::io::NamedFit nf{name, {}};
  try {
    nf.fit = cstomo::fit_exponential(T_ms, F, window_ms);
  } catch (const cstomo::FitError& e) {
    std::cerr << "warning: fit '" << name << "' failed: " << e.what() << "\n";
    nf.fit.tau_ms = std::nan("");
    nf.fit.relative_residual = std::nan("");
  }
  return nf;
}

void write_suite_outputs(const fs::path& dir, const cstomo::SuiteResult& r, std::uint64_t digest,
                         double window_ms, bool keep_estimates) {
  namespace io = cstomo::io;
  io::write_text(dir / "curves.csv", io::curves_csv(r.curves, digest));
  io::write_text(dir / "per_state.csv", io::per_state_csv(r.curves, digest));
  io::write_json(dir / "epsilon_rule.json", io::epsilon_rule_to_json(r.epsilon_rule, digest));
  const auto T_ms = to_ms(r.curves.T_us);
  io::write_text(dir / "fits.csv", io::fits_csv({try_fit("cs", T_ms, r.curves.cs_stats.mean, window_ms),
                                                 try_fit("ls", T_ms, r.curves.ls_stats.mean, window_ms)},
                                                digest));
  if (!keep_estimates) return;
  for (std::size_t s = 0; s < r.cs.size(); ++s) {
    for (std::size_t k = 0; k < r.curves.T_us.size(); ++k) {
      const std::string stem = "state" + std::to_string(r.curves.state_index[s]) + "_T" +
                               io::format_double(r.curves.T_us[k]) + "us";
      for (const auto* p : {&r.cs[s][k], &r.ls[s][k]}) {
        if (!p->estimate) continue;
        io::write_json(dir / "estimates" / (stem + "_" + cstomo::to_string(p->estimate->kind) + ".json"),
                       io::estimate_to_json(*p->estimate, digest));
      }
    }
  }
}

void print_peak(const char* label, const cstomo::FidelityCurves& c) {
  const auto kc = cstomo::peak_index(c.cs_stats);
  const auto kl = cstomo::peak_index(c.ls_stats);
  std::printf("%s: peak F_CS = %.6f at T = %g ms, peak F_LS = %.6f at T = %g ms\n", label, c.cs_stats.mean[kc],
              c.T_us[kc] / 1000.0, c.ls_stats.mean[kl], c.T_us[kl] / 1000.0);
}

Json manifest(const std::string& command, const Json& config, std::uint64_t digest) {
  Json doc;
  doc["command"] = command;
  doc["config"] = config;
  doc["config_digest"] = cstomo::hex_digest(digest);
  return doc;
}

}  // namespace

int main(int argc, char** argv) {
  namespace io = cstomo::io;
  CLI::App app{"Continuous-measurement quantum state tomography on the cesium ground manifold"};
  app.require_subcommand(1);

  // gen-waveforms
  auto* gen = app.add_subcommand("gen-waveforms", "Generate random piecewise-constant control phases");
  double gen_T_ms = 0.0;
  std::uint64_t gen_seed = 7;
  std::string gen_out = "waveforms.json";
  gen->add_option("--T-ms", gen_T_ms, "Waveform length (ms)")->required();
  gen->add_option("--seed", gen_seed, "Seed");
  gen->add_option("-o,--out", gen_out, "Output file");

  // simulate
  auto* sim = app.add_subcommand("simulate", "Synthesize a measurement record");
  ConfigFlags sim_flags;
  sim_flags.attach(sim);
  std::string sim_waveforms, sim_params, sim_state = "haar:0", sim_out = "record.csv";
  sim->add_option("--waveforms", sim_waveforms, "Waveform file (default: generated from the waveform seed)");
  sim->add_option("--params", sim_params, "Truth-model params file (overrides the config's truth model)");
  sim->add_option("--state", sim_state, "haar:<seed>, mixed, level:<f>,<m> or a density JSON file");
  sim->add_option("-o,--out", sim_out, "Record CSV (sidecar written to <out>.json)");

  // reconstruct
  auto* rec = app.add_subcommand("reconstruct", "Estimate the initial state from a record");
  ConfigFlags rec_flags;
  rec_flags.attach(rec);
  std::string rec_record, rec_waveforms, rec_params, rec_estimator = "ls", rec_rule, rec_truth,
                                                     rec_out = "estimate.json";
  std::optional<double> rec_epsilon;
  rec->add_option("--record", rec_record, "Record CSV")->required()->check(CLI::ExistingFile);
  rec->add_option("--waveforms", rec_waveforms, "Waveform file (default: generated from the waveform seed)");
  rec->add_option("--params", rec_params, "Reconstruction-model params file");
  rec->add_option("--estimator", rec_estimator, "ls or cs")->check(CLI::IsMember({"ls", "cs"}));
  rec->add_option("--epsilon", rec_epsilon, "CS residual bound");
  rec->add_option("--epsilon-rule", rec_rule, "CS epsilon rule file")->check(CLI::ExistingFile);
  rec->add_option("--truth", rec_truth, "Reference state for a fidelity report (same syntax as --state)");
  rec->add_option("-o,--out", rec_out, "Estimate file");

  // calibrate-epsilon
  auto* cal = app.add_subcommand("calibrate-epsilon", "Fit epsilon(N) on the calibration state");
  ConfigFlags cal_flags;
  cal_flags.attach(cal);
  std::string cal_out = "epsilon_rule.json";
  cal->add_option("-o,--out", cal_out, "Epsilon rule file");

  // suite
  auto* suite = app.add_subcommand("suite", "Fidelity-versus-record-length suite for LS and CS");
  ConfigFlags suite_flags;
  suite_flags.attach(suite);
  std::string suite_out = "suite_out", suite_rule;
  double suite_window = 1.0;
  suite->add_option("-o,--out-dir", suite_out, "Output directory");
  suite->add_option("--epsilon-rule", suite_rule, "Use this epsilon rule instead of calibrating")
      ->check(CLI::ExistingFile);
  suite->add_option("--window-ms", suite_window, "Fit window (ms)");

  // mismatch
  auto* mis = app.add_subcommand("mismatch", "Well-modeled versus inhomogeneity-omitting reconstruction");
  ConfigFlags mis_flags;
  mis_flags.attach(mis);
  std::string mis_out = "mismatch_out";
  double mis_window = 1.0;
  mis->add_option("-o,--out-dir", mis_out, "Output directory");
  mis->add_option("--window-ms", mis_window, "Fit window (ms)");

  // mixed
  auto* mix = app.add_subcommand("mixed", "LS time constants for pure versus maximally mixed inputs");
  ConfigFlags mix_flags;
  mix_flags.attach(mix);
  std::string mix_out = "mixed_out";
  mix->add_option("-o,--out-dir", mix_out, "Output directory");

  // fit
  auto* fit = app.add_subcommand("fit", "Exponential time-constant fits of a curves.csv");
  std::string fit_curves, fit_out = "fits.csv";
  double fit_window = 1.0;
  fit->add_option("--curves", fit_curves, "curves.csv from suite")->required()->check(CLI::ExistingFile);
  fit->add_option("--window-ms", fit_window, "Fit window (ms)");
  fit->add_option("-o,--out", fit_out, "Output CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*gen) {
      if (!(gen_T_ms > 0.0)) throw UsageError("--T-ms must be positive");
      const auto w = cstomo::random_waveforms(gen_T_ms * 1000.0, gen_seed);
      Json cfg{{"command", "gen-waveforms"}, {"T_us", w.T_us}, {"seed", gen_seed}};
      Json doc = io::waveforms_to_json(w);
      doc["digest"] = cstomo::hex_digest(cstomo::digest(w));
      doc["config_digest"] = cstomo::hex_digest(io::config_digest(cfg));
      io::write_json(gen_out, doc);
      std::printf("wrote %s: %zu rf steps per axis, %zu uw steps\n", gen_out.c_str(), w.phi_x.size(),
                  w.phi_uw.size());
    } else if (*sim) {
      cstomo::SuiteConfig c = sim_flags.resolve();
      if (!sim_params.empty()) c.truth = io::model_from_json(io::read_json(sim_params), c.truth);
      const auto w = load_or_generate_waveforms(sim_waveforms, c.T_total_us, c.waveform_seed);
      const auto rho = parse_state(sim_state);
      const double T = sim_flags.T_total_us ? *sim_flags.T_total_us : w.T_us;
      if (T > w.T_us + 1e-9) throw UsageError("--T-total-us exceeds the waveform length");
      const auto series =
          cstomo::ensemble_observables(w, c.truth.params, c.truth.inhomogeneity, c.sample_dt_us, T);
      const auto record = cstomo::synthesize_record(rho, series, c.K, c.sigma, c.noise_seed);
      Json cfg{{"command", "simulate"},
               {"waveforms_digest", cstomo::hex_digest(cstomo::digest(w))},
               {"truth", io::model_to_json(c.truth)},
               {"state", sim_state},
               {"state_digest", cstomo::hex_digest(io::config_digest(io::density_to_json(rho)))},
               {"sample_dt_us", c.sample_dt_us},
               {"K", c.K},
               {"sigma", c.sigma},
               {"noise_seed", c.noise_seed}};
      io::write_record(sim_out, record, io::config_digest(cfg));
      std::printf("wrote %s (%zu samples)\n", sim_out.c_str(), record.size());
    } else if (*rec) {
      if (rec_estimator == "cs" && !rec_epsilon && rec_rule.empty()) {
        throw UsageError("--estimator cs needs --epsilon or --epsilon-rule");
      }
      cstomo::SuiteConfig c = rec_flags.resolve();
      if (!rec_params.empty()) c.reconstruction = io::model_from_json(io::read_json(rec_params), c.reconstruction);
      const auto record = io::read_record(rec_record);
      if (record.size() < 2) throw UsageError("record needs at least two samples");
      const double dt = record.times_us[1] - record.times_us[0];
      const double T = record.times_us.back();
      const auto w = load_or_generate_waveforms(rec_waveforms, c.T_total_us, c.waveform_seed);
      if (T > w.T_us + 1e-9) throw UsageError("record is longer than the waveforms");
      const auto series = cstomo::ensemble_observables(w, c.reconstruction.params, c.reconstruction.inhomogeneity,
                                                       dt, T);
      if (series.size() != record.size()) throw UsageError("record sampling does not match the model series");
      for (std::size_t i = 0; i < series.size(); ++i) {
        if (std::abs(series.times_us[i] - record.times_us[i]) > 1e-6) {
          throw UsageError("record sample times do not match the model series");
        }
      }
      const cstomo::HermitianBasis basis(16);
      const auto design = cstomo::design_matrix(series, basis, record.K);
      double epsilon = 0.0;
      if (rec_estimator == "cs") {
        epsilon = rec_epsilon ? *rec_epsilon
                              : io::epsilon_rule_from_json(io::read_json(rec_rule))(
                                    static_cast<double>(record.size()));
      }
      Json cfg{{"command", "reconstruct"},
               {"record", cstomo::hex_digest(io::config_digest(Json(io::read_text(rec_record))))},
               {"waveforms_digest", cstomo::hex_digest(cstomo::digest(w))},
               {"reconstruction", io::model_to_json(c.reconstruction)},
               {"solver", io::solver_to_json(c.solver)},
               {"estimator", rec_estimator},
               {"epsilon", epsilon}};
      const std::uint64_t digest = io::config_digest(cfg);
      const auto est = rec_estimator == "ls" ? cstomo::solve_ls(record, design, c.solver)
                                             : cstomo::solve_cs(record, design, epsilon, c.solver);
      io::write_json(rec_out, io::estimate_to_json(est, digest));
      std::printf("estimator %s: residual %.10g, iterations %d, converged %s\n", rec_estimator.c_str(),
                  est.residual, est.iterations, est.converged ? "true" : "false");
      if (!rec_truth.empty()) {
        std::optional<cstomo::PureState> psi;
        const auto rho = parse_state(rec_truth, &psi);
        if (psi) {
          std::printf("fidelity: %.10f\n", cstomo::fidelity(*psi, est.rho_bar));
        } else if ((rho.matrix() - cstomo::DensityMatrix::maximally_mixed(rho.dim()).matrix()).norm() < 1e-12) {
          std::printf("fidelity_with_maximally_mixed: %.10f\n", cstomo::fidelity_with_maximally_mixed(est.rho_bar));
        }
      }
    } else if (*cal) {
      const cstomo::SuiteConfig c = cal_flags.resolve();
      const Json cfg = io::suite_config_to_json(c);
      const auto rule = cstomo::calibrate_suite_epsilon(c);
      io::write_json(cal_out, io::epsilon_rule_to_json(rule, io::config_digest(cfg)));
      std::printf("epsilon(N) = %.10g * N + %.10g (fit relative residual %.4f)\n", rule.slope, rule.intercept,
                  rule.fit_relative_residual);
    } else if (*suite) {
      const cstomo::SuiteConfig c = suite_flags.resolve();
      Json cfg = io::suite_config_to_json(c);
      std::optional<cstomo::EpsilonRule> rule;
      if (!suite_rule.empty()) {
        rule = io::epsilon_rule_from_json(io::read_json(suite_rule));
        cfg["epsilon_rule"] = {{"slope", rule->slope}, {"intercept", rule->intercept}};
      }
      cfg["window_ms"] = suite_window;
      const std::uint64_t digest = io::config_digest(cfg);
      const auto r = rule ? cstomo::run_suite(c, *rule) : cstomo::run_suite(c);
      const fs::path dir(suite_out);
      io::write_json(dir / "manifest.json", manifest("suite", cfg, digest));
      write_suite_outputs(dir, r, digest, suite_window, c.keep_estimates);
      print_peak("suite", r.curves);
    } else if (*mis) {
      cstomo::SuiteConfig c = mis_flags.resolve();
      if (!c.truth.inhomogeneity.enabled && !mis_flags.spread) {
        c.truth.inhomogeneity = cstomo::InhomogeneityModel::gauss_hermite(kDefaultMismatchSpread, kDefaultQuadrature);
      }
      Json cfg = io::suite_config_to_json(c);
      cfg["window_ms"] = mis_window;
      const std::uint64_t digest = io::config_digest(cfg);
      const auto r = cstomo::mismatch_experiment(c);
      const fs::path dir(mis_out);
      io::write_json(dir / "manifest.json", manifest("mismatch", cfg, digest));
      write_suite_outputs(dir / "well_modeled", r.well_modeled, digest, mis_window, c.keep_estimates);
      write_suite_outputs(dir / "mismatched", r.mismatched, digest, mis_window, c.keep_estimates);
      io::write_text(dir / "eta.csv", io::eta_csv(r.eta, digest));
      print_peak("well-modeled", r.well_modeled.curves);
      print_peak("mismatched", r.mismatched.curves);
    } else if (*mix) {
      const cstomo::SuiteConfig c = mix_flags.resolve();
      const Json cfg = io::suite_config_to_json(c);
      const std::uint64_t digest = io::config_digest(cfg);
      const auto r = cstomo::mixed_state_comparison(c);
      const fs::path dir(mix_out);
      io::write_json(dir / "manifest.json", manifest("mixed", cfg, digest));
      std::string table = "# config_digest: " + cstomo::hex_digest(digest) + "\nT_ms,F_pure,sd_pure,F_mixed,sd_mixed\n";
      for (std::size_t k = 0; k < r.T_us.size(); ++k) {
        table += io::format_double(r.T_us[k] / 1000.0) + ',' + io::format_double(r.pure.mean[k]) + ',' +
                 io::format_double(r.pure.sd[k]) + ',' + io::format_double(r.mixed.mean[k]) + ',' +
                 io::format_double(r.mixed.sd[k]) + '\n';
      }
      io::write_text(dir / "mixed.csv", table);
      io::write_text(dir / "fits.csv", io::fits_csv({{"ls_pure", r.pure_fit}, {"ls_mixed", r.mixed_fit}}, digest));
      std::printf("tau_pure = %.6g ms, tau_mixed = %.6g ms, ratio %.4g\n", r.pure_fit.tau_ms, r.mixed_fit.tau_ms,
                  r.mixed_fit.tau_ms / r.pure_fit.tau_ms);
    } else if (*fit) {
      const auto table = io::read_curves_csv(fit_curves);
      Json cfg{{"command", "fit"},
               {"curves", cstomo::hex_digest(io::config_digest(Json(io::read_text(fit_curves))))},
               {"window_ms", fit_window}};
      const auto digest = io::config_digest(cfg);
      const auto cs = try_fit("cs", table.T_ms, table.cs_mean, fit_window);
      const auto ls = try_fit("ls", table.T_ms, table.ls_mean, fit_window);
      io::write_text(fit_out, io::fits_csv({cs, ls}, digest));
      std::printf("tau_CS = %.6g ms, tau_LS = %.6g ms\n", cs.fit.tau_ms, ls.fit.tau_ms);
    }
  } catch (const UsageError& e) {
    std::cerr << "error-class: usage\n" << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const cstomo::SolverError& e) {
    std::cerr << "error-class: " << e.error_class() << "\n" << "error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const io::FormatError& e) {
    std::cerr << "error-class: io\n" << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error-class: invalid-argument\n" << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error-class: internal\n" << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
