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

#pragma once

// File formats. Structured documents are JSON (doubles written in shortest
// round-trip form, so every value reads back bit-exactly); tabular outputs are
// CSV with 17 significant digits. Every CSV starts with a
// "# config_digest: <hex>" comment line followed by the header row.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "cstomo/control_dynamics.hpp"
#include "cstomo/convex_estimators.hpp"
#include "cstomo/measurement_record.hpp"
#include "cstomo/spin_model.hpp"
#include "cstomo/tomography_pipeline.hpp"

namespace cstomo::io {

using Json = nlohmann::ordered_json;

/// Thrown for unreadable/unwritable files and malformed documents.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_text(const std::filesystem::path& path);
/// Creates parent directories; throws FormatError when the file cannot be written.
void write_text(const std::filesystem::path& path, const std::string& text);
Json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const Json& doc);

/// FNV-1a over the compact dump of a canonical (insertion-ordered) document.
std::uint64_t config_digest(const Json& config);

/// "%.17g"
std::string format_double(double v);

// Operators and states: {dim, re, im, basis_order}, re/im row-major.
Json operator_to_json(const Operator& op);
Operator operator_from_json(const Json& doc);
Json density_to_json(const DensityMatrix& rho);
DensityMatrix density_from_json(const Json& doc);

Json waveforms_to_json(const ControlWaveforms& w);
ControlWaveforms waveforms_from_json(const Json& doc);

Json inhomogeneity_to_json(const InhomogeneityModel& m);
InhomogeneityModel inhomogeneity_from_json(const Json& doc);
/// {omega_rf_rad_per_s, omega_uw_rad_per_s, detunings{rf_rad_per_s, uw_rad_per_s}, g_ratio, inhomogeneity}
Json model_to_json(const ModelDescriptor& model);
/// Missing fields keep the values of `base`.
ModelDescriptor model_from_json(const Json& doc, const ModelDescriptor& base = {});

Json solver_to_json(const SolverConfig& c);
SolverConfig solver_from_json(const Json& doc, const SolverConfig& base = {});

/// Full suite configuration except the worker count, which never affects results.
Json suite_config_to_json(const SuiteConfig& c);
SuiteConfig suite_config_from_json(const Json& doc, const SuiteConfig& base = {});

// Records: CSV "t_us,M" plus a JSON sidecar with the metadata.
std::string record_csv(const MeasurementRecord& record, std::uint64_t config_digest);
Json record_sidecar(const MeasurementRecord& record, std::uint64_t config_digest);
void write_record(const std::filesystem::path& csv_path, const MeasurementRecord& record,
                  std::uint64_t config_digest);
/// Sidecar path for a record CSV: "<csv>.json".
std::filesystem::path sidecar_path(const std::filesystem::path& csv_path);
/// Reads the CSV and, when present, its sidecar (K, sigma, seeds); K defaults to 1 otherwise.
MeasurementRecord read_record(const std::filesystem::path& csv_path);

Json estimate_to_json(const Estimate& e, std::uint64_t config_digest);
Estimate estimate_from_json(const Json& doc);

Json epsilon_rule_to_json(const EpsilonRule& rule, std::uint64_t config_digest);
EpsilonRule epsilon_rule_from_json(const Json& doc);

// Pipeline tables.
std::string curves_csv(const FidelityCurves& curves, std::uint64_t config_digest);
std::string per_state_csv(const FidelityCurves& curves, std::uint64_t config_digest);
std::string eta_csv(const ErrorPenalty& eta, std::uint64_t config_digest);

struct NamedFit {
  std::string estimator;
  FitResult fit;
};
std::string fits_csv(const std::vector<NamedFit>& fits, std::uint64_t config_digest);

/// Parsed curves.csv: T_ms and the mean columns.
struct CurveTable {
  std::vector<double> T_ms;
  std::vector<double> cs_mean;
  std::vector<double> ls_mean;
};
CurveTable read_curves_csv(const std::filesystem::path& path);

}  // namespace cstomo::io
