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

// Python bindings. States and operators cross the boundary as numpy arrays
// (complex state vectors and density matrices); records, series and configs
// are exposed as classes.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cstomo/io.hpp"
#include "cstomo/tomography_pipeline.hpp"

namespace py = pybind11;

namespace cstomo {
namespace {

py::dict curve_stats_dict(const CurveStats& s) {
  py::dict d;
  d["mean"] = s.mean;
  d["sd"] = s.sd;
  d["count"] = s.count;
  return d;
}

py::dict curves_dict(const FidelityCurves& c) {
  py::dict d;
  d["T_us"] = c.T_us;
  d["state_index"] = c.state_index;
  d["cs"] = c.cs;
  d["ls"] = c.ls;
  d["cs_stats"] = curve_stats_dict(c.cs_stats);
  d["ls_stats"] = curve_stats_dict(c.ls_stats);
  return d;
}

DensityMatrix as_density(const Operator& rho) { return DensityMatrix(rho); }

}  // namespace
}  // namespace cstomo

PYBIND11_MODULE(_core, m) {
  using namespace cstomo;
  m.doc() = "Continuous-measurement quantum state tomography on the cesium ground manifold";

  auto solver_error = py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);
  py::register_exception<InfeasibleEpsilon>(m, "InfeasibleEpsilon", solver_error.ptr());
  py::register_exception<ZeroStateError>(m, "ZeroStateError", solver_error.ptr());
  py::register_exception<CalibrationError>(m, "CalibrationError", solver_error.ptr());
  py::register_exception<FitError>(m, "FitError", PyExc_RuntimeError);

  // States and operators.
  m.def("haar_state", [](int dim, std::uint64_t seed) { return haar_random_pure_state(dim, seed).amplitudes(); },
        py::arg("dim"), py::arg("seed"), "Haar-random pure state as a complex amplitude vector.");
  m.def("pure_density",
        [](const StateVector& psi) { return DensityMatrix::from_pure(PureState::normalized(psi)).matrix(); },
        py::arg("psi"));
  m.def("maximally_mixed", [](int dim) { return DensityMatrix::maximally_mixed(dim).matrix(); }, py::arg("dim"));
  m.def("fidelity",
        [](const StateVector& psi, const Operator& rho) { return fidelity(PureState(psi), as_density(rho)); },
        py::arg("psi"), py::arg("rho"), "<psi|rho|psi>");
  m.def("fidelity_with_maximally_mixed",
        [](const Operator& rho) { return fidelity_with_maximally_mixed(as_density(rho)); }, py::arg("rho"));
  m.def("probe_observable", [] { return probe_observable(HilbertSpace::cesium_ground()); });
  m.def("angular_momentum", [](double f) {
    const auto j = angular_momentum_ops(f);
    return py::make_tuple(j.fx, j.fy, j.fz);
  }, py::arg("f"));
  m.def("project_psd", &project_psd, py::arg("h"));
  m.def("project_density", &project_density, py::arg("h"));

  py::class_<HermitianBasis>(m, "HermitianBasis")
      .def(py::init<int>(), py::arg("dim"))
      .def_property_readonly("dim", &HermitianBasis::dim)
      .def_property_readonly("size", &HermitianBasis::size)
      .def("element", &HermitianBasis::element, py::arg("alpha"))
      .def("expand", &HermitianBasis::expand, py::arg("op"))
      .def("reconstruct", &HermitianBasis::reconstruct, py::arg("r"));

  // Dynamics.
  py::class_<ControlParams>(m, "ControlParams")
      .def(py::init<>())
      .def_readwrite("omega_rf_rad_per_s", &ControlParams::omega_rf_rad_per_s)
      .def_readwrite("omega_uw_rad_per_s", &ControlParams::omega_uw_rad_per_s)
      .def_readwrite("detuning_rf_rad_per_s", &ControlParams::detuning_rf_rad_per_s)
      .def_readwrite("detuning_uw_rad_per_s", &ControlParams::detuning_uw_rad_per_s)
      .def_readwrite("g_ratio", &ControlParams::g_ratio);

  py::class_<InhomogeneityModel>(m, "InhomogeneityModel")
      .def(py::init<>())
      .def_static("gauss_hermite", &InhomogeneityModel::gauss_hermite, py::arg("spread"), py::arg("n_samples"))
      .def_readonly("enabled", &InhomogeneityModel::enabled)
      .def_readonly("spread", &InhomogeneityModel::spread)
      .def_readonly("nodes", &InhomogeneityModel::nodes)
      .def_readonly("weights", &InhomogeneityModel::weights);

  py::class_<ControlWaveforms>(m, "ControlWaveforms")
      .def_readonly("T_us", &ControlWaveforms::T_us)
      .def_readonly("seed", &ControlWaveforms::seed)
      .def_readonly("phi_x", &ControlWaveforms::phi_x)
      .def_readonly("phi_y", &ControlWaveforms::phi_y)
      .def_readonly("phi_uw", &ControlWaveforms::phi_uw);
  m.def("random_waveforms", &random_waveforms, py::arg("T_us"), py::arg("seed"));

  py::class_<ObservableSeries>(m, "ObservableSeries")
      .def_readonly("sample_dt_us", &ObservableSeries::sample_dt_us)
      .def_readonly("times_us", &ObservableSeries::times_us)
      .def("__len__", &ObservableSeries::size)
      .def("observable", [](const ObservableSeries& s, std::size_t i) { return s.observables.at(i); }, py::arg("i"));
  m.def("evolve_observables", &evolve_observables, py::arg("waveforms"), py::arg("params"), py::arg("sample_dt_us"),
        py::arg("T_us"), py::call_guard<py::gil_scoped_release>());
  m.def("ensemble_observables", &ensemble_observables, py::arg("waveforms"), py::arg("params"),
        py::arg("inhomogeneity"), py::arg("sample_dt_us"), py::arg("T_us"),
        py::call_guard<py::gil_scoped_release>());
  m.def("completeness_rank",
        [](const ObservableSeries& s, double K) { return informational_completeness(s, HermitianBasis(16), K).rank; },
        py::arg("series"), py::arg("K") = 1.0);

  // Records.
  py::class_<MeasurementRecord>(m, "MeasurementRecord")
      .def_readonly("times_us", &MeasurementRecord::times_us)
      .def_readonly("values", &MeasurementRecord::values)
      .def_readonly("noiseless", &MeasurementRecord::noiseless)
      .def_readonly("K", &MeasurementRecord::K)
      .def_readonly("sigma", &MeasurementRecord::sigma)
      .def("__len__", &MeasurementRecord::size);
  m.def("synthesize_record",
        [](const Operator& rho, const ObservableSeries& s, double K, double sigma, std::uint64_t seed) {
          return synthesize_record(as_density(rho), s, K, sigma, seed);
        },
        py::arg("rho"), py::arg("series"), py::arg("K") = 1.0, py::arg("sigma") = 0.0, py::arg("seed") = 0);
  m.def("truncate_record", py::overload_cast<const MeasurementRecord&, double>(&truncate), py::arg("record"),
        py::arg("T_us"));
  m.def("truncate_series", py::overload_cast<const ObservableSeries&, double>(&truncate), py::arg("series"),
        py::arg("T_us"));
  m.def("design_matrix",
        [](const ObservableSeries& s, double K) { return design_matrix(s, HermitianBasis(16), K).A; },
        py::arg("series"), py::arg("K") = 1.0);

  // Estimators.
  py::class_<SolverConfig>(m, "SolverConfig")
      .def(py::init<>())
      .def_readwrite("max_iterations", &SolverConfig::max_iterations)
      .def_readwrite("objective_tol", &SolverConfig::objective_tol)
      .def_readwrite("kkt_tol", &SolverConfig::kkt_tol)
      .def_readwrite("epsilon_rel_tol", &SolverConfig::epsilon_rel_tol);

  py::class_<Estimate>(m, "Estimate")
      .def_property_readonly("estimator", [](const Estimate& e) { return std::string(to_string(e.kind)); })
      .def_property_readonly("rho", [](const Estimate& e) { return e.rho_bar.matrix(); })
      .def_readonly("residual", &Estimate::residual)
      .def_readonly("iterations", &Estimate::iterations)
      .def_readonly("converged", &Estimate::converged)
      .def_readonly("multiplier", &Estimate::multiplier)
      .def_readonly("pre_normalization_trace", &Estimate::pre_normalization_trace)
      .def_readonly("constraint_residual", &Estimate::constraint_residual);

  auto design_of = [](const Eigen::MatrixXd& A) {
    DesignMatrix d;
    d.A = A;
    return d;
  };
  m.def("solve_ls",
        [design_of](const MeasurementRecord& r, const Eigen::MatrixXd& A, const SolverConfig& c) {
          return solve_ls(r, design_of(A), c);
        },
        py::arg("record"), py::arg("design"), py::arg("config") = SolverConfig{},
        py::call_guard<py::gil_scoped_release>());
  m.def("solve_cs",
        [design_of](const MeasurementRecord& r, const Eigen::MatrixXd& A, double eps, const SolverConfig& c) {
          return solve_cs(r, design_of(A), eps, c);
        },
        py::arg("record"), py::arg("design"), py::arg("epsilon"), py::arg("config") = SolverConfig{},
        py::call_guard<py::gil_scoped_release>());

  py::class_<EpsilonRule>(m, "EpsilonRule")
      .def(py::init<>())
      .def_readwrite("slope", &EpsilonRule::slope)
      .def_readwrite("intercept", &EpsilonRule::intercept)
      .def_readonly("calibration_T_us", &EpsilonRule::calibration_T_us)
      .def_readonly("calibration_epsilon", &EpsilonRule::calibration_epsilon)
      .def_readonly("calibration_fidelity", &EpsilonRule::calibration_fidelity)
      .def("__call__", &EpsilonRule::operator(), py::arg("n_samples"));
  m.def("calibrate_epsilon",
        [](const StateVector& psi, const ObservableSeries& s, double K, double sigma, const std::vector<double>& grid,
           std::uint64_t seed) { return calibrate_epsilon(PureState(psi), s, K, sigma, grid, seed); },
        py::arg("psi"), py::arg("series"), py::arg("K"), py::arg("sigma"), py::arg("T_grid_us"), py::arg("seed"),
        py::call_guard<py::gil_scoped_release>());

  // Pipeline.
  py::class_<ModelDescriptor>(m, "ModelDescriptor")
      .def(py::init<>())
      .def_readwrite("params", &ModelDescriptor::params)
      .def_readwrite("inhomogeneity", &ModelDescriptor::inhomogeneity);

  py::class_<SuiteConfig>(m, "SuiteConfig")
      .def(py::init<>())
      .def_readwrite("n_states", &SuiteConfig::n_states)
      .def_readwrite("T_total_us", &SuiteConfig::T_total_us)
      .def_readwrite("T_grid_us", &SuiteConfig::T_grid_us)
      .def_readwrite("calibration_T_grid_us", &SuiteConfig::calibration_T_grid_us)
      .def_readwrite("sample_dt_us", &SuiteConfig::sample_dt_us)
      .def_readwrite("K", &SuiteConfig::K)
      .def_readwrite("sigma", &SuiteConfig::sigma)
      .def_readwrite("waveform_seed", &SuiteConfig::waveform_seed)
      .def_readwrite("state_seed", &SuiteConfig::state_seed)
      .def_readwrite("noise_seed", &SuiteConfig::noise_seed)
      .def_readwrite("truth", &SuiteConfig::truth)
      .def_readwrite("reconstruction", &SuiteConfig::reconstruction)
      .def_readwrite("solver", &SuiteConfig::solver)
      .def_readwrite("threads", &SuiteConfig::threads)
      .def("validate", &SuiteConfig::validate)
      .def("to_json", [](const SuiteConfig& c) { return io::suite_config_to_json(c).dump(); })
      .def("digest", [](const SuiteConfig& c) { return io::config_digest(io::suite_config_to_json(c)); });

  m.def("run_suite",
        [](const SuiteConfig& c) {
          SuiteResult r;
          {
            py::gil_scoped_release release;
            r = run_suite(c);
          }
          py::dict d = curves_dict(r.curves);
          d["epsilon_rule"] = r.epsilon_rule;
          return d;
        },
        py::arg("config"));
  m.def("fit_exponential",
        [](const std::vector<double>& T_ms, const std::vector<double>& F, double window_ms) {
          const auto f = fit_exponential(T_ms, F, window_ms);
          py::dict d;
          d["tau_ms"] = f.tau_ms;
          d["n_points"] = f.n_points;
          d["relative_residual"] = f.relative_residual;
          return d;
        },
        py::arg("T_ms"), py::arg("fidelity"), py::arg("window_ms") = 1.0);
}
