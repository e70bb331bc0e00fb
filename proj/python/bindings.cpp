/*
 Copyright 2026 The metaoc Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <fstream>
#include <sstream>

#include "metaoc/checks.hpp"
#include "metaoc/harness.hpp"

namespace py = pybind11;
using namespace metaoc;

namespace {

DisturbanceSource make_source(const std::string& kind, double kappa_w,
                              std::uint64_t seed, int n) {
  return DisturbanceSource{disturbance_kind_from_string(kind), kappa_w, seed, n};
}

DisturbanceHistory history_from_list(const std::vector<Vector>& recent, int n) {
  // recent[0] = w_{t-1}, recent[1] = w_{t-2}, ...
  DisturbanceHistory hist(static_cast<int>(recent.size()), n);
  for (auto it = recent.rbegin(); it != recent.rend(); ++it) hist.push(*it);
  return hist;
}

std::string run_experiment_text(const std::string& config_text) {
  const ExperimentConfig cfg = parse_experiment_config(config_text);
  run_experiment(cfg);
  std::ifstream in(cfg.output_dir + "/summary.json", std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Meta-learning online control for linear systems with adversarial "
            "disturbances: task-level online controller, meta-initialization "
            "learners, baselines and the benchmark harness.";

  py::register_exception<SynthesisError>(m, "SynthesisError");
  py::register_exception<DivergenceError>(m, "DivergenceError");
  py::register_exception<ConfigError>(m, "ConfigurationError");

  py::class_<SystemBounds>(m, "SystemBounds")
      .def(py::init<>())
      .def_readwrite("kappa_A", &SystemBounds::kappa_A)
      .def_readwrite("kappa_B", &SystemBounds::kappa_B)
      .def_readwrite("kappa_w", &SystemBounds::kappa_w)
      .def_readwrite("kappa", &SystemBounds::kappa)
      .def_readwrite("gamma", &SystemBounds::gamma)
      .def_readwrite("G", &SystemBounds::G)
      .def_readwrite("beta", &SystemBounds::beta)
      .def_readwrite("S", &SystemBounds::S)
      .def("validate", &SystemBounds::validate);

  py::class_<SystemMatrices>(m, "SystemMatrices")
      .def(py::init<Matrix, Matrix, const SystemBounds&>(), py::arg("A"),
           py::arg("B"), py::arg("bounds"))
      .def_property_readonly("A", &SystemMatrices::A)
      .def_property_readonly("B", &SystemMatrices::B)
      .def_property_readonly("n", &SystemMatrices::n)
      .def_property_readonly("m", &SystemMatrices::m);

  py::class_<StabilityCertificate>(m, "StabilityCertificate")
      .def_readonly("K", &StabilityCertificate::K)
      .def_readonly("H_mat", &StabilityCertificate::H_mat)
      .def_readonly("L_mat", &StabilityCertificate::L_mat)
      .def_readonly("kappa_achieved", &StabilityCertificate::kappa_achieved)
      .def_readonly("gamma_achieved", &StabilityCertificate::gamma_achieved);

  py::class_<DacParams>(m, "DacParams")
      .def(py::init<std::vector<Matrix>>(), py::arg("blocks"))
      .def_static("zero", &DacParams::zero, py::arg("H"), py::arg("m"),
                  py::arg("n"))
      .def_property_readonly("blocks", &DacParams::blocks)
      .def_property_readonly("H", &DacParams::H)
      .def("norm", &DacParams::norm)
      .def("vectorize", &DacParams::vectorize);

  py::class_<DacDomain>(m, "DacDomain")
      .def_static("make", &DacDomain::make, py::arg("bounds"), py::arg("H"),
                  py::arg("m"), py::arg("n"))
      .def_readonly("radii", &DacDomain::radii)
      .def("radius", &DacDomain::radius, py::arg("k"))
      .def("diameter", &DacDomain::diameter)
      .def("contains", &DacDomain::contains, py::arg("M"),
           py::arg("tol") = 1e-9);

  py::class_<ConstantsBundle>(m, "ConstantsBundle")
      .def_readonly("D_tilde", &ConstantsBundle::D_tilde)
      .def_readonly("G_f", &ConstantsBundle::G_f)
      .def_readonly("L", &ConstantsBundle::L)
      .def_readonly("D_closed_form", &ConstantsBundle::D_closed_form)
      .def_readonly("D_domain", &ConstantsBundle::D_domain)
      .def_readonly("G_tilde", &ConstantsBundle::G_tilde)
      .def_readonly("H", &ConstantsBundle::H)
      .def_readonly("d", &ConstantsBundle::d);

  m.def("operator_norm", &operator_norm, py::arg("matrix"),
        "Spectral norm of a matrix.");
  m.def("step", &step, py::arg("sys"), py::arg("x"), py::arg("u"), py::arg("w"),
        "One step of the dynamics: A x + B u + w.");
  m.def(
      "emit_disturbance",
      [](const std::string& kind, double kappa_w, std::uint64_t seed, int n,
         long t) { return emit_disturbance(make_source(kind, kappa_w, seed, n), t); },
      py::arg("kind"), py::arg("kappa_w"), py::arg("seed"), py::arg("n"),
      py::arg("t"),
      "Deterministic bounded disturbance for (kind, seed, t); t <= 0 is zero.");
  m.def("synthesize_stabilizer", &synthesize_stabilizer, py::arg("sys"),
        py::arg("bounds"),
        "Riccati gain plus strong-stability certificate.");
  m.def(
      "verify_strong_stability",
      [](const SystemMatrices& sys, const Matrix& K, double kappa,
         double gamma) -> py::object {
        const StabilityVerdict v = verify_strong_stability(sys, K, kappa, gamma);
        if (v.accepted) return py::cast(v.certificate);
        return py::cast(v.violation);
      },
      py::arg("sys"), py::arg("K"), py::arg("kappa"), py::arg("gamma"),
      "Returns a certificate, or the violated inequality as a string.");
  m.def("horizon", &horizon, py::arg("T"), py::arg("gamma"),
        "History length ceil(ln T / ln(1/(1-gamma))).");
  m.def("project", &project, py::arg("M"), py::arg("domain"),
        "Block-wise Euclidean projection onto the feasible set.");
  m.def(
      "control_action",
      [](const Matrix& K, const DacParams& M, const Vector& x,
         const std::vector<Vector>& recent_disturbances) {
        return control_action(
            K, M, x,
            history_from_list(recent_disturbances, static_cast<int>(x.size())));
      },
      py::arg("K"), py::arg("M"), py::arg("x"), py::arg("recent_disturbances"),
      "-K x + sum_k M[k] w_{t-k}; pass [w_{t-1}, ..., w_{t-H}].");
  m.def("recover_disturbance", &recover_disturbance, py::arg("sys"),
        py::arg("x"), py::arg("u"), py::arg("x_next"),
        "x_next - A x - B u.");
  m.def("compute_constants", &compute_constants, py::arg("bounds"),
        py::arg("H"), py::arg("d"), "Regret-bound constants.");
  m.def("default_step_size", &default_step_size, py::arg("D_scale"),
        py::arg("constants"), py::arg("T"),
        "D_scale / sqrt(G_f (G_f/2 + L H^2) T).");
  m.def("run_experiment", &run_experiment_text, py::arg("config_text"),
        "Runs a full experiment from a key = value config document and "
        "returns the summary JSON text.");
  m.def(
      "run_acceptance",
      [](bool quick, const std::string& work_dir) {
        std::ostringstream out;
        const bool ok = run_acceptance_checks(out, quick, work_dir);
        return py::make_tuple(ok, out.str());
      },
      py::arg("quick") = true, py::arg("work_dir") = std::string("check_out"),
      "Runs the acceptance battery; returns (ok, report_text).");
}
