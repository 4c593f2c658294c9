// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "coopnoma/alternating.hpp"
#include "coopnoma/harness.hpp"
#include "coopnoma/model.hpp"
#include "coopnoma/optimal_tx.hpp"
#include "coopnoma/rates.hpp"

namespace py = pybind11;
using namespace coopnoma;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Transceiver design for a wireless-powered cooperative NOMA relay";

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<InfeasibleError>(m, "InfeasibleError", base.ptr());
  py::register_exception<NonConvergenceError>(m, "NonConvergenceError", base.ptr());
  py::register_exception<DegeneracyError>(m, "DegeneracyError", base.ptr());
  py::register_exception<NumericalError>(m, "NumericalError", base.ptr());
  py::register_exception<IoError>(m, "IoError", base.ptr());

  py::class_<SystemParams>(m, "SystemParams")
      .def(py::init<>())
      .def_readwrite("ps", &SystemParams::ps)
      .def_readwrite("sigma_d2", &SystemParams::sigma_d2)
      .def_readwrite("sigma_r2", &SystemParams::sigma_r2)
      .def_readwrite("sigma_r2_tilde", &SystemParams::sigma_r2_tilde)
      .def_readwrite("eta", &SystemParams::eta)
      .def_readwrite("rd_min", &SystemParams::rd_min)
      .def_readwrite("m", &SystemParams::m)
      .def_readwrite("n", &SystemParams::n)
      .def("validate", &SystemParams::validate);

  py::class_<PathLossSpec>(m, "PathLossSpec")
      .def(py::init<>())
      .def_readwrite("pl_sr_db", &PathLossSpec::pl_sr_db)
      .def_readwrite("pl_sd_db", &PathLossSpec::pl_sd_db)
      .def_readwrite("pl_rd_db", &PathLossSpec::pl_rd_db);

  py::class_<ChannelRealization>(m, "ChannelRealization")
      .def(py::init<>())
      .def_readwrite("h_sr", &ChannelRealization::h_sr)
      .def_readwrite("h_sd", &ChannelRealization::h_sd)
      .def_readwrite("h_rd", &ChannelRealization::h_rd);

  py::class_<TxSolution>(m, "TxSolution")
      .def_readonly("w1", &TxSolution::w1)
      .def_readonly("w2", &TxSolution::w2)
      .def_readonly("rho", &TxSolution::rho)
      .def_readonly("w_r", &TxSolution::w_r)
      .def_readonly("w_d", &TxSolution::w_d);

  py::class_<ConstraintReport>(m, "ConstraintReport")
      .def_readonly("sic_sinr", &ConstraintReport::sic_sinr)
      .def_readonly("sic_ok", &ConstraintReport::sic_ok)
      .def_readonly("d_combined_sinr", &ConstraintReport::d_combined_sinr)
      .def_readonly("d_ok", &ConstraintReport::d_ok)
      .def_readonly("power_used", &ConstraintReport::power_used)
      .def_readonly("power_ok", &ConstraintReport::power_ok)
      .def("all_ok", &ConstraintReport::all_ok);

  m.def("db_to_linear", &db_to_linear);
  m.def("gamma_threshold", &gamma_threshold);
  m.def("sample_channel", &sample_channel, py::arg("params"), py::arg("path_loss"), py::arg("seed"));
  m.def("fig2_channel", &fig2_channel);
  m.def("make_solution", &make_solution, py::arg("ch"), py::arg("w1"), py::arg("w2"), py::arg("rho"),
        py::arg("w_r"));
  m.def("rate_r", &rate_r);
  m.def("rate_d", &rate_d);
  m.def("audit", &audit, py::arg("ch"), py::arg("sol"), py::arg("params"), py::arg("tol") = kAuditTol);
  m.def("rho_star", [](double b, double c) {
    const auto r = rho_star(b, c);
    return py::make_tuple(r.rho, r.value);
  });

  py::enum_<Scheme>(m, "Scheme").value("optimal", Scheme::optimal).value("zf", Scheme::zf);
  py::enum_<Termination>(m, "Termination")
      .value("converged", Termination::converged)
      .value("max_iter", Termination::max_iter)
      .value("no_relay_power", Termination::no_relay_power);

  py::class_<IterationRecord>(m, "IterationRecord")
      .def_readonly("rate_r", &IterationRecord::rate_r)
      .def_readonly("rate_d", &IterationRecord::rate_d)
      .def_readonly("rho", &IterationRecord::rho)
      .def_readonly("kept_previous", &IterationRecord::kept_previous);

  m.def("init_receiver", &init_receiver);
  m.def("transmit_design", &transmit_design, py::arg("ch"), py::arg("w_r"), py::arg("params"),
        py::arg("scheme"));
  m.def(
      "alternate",
      [](const ChannelRealization& ch, const SystemParams& p, Scheme s, int max_iter, double tol) {
        auto res = alternate(ch, p, s, max_iter, tol);
        return py::make_tuple(res.solution, res.trace.records, res.trace.reason);
      },
      py::arg("ch"), py::arg("params"), py::arg("scheme"), py::arg("max_iter") = kAlternatingMaxIter,
      py::arg("tol") = kAlternatingTol);
  m.def("direct_transmission_rate", &direct_transmission_rate);

  py::enum_<ExperimentKind>(m, "ExperimentKind")
      .value("rate_region", ExperimentKind::rate_region)
      .value("rate_vs_antennas", ExperimentKind::rate_vs_antennas)
      .value("outage_vs_rate", ExperimentKind::outage_vs_rate)
      .value("outage_vs_antennas", ExperimentKind::outage_vs_antennas);
  py::enum_<SchemeKind>(m, "SchemeKind")
      .value("optimal", SchemeKind::optimal)
      .value("zf", SchemeKind::zf)
      .value("direct", SchemeKind::direct);

  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def(py::init<>())
      .def_readwrite("kind", &ExperimentConfig::kind)
      .def_readwrite("params", &ExperimentConfig::params)
      .def_readwrite("path_loss", &ExperimentConfig::path_loss)
      .def_readwrite("grid", &ExperimentConfig::grid)
      .def_readwrite("trials", &ExperimentConfig::trials)
      .def_readwrite("base_seed", &ExperimentConfig::base_seed)
      .def_readwrite("schemes", &ExperimentConfig::schemes)
      .def_readwrite("fig2", &ExperimentConfig::fig2)
      .def_readwrite("threads", &ExperimentConfig::threads)
      .def("validate", &ExperimentConfig::validate);

  py::class_<SweepRow>(m, "SweepRow")
      .def_readonly("sweep_value", &SweepRow::sweep_value)
      .def_readonly("scheme", &SweepRow::scheme)
      .def_readonly("mean_rate_r", &SweepRow::mean_rate_r)
      .def_readonly("mean_rate_d", &SweepRow::mean_rate_d)
      .def_readonly("outage_prob", &SweepRow::outage_prob)
      .def_readonly("trials", &SweepRow::trials)
      .def_readonly("failures", &SweepRow::failures);

  py::class_<SweepResult>(m, "SweepResult")
      .def_readonly("rows", &SweepResult::rows)
      .def("flagged", &SweepResult::flagged)
      .def_property_readonly("config_hash", [](const SweepResult& r) { return r.metadata.config_hash; });

  m.def("parse_grid", &parse_grid);
  m.def("run_experiment", &run_experiment, py::call_guard<py::gil_scoped_release>());
  m.def("format_csv", &format_csv);
}
