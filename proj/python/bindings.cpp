#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "qecool/experiments.hpp"

namespace py = pybind11;
using namespace qecool;

namespace {

PipelineSpec make_spec(CodeKind kind, double p, const py::object& q,
                       const py::object& ancilla, double c, bool per_gate_noise) {
  const GateErrorRate rate(c);
  if (!q.is_none() && !ancilla.is_none())
    throw std::invalid_argument("give either q or ancilla, not both");
  PipelineSpec spec =
      !ancilla.is_none()
          ? PipelineSpec::with_ancilla(kind, DephasingStrength(p),
                                       ancilla.cast<AncillaState>(), rate)
          : PipelineSpec::with_mixing(kind, DephasingStrength(p),
                                      MixingStrength(q.is_none() ? 0.0 : q.cast<double>()),
                                      rate);
  spec.per_gate_noise = per_gate_noise;
  return spec;
}

py::dict table_dict(const ResultTable& table) {
  py::dict out;
  out["columns"] = table.columns;
  out["rows"] = table.rows;
  py::dict prov;
  for (const auto& [key, value] : table.provenance) prov[py::str(key)] = value;
  out["provenance"] = prov;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact density-matrix simulation of finite-temperature 3-qubit error "
            "correction and heat-bath algorithmic cooling";
  m.attr("__version__") = "0.1.0";
  m.attr("GAMMA_ELECTRON") = kGammaElectron;
  m.attr("DEFAULT_B0") = kDefaultB0;

  py::enum_<CodeKind>(m, "CodeKind")
      .value("TRADITIONAL", CodeKind::Traditional)
      .value("OPTIMAL", CodeKind::Optimal);
  py::enum_<Protocol>(m, "Protocol")
      .value("FOUR_QUBIT", Protocol::FourQubit)
      .value("SIX_QUBIT", Protocol::SixQubit);
  py::enum_<TableFormat>(m, "TableFormat")
      .value("CSV", TableFormat::Csv)
      .value("JSON", TableFormat::Json);

  py::class_<DensityMatrix>(m, "DensityMatrix")
      .def(py::init<int, Matrix>(), py::arg("n_qubits"), py::arg("entries"))
      .def_static("basis_state", &DensityMatrix::basis_state)
      .def_static("pure", &DensityMatrix::pure)
      .def_static("diagonal", &DensityMatrix::diagonal)
      .def_property_readonly("n_qubits", &DensityMatrix::n_qubits)
      .def_property_readonly("entries", &DensityMatrix::entries)
      .def("trace_deviation", &DensityMatrix::trace_deviation)
      .def("min_eigenvalue", &DensityMatrix::min_eigenvalue)
      .def("is_valid", &DensityMatrix::is_valid)
      .def("is_diagonal", &DensityMatrix::is_diagonal, py::arg("tol") = kStructuralTol)
      .def("diagonal_probabilities", &DensityMatrix::diagonal_probabilities)
      .def("tensor", &DensityMatrix::tensor);

  py::class_<UnitaryGate>(m, "UnitaryGate")
      .def(py::init<int, Matrix>(), py::arg("n_qubits"), py::arg("entries"))
      .def_property_readonly("n_qubits", &UnitaryGate::n_qubits)
      .def_property_readonly("matrix", &UnitaryGate::matrix)
      .def("then", &UnitaryGate::then)
      .def("tensor", &UnitaryGate::tensor)
      .def("adjoint", &UnitaryGate::adjoint);

  py::class_<KrausChannel>(m, "KrausChannel")
      .def(py::init<std::vector<Matrix>>(), py::arg("operators"))
      .def_static("identity", &KrausChannel::identity)
      .def_static("from_unitary", &KrausChannel::from_unitary)
      .def_property_readonly("operators", &KrausChannel::operators)
      .def_property_readonly("n_qubits_in", &KrausChannel::n_qubits_in)
      .def_property_readonly("n_qubits_out", &KrausChannel::n_qubits_out)
      .def_property_readonly("is_square", &KrausChannel::is_square)
      .def("__len__", &KrausChannel::size);

  py::class_<AncillaState>(m, "AncillaState")
      .def(py::init<double, double, double, double>(), py::arg("rho00"),
           py::arg("rho01"), py::arg("rho10"), py::arg("rho11"))
      .def_static("thermal",
                  [](double q) { return AncillaState::thermal(MixingStrength(q)); })
      .def_readonly("rho00", &AncillaState::rho00)
      .def_readonly("rho01", &AncillaState::rho01)
      .def_readonly("rho10", &AncillaState::rho10)
      .def_readonly("rho11", &AncillaState::rho11);

  m.def("standard_gate", [](const std::string& name) { return standard_gate(name); });
  m.def("permutation_gate", [](const std::vector<std::size_t>& sigma) {
    return permutation_gate(sigma);
  });
  m.def("apply_unitary",
        [](const DensityMatrix& rho, const UnitaryGate& u, const std::vector<int>& t) {
          return apply_unitary(rho, u, t);
        });
  m.def("apply_channel",
        [](const DensityMatrix& rho, const KrausChannel& c, const std::vector<int>& t) {
          return apply_channel(rho, c, t);
        });
  m.def("compose_channels", &compose_channels);
  m.def("tensor_channels", &tensor_channels);
  m.def("partial_trace", [](const DensityMatrix& rho, const std::vector<int>& keep) {
    return partial_trace(rho, keep);
  });
  m.def("choi_state", &choi_state);
  m.def("channel_fidelity", &channel_fidelity);
  m.def("channel_fidelity_trace_sum", &channel_fidelity_trace_sum);
  m.def("choi_distance", &choi_distance);
  m.def("validate_channel", [](const KrausChannel& chan) {
    const ChannelReport r = validate_channel(chan);
    py::dict out;
    out["cptp"] = r.cptp;
    out["unital"] = r.unital;
    out["tp_violation"] = r.tp_violation;
    out["unital_violation"] = r.unital_violation;
    out["max_violation"] = r.max_violation;
    return out;
  });

  m.def("dephasing_channel",
        [](double p) { return dephasing_channel(DephasingStrength(p)); });
  m.def("bit_flip_channel",
        [](double p) { return bit_flip_channel(DephasingStrength(p)); });
  m.def("mixing_channel", [](double q) { return mixing_channel(MixingStrength(q)); });
  m.def("depolarizing_channel",
        [](double c) { return depolarizing_channel(GateErrorRate(c)); });
  m.def("noisy_unitary", [](const UnitaryGate& u, double c) {
    return noisy_unitary(u, GateErrorRate(c));
  });
  m.def("gate_fidelity",
        [](double c, int n) { return gate_fidelity(GateErrorRate(c), n); });
  m.def("gate_error_for_fidelity",
        [](double fidelity, int n) { return gate_error_for_fidelity(fidelity, n).c; });
  m.def(
      "polarization_from_temperature",
      [](double temperature, double gamma, double b0) {
        return polarization_from_temperature(ThermalSpec(gamma, b0, temperature)).epsilon;
      },
      py::arg("temperature"), py::arg("gamma") = kGammaElectron,
      py::arg("b0") = kDefaultB0);
  m.def(
      "temperature_from_polarization",
      [](double eps, double gamma, double b0) {
        return temperature_from_polarization(Polarization(eps), gamma, b0);
      },
      py::arg("epsilon"), py::arg("gamma") = kGammaElectron, py::arg("b0") = kDefaultB0);
  m.def("thermal_state",
        [](double eps, int n) { return thermal_state(Polarization(eps), n); });

  m.def("build_code", [](CodeKind kind) {
    const CodeCircuit code = build_code(kind);
    return py::make_tuple(code.encoder, code.decoder);
  });
  m.def(
      "build_pipeline",
      [](CodeKind kind, double p, const py::object& q, const py::object& ancilla,
         double c, bool per_gate_noise) {
        return build_pipeline(make_spec(kind, p, q, ancilla, c, per_gate_noise));
      },
      py::arg("kind"), py::arg("p"), py::arg("q") = py::none(),
      py::arg("ancilla") = py::none(), py::arg("c") = 0.0,
      py::arg("per_gate_noise") = false);
  m.def(
      "pipeline_fidelity",
      [](CodeKind kind, double p, const py::object& q, const py::object& ancilla,
         double c, bool per_gate_noise) {
        return pipeline_fidelity(make_spec(kind, p, q, ancilla, c, per_gate_noise));
      },
      py::arg("kind"), py::arg("p"), py::arg("q") = py::none(),
      py::arg("ancilla") = py::none(), py::arg("c") = 0.0,
      py::arg("per_gate_noise") = false);
  m.def(
      "closed_form_fidelity",
      [](CodeKind kind, double p, const py::object& q, const py::object& ancilla) {
        py::dict out;
        if (!q.is_none()) {
          const auto r = closed_form_fidelity(kind, DephasingStrength(p),
                                              MixingStrength(q.cast<double>()));
          out["from_rho"] = r.from_rho;
          out["polynomial_pq"] = *r.polynomial_pq;
        } else {
          const auto r = closed_form_fidelity(kind, DephasingStrength(p),
                                              ancilla.cast<AncillaState>());
          out["from_rho"] = r.from_rho;
          out["polynomial_pq"] = py::none();
        }
        return out;
      },
      py::arg("kind"), py::arg("p"), py::arg("q") = py::none(),
      py::arg("ancilla") = py::none());
  m.def(
      "critical_rho00",
      [](CodeKind kind, double p, double c) {
        const CriticalAncilla crit =
            critical_rho00(kind, DephasingStrength(p), GateErrorRate(c));
        py::dict out;
        out["attainable"] = crit.attainable;
        out["rho00"] = crit.rho00;
        out["q"] = crit.q;
        return out;
      },
      py::arg("kind"), py::arg("p"), py::arg("c") = 0.0);

  m.def("compression", [](const DensityMatrix& rho) {
    CompressionResult r = compression(rho);
    return py::make_tuple(r.state, r.permutation);
  });
  m.def("exchange", [](const DensityMatrix& rho, int target, double eps) {
    return exchange(rho, target, Polarization(eps));
  });
  m.def(
      "ppa_run",
      [](const DensityMatrix& initial, double bath_eps, int iterations, int n_register,
         double c, int exchange_target, bool exchange_first) {
        PPAConfig config{n_register > 0 ? n_register : initial.n_qubits(),
                         Polarization(bath_eps), iterations, exchange_target,
                         GateErrorRate(c), exchange_first};
        const PPATrace trace = ppa_run(config, initial);
        py::dict out;
        out["snapshots"] = trace.snapshots;
        out["permutations"] = trace.permutations;
        return out;
      },
      py::arg("initial"), py::arg("bath_eps"), py::arg("iterations"),
      py::arg("n_register") = -1, py::arg("c") = 0.0, py::arg("exchange_target") = -1,
      py::arg("exchange_first") = false);
  m.def(
      "ppa_cool",
      [](const DensityMatrix& rho, const std::vector<int>& targets, double bath_eps,
         int iterations, double c, bool exchange_first) {
        return ppa_cool(rho, targets, Polarization(bath_eps), iterations,
                        GateErrorRate(c), exchange_first);
      },
      py::arg("rho"), py::arg("targets"), py::arg("bath_eps"), py::arg("iterations"),
      py::arg("c") = 0.0, py::arg("exchange_first") = false);
  m.def("refresh_metrics", [](const DensityMatrix& rho) {
    const RefreshMetrics r = refresh_metrics(rho);
    py::dict out;
    out["rho00_pair"] = r.rho00_pair;
    out["message_pop"] = r.message_pop;
    out["per_qubit_p0"] = r.per_qubit_p0;
    out["ancilla_pair"] = py::make_tuple(r.ancilla_a, r.ancilla_b);
    out["message_qubit"] = r.message_qubit;
    return out;
  });

  py::class_<MultiRoundSpec>(m, "MultiRoundSpec")
      .def(py::init<>())
      .def_readwrite("protocol", &MultiRoundSpec::protocol)
      .def_readwrite("kind", &MultiRoundSpec::kind)
      .def_readwrite("rounds", &MultiRoundSpec::rounds)
      .def_readwrite("p", &MultiRoundSpec::p)
      .def_property(
          "bath_eps", [](const MultiRoundSpec& s) { return s.bath.epsilon; },
          [](MultiRoundSpec& s, double eps) { s.bath = Polarization(eps); })
      .def_readwrite("refresh_iterations", &MultiRoundSpec::refresh_iterations)
      .def_readwrite("init_iterations", &MultiRoundSpec::init_iterations)
      .def_property(
          "c", [](const MultiRoundSpec& s) { return s.c.c; },
          [](MultiRoundSpec& s, double c) { s.c = GateErrorRate(c); })
      .def_readwrite("theta", &MultiRoundSpec::theta)
      .def_readwrite("phi", &MultiRoundSpec::phi)
      .def_readwrite("dephase_during_refresh", &MultiRoundSpec::dephase_during_refresh)
      .def_readwrite("ideal_refresh", &MultiRoundSpec::ideal_refresh);

  py::class_<ExperimentSpec>(m, "ExperimentSpec")
      .def(py::init<>())
      .def_static("defaults_for", &ExperimentSpec::defaults_for)
      .def_readwrite("id", &ExperimentSpec::id)
      .def_readwrite("p_min", &ExperimentSpec::p_min)
      .def_readwrite("p_max", &ExperimentSpec::p_max)
      .def_readwrite("p_steps", &ExperimentSpec::p_steps)
      .def_readwrite("q", &ExperimentSpec::q)
      .def_readwrite("c", &ExperimentSpec::c)
      .def_readwrite("c_min", &ExperimentSpec::c_min)
      .def_readwrite("c_max", &ExperimentSpec::c_max)
      .def_readwrite("c_steps", &ExperimentSpec::c_steps)
      .def_readwrite("temp_min", &ExperimentSpec::temp_min)
      .def_readwrite("temp_max", &ExperimentSpec::temp_max)
      .def_readwrite("temp_steps", &ExperimentSpec::temp_steps)
      .def_readwrite("iterations", &ExperimentSpec::iterations)
      .def_readwrite("n_register", &ExperimentSpec::n_register)
      .def_readwrite("kind", &ExperimentSpec::kind)
      .def_readwrite("start", &ExperimentSpec::start)
      .def_readwrite("bath_eps", &ExperimentSpec::bath_eps)
      .def_readwrite("temperature", &ExperimentSpec::temperature)
      .def_readwrite("gamma", &ExperimentSpec::gamma)
      .def_readwrite("b0", &ExperimentSpec::b0)
      .def_readwrite("gate_fidelities", &ExperimentSpec::gate_fidelities)
      .def_readwrite("exchange_first", &ExperimentSpec::exchange_first)
      .def_readwrite("multiround", &ExperimentSpec::multiround)
      .def_readwrite("output", &ExperimentSpec::output)
      .def_readwrite("format", &ExperimentSpec::format);

  m.def("run_experiment",
        [](const ExperimentSpec& spec) { return table_dict(run_experiment(spec)); });
  m.def("multiround_sim",
        [](const MultiRoundSpec& spec) { return table_dict(multiround_sim(spec)); });
  m.def(
      "run_experiment_to_file",
      [](const ExperimentSpec& spec, TableFormat format,
         const std::filesystem::path& path) {
        emit(run_experiment(spec), format, path);
      },
      py::arg("spec"), py::arg("format"), py::arg("path"));
  m.def(
      "render_experiment",
      [](const ExperimentSpec& spec, TableFormat format) {
        return render(run_experiment(spec), format);
      },
      py::arg("spec"), py::arg("format") = TableFormat::Csv);
}
