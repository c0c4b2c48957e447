#include "qecool/experiments.hpp"

#include "json.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

namespace qecool {

namespace {

using OrderedJson = nlohmann::ordered_json;

// Reported in place of rho00_crit when no ancilla purity can reach 1-p.
constexpr double kUnattainable = 2.0;

std::vector<double> linspace(double lo, double hi, int steps) {
  std::vector<double> v;
  v.reserve(static_cast<std::size_t>(steps));
  if (steps == 1) {
    v.push_back(lo);
    return v;
  }
  for (int i = 0; i < steps; ++i)
    v.push_back(lo + (hi - lo) * static_cast<double>(i) / (steps - 1));
  return v;
}

std::vector<int> all_qubits(int n) {
  std::vector<int> v(static_cast<std::size_t>(n));
  std::iota(v.begin(), v.end(), 0);
  return v;
}

DensityMatrix uniform_state(int n) {
  const auto d = static_cast<Eigen::Index>(dim_for(n));
  return DensityMatrix::diagonal(RealVector::Constant(d, 1.0 / static_cast<double>(d)));
}

double pair_population(const DensityMatrix& reg, int a, int b) {
  const int n = reg.n_qubits();
  const RealVector diag = reg.diagonal_probabilities();
  double acc = 0.0;
  for (Eigen::Index x = 0; x < diag.size(); ++x)
    if (!bit_of(static_cast<std::size_t>(x), a, n) &&
        !bit_of(static_cast<std::size_t>(x), b, n))
      acc += diag[x];
  return acc;
}

/// Replace the qubits at `positions` with a fresh state, discarding them.
DensityMatrix replace_with_state(const DensityMatrix& reg,
                                 std::span<const int> positions,
                                 const DensityMatrix& fresh) {
  const int n = reg.n_qubits();
  std::vector<int> others;
  for (int q = 0; q < n; ++q)
    if (std::find(positions.begin(), positions.end(), q) == positions.end())
      others.push_back(q);
  DensityMatrix combined = partial_trace(reg, others).tensor(fresh);
  std::vector<int> new_position(static_cast<std::size_t>(n));
  int k = 0;
  for (int q : others) new_position[static_cast<std::size_t>(k++)] = q;
  for (int q : positions) new_position[static_cast<std::size_t>(k++)] = q;
  return apply_unitary(combined, qubit_permutation_gate(new_position), all_qubits(n));
}

std::string format_value(double v) { return format_double(v); }
std::string format_value(int v) { return std::to_string(v); }
std::string format_value(bool v) { return v ? "true" : "false"; }

}  // namespace

std::string format_double(double value) {
  std::array<char, 64> buf;
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                                 std::chars_format::general, 17);
  return std::string(buf.data(), res.ptr);
}

std::string render(const ResultTable& table, TableFormat format) {
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size())
      throw std::invalid_argument("table row width does not match column count");
    for (double v : row)
      if (!std::isfinite(v))
        throw std::invalid_argument("table contains a non-finite value");
  }
  if (format == TableFormat::Csv) {
    std::string out;
    for (const auto& [key, value] : table.provenance)
      out += "# " + key + "=" + value + "\n";
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
      if (i) out += ',';
      out += table.columns[i];
    }
    out += '\n';
    for (const auto& row : table.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out += ',';
        out += format_double(row[i]);
      }
      out += '\n';
    }
    return out;
  }
  OrderedJson j;
  OrderedJson prov;
  for (const auto& [key, value] : table.provenance) prov[key] = value;
  j["provenance"] = std::move(prov);
  j["columns"] = table.columns;
  j["rows"] = table.rows;
  return j.dump(2) + "\n";
}

void emit(const ResultTable& table, TableFormat format,
          const std::filesystem::path& path) {
  const std::string text = render(table, format);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open output file " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.flush();
  if (!out) throw std::runtime_error("failed writing output file " + path.string());
}

// ---------------------------------------------------------------------------
// Multi-round simulation

void MultiRoundSpec::validate() const {
  if (rounds < 1) throw std::invalid_argument("rounds must be >= 1");
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("transmission dephasing must lie in [0, 1]");
  if (refresh_iterations < 0)
    throw std::invalid_argument("refresh iterations must be >= 0");
  if (init_iterations < -1)
    throw std::invalid_argument("init iterations must be >= 0 (or -1 for default)");
  if (!(c.c >= 0.0 && c.c <= 4.0 / 3.0))
    throw std::invalid_argument("gate error rate must lie in [0, 4/3]");
  if (!std::isfinite(theta) || !std::isfinite(phi))
    throw std::invalid_argument("preparation angles must be finite");
}

ResultTable multiround_sim(const MultiRoundSpec& spec) {
  spec.validate();
  const bool six = spec.protocol == Protocol::SixQubit;
  const int n = six ? 6 : 4;
  const int helper = n - 1;
  const DephasingStrength p(spec.p);
  const int init_iters =
      spec.init_iterations < 0 ? spec.refresh_iterations : spec.init_iterations;

  const CodeCircuit circuit = build_code(spec.kind);
  const KrausChannel encode_chan = spec.c.c > 0.0
                                       ? noisy_unitary(circuit.encoder, spec.c)
                                       : KrausChannel::from_unitary(circuit.encoder);
  const KrausChannel decode_chan = spec.c.c > 0.0
                                       ? noisy_unitary(circuit.decoder, spec.c)
                                       : KrausChannel::from_unitary(circuit.decoder);
  const KrausChannel deph = dephasing_channel(p);

  DensityMatrix reg = uniform_state(n);
  if (spec.ideal_refresh) {
    DensityMatrix anc = DensityMatrix::diagonal(spec.ideal_refresh->diagonal());
    reg = DensityMatrix::basis_state(1, 0).tensor(anc);
    if (six) reg = reg.tensor(anc);
    reg = reg.tensor(thermal_state(spec.bath, 1));
  } else {
    reg = ppa_cool(reg, all_qubits(n), spec.bath, init_iters, spec.c);
    // Rank qubits by P(|0>) and wire: top two -> ancilla pair, third ->
    // message, the rest (least polarized last) -> spare pair / PPA helper.
    const RealVector diag = reg.diagonal_probabilities();
    std::vector<double> p0(static_cast<std::size_t>(n), 0.0);
    for (Eigen::Index x = 0; x < diag.size(); ++x)
      for (int qb = 0; qb < n; ++qb)
        if (!bit_of(static_cast<std::size_t>(x), qb, n))
          p0[static_cast<std::size_t>(qb)] += diag[x];
    std::vector<int> order = all_qubits(n);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return p0[static_cast<std::size_t>(a)] > p0[static_cast<std::size_t>(b)];
    });
    const std::vector<int> role = six ? std::vector<int>{1, 2, 0, 3, 4, 5}
                                      : std::vector<int>{1, 2, 0, 3};
    std::vector<int> new_position(static_cast<std::size_t>(n));
    for (int r = 0; r < n; ++r)
      new_position[static_cast<std::size_t>(order[static_cast<std::size_t>(r)])] =
          role[static_cast<std::size_t>(r)];
    reg = apply_unitary(reg, qubit_permutation_gate(new_position), all_qubits(n));
  }

  Vector psi(2);
  psi << Complex{std::cos(spec.theta / 2.0), 0.0},
      std::polar(std::sin(spec.theta / 2.0), spec.phi);
  reg = replace_with_state(reg, std::vector<int>{0}, DensityMatrix::pure(psi));

  std::array<int, 2> active{1, 2};
  std::array<int, 2> idle{3, 4};

  ResultTable table;
  table.columns = {"round", "fidelity", "rho00_pair"};
  for (int round = 1; round <= spec.rounds; ++round) {
    const std::vector<int> code{0, active[0], active[1]};
    reg = apply_channel(reg, encode_chan, code);
    for (int qb : code) reg = apply_channel(reg, deph, std::vector<int>{qb});
    reg = apply_channel(reg, decode_chan, code);

    const DensityMatrix msg = partial_trace(reg, std::vector<int>{0});
    const double fidelity = std::real(psi.dot(msg.entries() * psi));

    const std::array<int, 2> pair = six ? idle : active;
    if (spec.ideal_refresh) {
      reg = replace_with_state(reg, pair,
                               DensityMatrix::diagonal(spec.ideal_refresh->diagonal()));
    } else {
      const std::vector<int> cool{pair[0], pair[1], helper};
      reg = ppa_cool(reg, cool, spec.bath, spec.refresh_iterations, spec.c);
    }
    if (!six && spec.dephase_during_refresh)
      reg = apply_channel(reg, deph, std::vector<int>{0});

    table.rows.push_back({static_cast<double>(round), fidelity,
                          pair_population(reg, pair[0], pair[1])});
    if (six) std::swap(active, idle);
  }

  table.provenance = {
      {"engine", std::string(kEngineVersion)},
      {"experiment", "multiround"},
      {"protocol", six ? "six" : "four"},
      {"code", spec.kind == CodeKind::Optimal ? "optimal" : "traditional"},
      {"rounds", format_value(spec.rounds)},
      {"p", format_value(spec.p)},
      {"bath_eps", format_value(spec.bath.epsilon)},
      {"refresh_iterations", format_value(spec.refresh_iterations)},
      {"init_iterations", format_value(init_iters)},
      {"c", format_value(spec.c.c)},
      {"theta", format_value(spec.theta)},
      {"phi", format_value(spec.phi)},
      {"dephase_during_refresh", format_value(spec.dephase_during_refresh)},
  };
  if (spec.ideal_refresh) {
    table.provenance.emplace_back("ideal_refresh_rho00",
                                  format_value(spec.ideal_refresh->rho00));
    table.provenance.emplace_back("ideal_refresh_rho01",
                                  format_value(spec.ideal_refresh->rho01));
    table.provenance.emplace_back("ideal_refresh_rho10",
                                  format_value(spec.ideal_refresh->rho10));
    table.provenance.emplace_back("ideal_refresh_rho11",
                                  format_value(spec.ideal_refresh->rho11));
  }
  return table;
}

// ---------------------------------------------------------------------------
// Declarative experiments

const std::vector<std::string>& ExperimentSpec::known_ids() {
  static const std::vector<std::string> ids{
      "fidelity-curves", "critical-ancilla", "hbac-trace",     "hbac-contour",
      "init-contour",    "imperfect-gates",  "imperfect-hbac", "multiround"};
  return ids;
}

ExperimentSpec ExperimentSpec::defaults_for(const std::string& id) {
  ExperimentSpec spec;
  spec.id = id;
  if (id == "critical-ancilla" || id == "imperfect-gates") {
    spec.p_min = 0.025;
    spec.p_max = 0.475;
    spec.p_steps = 19;
  } else if (id == "hbac-trace") {
    spec.iterations = 5;
  } else if (id == "hbac-contour" || id == "init-contour") {
    spec.iterations = 10;
  } else if (id == "imperfect-hbac") {
    spec.iterations = 6;
    spec.bath_eps = 0.3;
  } else if (id == "multiround") {
    spec.bath_eps = 0.36;
  }
  return spec;
}

void ExperimentSpec::validate() const {
  const auto& ids = known_ids();
  if (std::find(ids.begin(), ids.end(), id) == ids.end())
    throw std::invalid_argument("unknown experiment id '" + id + "'");
  if (p_steps < 1 || c_steps < 1 || temp_steps < 1)
    throw std::invalid_argument("step counts must be >= 1");
  if (p_min > p_max || c_min > c_max || temp_min > temp_max)
    throw std::invalid_argument("parameter range is empty");
  if (!(p_min >= 0.0 && p_max <= 1.0))
    throw std::invalid_argument("dephasing range must lie in [0, 1]");
  if (id == "critical-ancilla" || id == "imperfect-gates") {
    if (!(p_min > 0.0 && p_max < 0.5))
      throw std::invalid_argument("critical thresholds require 0 < p < 1/2");
  }
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("q must lie in [0, 1]");
  if (!(c >= 0.0 && c <= 4.0 / 3.0) || !(c_min >= 0.0 && c_max <= 4.0 / 3.0))
    throw std::invalid_argument("gate error rates must lie in [0, 4/3]");
  if (!(temp_min > 0.0)) throw std::invalid_argument("temperatures must be positive");
  if (iterations < 0) throw std::invalid_argument("iteration count must be >= 0");
  if ((id == "hbac-contour" || id == "init-contour") && iterations < 1)
    throw std::invalid_argument("contour grids need at least one iteration");
  if (n_register < 2) throw std::invalid_argument("register needs at least 2 qubits");
  if (n_register > 8) throw std::invalid_argument("registers above 8 qubits unsupported");
  if ((id == "hbac-contour" || id == "init-contour" || id == "imperfect-hbac") &&
      n_register < 3)
    throw std::invalid_argument(id + " needs at least 3 qubits");
  if (start != "auto" && start != "bath" && start != "mixed")
    throw std::invalid_argument("start must be auto, bath or mixed");
  if (bath_eps && !(*bath_eps >= 0.0 && *bath_eps <= 1.0))
    throw std::invalid_argument("bath polarization must lie in [0, 1]");
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
  if (b0 < 0.0) throw std::invalid_argument("field must be non-negative");
  if (gate_fidelities.empty())
    throw std::invalid_argument("gate fidelity list must be non-empty");
  for (double f : gate_fidelities)
    if (!(f > 0.0 && f <= 1.0))
      throw std::invalid_argument("gate fidelities must lie in (0, 1]");
  if (format != "csv" && format != "json")
    throw std::invalid_argument("format must be csv or json");
  if (id == "multiround") multiround.validate();
}

Polarization ExperimentSpec::resolve_bath() const {
  if (bath_eps) return Polarization(*bath_eps);
  return polarization_from_temperature(ThermalSpec(gamma, b0, temperature));
}

namespace {

void echo_common(ResultTable& table, const ExperimentSpec& spec) {
  table.provenance.emplace_back("engine", std::string(kEngineVersion));
  table.provenance.emplace_back("experiment", spec.id);
}

void echo_thermal(ResultTable& table, const ExperimentSpec& spec) {
  table.provenance.emplace_back("gamma", format_value(spec.gamma));
  table.provenance.emplace_back("b0", format_value(spec.b0));
}

DensityMatrix start_state(const std::string& start, const std::string& auto_choice,
                          int n, Polarization bath) {
  const std::string resolved = start == "auto" ? auto_choice : start;
  if (resolved == "bath") return thermal_state(bath, n);
  return uniform_state(n);
}

ResultTable run_fidelity_curves(const ExperimentSpec& spec) {
  ResultTable table;
  table.columns = {"p", "baseline", "f_traditional", "f_optimal"};
  const MixingStrength q(spec.q);
  const GateErrorRate c(spec.c);
  for (double p : linspace(spec.p_min, spec.p_max, spec.p_steps)) {
    const DephasingStrength dp(p);
    table.rows.push_back(
        {p, 1.0 - p,
         pipeline_fidelity(PipelineSpec::with_mixing(CodeKind::Traditional, dp, q, c)),
         pipeline_fidelity(PipelineSpec::with_mixing(CodeKind::Optimal, dp, q, c))});
  }
  echo_common(table, spec);
  table.provenance.emplace_back("q", format_value(spec.q));
  table.provenance.emplace_back("c", format_value(spec.c));
  table.provenance.emplace_back("p_min", format_value(spec.p_min));
  table.provenance.emplace_back("p_max", format_value(spec.p_max));
  table.provenance.emplace_back("p_steps", format_value(spec.p_steps));
  return table;
}

ResultTable run_critical_ancilla(const ExperimentSpec& spec) {
  ResultTable table;
  table.columns = {"p", "rho00_crit_traditional", "rho00_crit_optimal"};
  const GateErrorRate c(spec.c);
  for (double p : linspace(spec.p_min, spec.p_max, spec.p_steps)) {
    const DephasingStrength dp(p);
    const CriticalAncilla trad = critical_rho00(CodeKind::Traditional, dp, c);
    const CriticalAncilla opt = critical_rho00(CodeKind::Optimal, dp, c);
    table.rows.push_back({p, trad.attainable ? trad.rho00 : kUnattainable,
                          opt.attainable ? opt.rho00 : kUnattainable});
  }
  echo_common(table, spec);
  table.provenance.emplace_back("c", format_value(spec.c));
  table.provenance.emplace_back("p_min", format_value(spec.p_min));
  table.provenance.emplace_back("p_max", format_value(spec.p_max));
  table.provenance.emplace_back("p_steps", format_value(spec.p_steps));
  return table;
}

ResultTable run_hbac_trace(const ExperimentSpec& spec) {
  const Polarization bath = spec.resolve_bath();
  PPAConfig config{spec.n_register, bath, spec.iterations, -1, GateErrorRate(spec.c),
                   spec.exchange_first};
  const DensityMatrix initial = start_state(spec.start, "mixed", spec.n_register, bath);
  const PPATrace trace = ppa_run(config, initial);

  ResultTable table;
  table.columns = {"op", "kind"};
  const auto d = static_cast<Eigen::Index>(dim_for(spec.n_register));
  for (Eigen::Index i = 0; i < d; ++i)
    table.columns.push_back("d" + std::to_string(i));
  for (std::size_t s = 0; s < trace.snapshots.size(); ++s) {
    // kind: 0 initial, 1 compression, 2 exchange
    double kind = 0.0;
    if (s > 0) {
      const bool first_is_exchange = spec.exchange_first;
      const bool odd = s % 2 == 1;
      kind = (odd != first_is_exchange) ? 1.0 : 2.0;
    }
    std::vector<double> row{static_cast<double>(s), kind};
    for (Eigen::Index i = 0; i < trace.snapshots[s].size(); ++i)
      row.push_back(trace.snapshots[s][i]);
    table.rows.push_back(std::move(row));
  }
  echo_common(table, spec);
  table.provenance.emplace_back("n_register", format_value(spec.n_register));
  table.provenance.emplace_back("bath_eps", format_value(bath.epsilon));
  table.provenance.emplace_back("iterations", format_value(spec.iterations));
  table.provenance.emplace_back("c", format_value(spec.c));
  table.provenance.emplace_back("start", spec.start == "auto" ? "mixed" : spec.start);
  table.provenance.emplace_back("exchange_first", format_value(spec.exchange_first));
  echo_thermal(table, spec);
  return table;
}

ResultTable run_contour(const ExperimentSpec& spec, bool message_metric) {
  ResultTable table;
  table.columns = {"temp_kelvin", "iterations",
                   message_metric ? "message_pop" : "rho00_pair"};
  const std::string auto_start = message_metric ? "mixed" : "bath";
  for (double t : linspace(spec.temp_min, spec.temp_max, spec.temp_steps)) {
    const Polarization eps =
        polarization_from_temperature(ThermalSpec(spec.gamma, spec.b0, t));
    DensityMatrix state = start_state(spec.start, auto_start, spec.n_register, eps);
    for (int k = 1; k <= spec.iterations; ++k) {
      state = ppa_cool(state, all_qubits(spec.n_register), eps, 1, GateErrorRate(spec.c));
      const RefreshMetrics metrics = refresh_metrics(state);
      table.rows.push_back({t, static_cast<double>(k),
                            message_metric ? metrics.message_pop : metrics.rho00_pair});
    }
  }
  echo_common(table, spec);
  table.provenance.emplace_back("n_register", format_value(spec.n_register));
  table.provenance.emplace_back("temp_min", format_value(spec.temp_min));
  table.provenance.emplace_back("temp_max", format_value(spec.temp_max));
  table.provenance.emplace_back("temp_steps", format_value(spec.temp_steps));
  table.provenance.emplace_back("iterations", format_value(spec.iterations));
  table.provenance.emplace_back("c", format_value(spec.c));
  table.provenance.emplace_back(
      "start", spec.start == "auto" ? auto_start : spec.start);
  echo_thermal(table, spec);
  return table;
}

ResultTable run_imperfect_gates(const ExperimentSpec& spec) {
  ResultTable table;
  table.columns = {"gate_fidelity", "c", "p", "attainable", "rho00_crit"};
  for (double gf : spec.gate_fidelities) {
    const GateErrorRate c = gate_error_for_fidelity(gf, 3);
    for (double p : linspace(spec.p_min, spec.p_max, spec.p_steps)) {
      const CriticalAncilla crit = critical_rho00(spec.kind, DephasingStrength(p), c);
      table.rows.push_back({gf, c.c, p, crit.attainable ? 1.0 : 0.0,
                            crit.attainable ? crit.rho00 : kUnattainable});
    }
  }
  echo_common(table, spec);
  table.provenance.emplace_back(
      "code", spec.kind == CodeKind::Optimal ? "optimal" : "traditional");
  std::string fids;
  for (std::size_t i = 0; i < spec.gate_fidelities.size(); ++i) {
    if (i) fids += ' ';
    fids += format_value(spec.gate_fidelities[i]);
  }
  table.provenance.emplace_back("gate_fidelities", fids);
  table.provenance.emplace_back("p_min", format_value(spec.p_min));
  table.provenance.emplace_back("p_max", format_value(spec.p_max));
  table.provenance.emplace_back("p_steps", format_value(spec.p_steps));
  return table;
}

ResultTable run_imperfect_hbac(const ExperimentSpec& spec) {
  ResultTable table;
  table.columns = {"c", "rho00_pair"};
  for (int q = 0; q < spec.n_register; ++q)
    table.columns.push_back("pol_q" + std::to_string(q));
  const Polarization bath = spec.resolve_bath();
  const std::string auto_start = spec.n_register == 3 ? "bath" : "mixed";
  for (double c : linspace(spec.c_min, spec.c_max, spec.c_steps)) {
    DensityMatrix state = start_state(spec.start, auto_start, spec.n_register, bath);
    state = ppa_cool(state, all_qubits(spec.n_register), bath, spec.iterations,
                     GateErrorRate(c));
    const RefreshMetrics metrics = refresh_metrics(state);
    std::vector<double> row{c, metrics.rho00_pair};
    for (double p0 : metrics.per_qubit_p0) row.push_back(2.0 * p0 - 1.0);
    table.rows.push_back(std::move(row));
  }
  echo_common(table, spec);
  table.provenance.emplace_back("n_register", format_value(spec.n_register));
  table.provenance.emplace_back("bath_eps", format_value(bath.epsilon));
  table.provenance.emplace_back("iterations", format_value(spec.iterations));
  table.provenance.emplace_back("c_min", format_value(spec.c_min));
  table.provenance.emplace_back("c_max", format_value(spec.c_max));
  table.provenance.emplace_back("c_steps", format_value(spec.c_steps));
  table.provenance.emplace_back(
      "start", spec.start == "auto" ? auto_start : spec.start);
  echo_thermal(table, spec);
  return table;
}

}  // namespace

ResultTable run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  if (spec.id == "fidelity-curves") return run_fidelity_curves(spec);
  if (spec.id == "critical-ancilla") return run_critical_ancilla(spec);
  if (spec.id == "hbac-trace") return run_hbac_trace(spec);
  if (spec.id == "hbac-contour") return run_contour(spec, false);
  if (spec.id == "init-contour") return run_contour(spec, true);
  if (spec.id == "imperfect-gates") return run_imperfect_gates(spec);
  if (spec.id == "imperfect-hbac") return run_imperfect_hbac(spec);
  MultiRoundSpec ms = spec.multiround;
  ms.bath = spec.resolve_bath();
  return multiround_sim(ms);
}

}  // namespace qecool
