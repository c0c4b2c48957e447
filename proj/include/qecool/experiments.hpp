#pragma once

#include "qecool/codes.hpp"
#include "qecool/hbac.hpp"
#include "qecool/noise.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace qecool {

inline constexpr std::string_view kEngineVersion = "qecool 0.1.0";

struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  /// Ordered parameter echo plus engine version; written as comment lines in
  /// CSV and mirrored under "provenance" in JSON.
  std::vector<std::pair<std::string, std::string>> provenance;
};

enum class TableFormat { Csv, Json };

/// 17-significant-digit, locale-independent float text (round-trips doubles).
std::string format_double(double value);

/// Renders the table; throws on ragged rows or non-finite values.
std::string render(const ResultTable& table, TableFormat format);
void emit(const ResultTable& table, TableFormat format,
          const std::filesystem::path& path);

enum class Protocol { FourQubit, SixQubit };

struct MultiRoundSpec {
  Protocol protocol = Protocol::FourQubit;
  CodeKind kind = CodeKind::Optimal;
  int rounds = 5;
  double p = 0.1;  // dephasing per transmission
  Polarization bath{0.36};
  int refresh_iterations = 3;
  int init_iterations = -1;  // -1: same as refresh_iterations
  GateErrorRate c{0.0};
  double theta = 0.0;
  double phi = 0.0;
  /// Four-qubit protocol only: dephase the idle message once per refresh.
  bool dephase_during_refresh = true;
  /// When set, PPA init/refresh are replaced by resetting the ancilla pair
  /// to this fixed state each round.
  std::optional<AncillaState> ideal_refresh;

  void validate() const;
};

/// Multi-round storage simulation. Columns: round, fidelity (message state
/// fidelity against the prepared pure state, measured after decoding),
/// rho00_pair (P(|00>) on the pair refreshed during that round).
ResultTable multiround_sim(const MultiRoundSpec& spec);

struct ExperimentSpec {
  std::string id;

  double p_min = 0.0;
  double p_max = 0.5;
  int p_steps = 26;
  double q = 0.4;
  double c = 0.0;
  double c_min = 0.0;
  double c_max = 0.1;
  int c_steps = 21;
  double temp_min = 1.0;
  double temp_max = 8.0;
  int temp_steps = 15;
  int iterations = 6;       // trace length / contour maximum / imperfect-hbac
  int n_register = 3;
  CodeKind kind = CodeKind::Optimal;
  /// Initial register: "bath" (thermal at bath polarization), "mixed"
  /// (uniform diagonal), or "auto" (per-experiment default).
  std::string start = "auto";
  std::optional<double> bath_eps;  // overrides the temperature-derived value
  double temperature = 4.7;
  double gamma = kGammaElectron;
  double b0 = kDefaultB0;
  std::vector<double> gate_fidelities{1.0, 0.999, 0.99, 0.95};
  bool exchange_first = false;
  MultiRoundSpec multiround;
  std::string output;           // empty: "<id>.<format>"
  std::string format = "csv";   // csv | json

  static const std::vector<std::string>& known_ids();
  /// The documented per-experiment defaults.
  static ExperimentSpec defaults_for(const std::string& id);
  void validate() const;  // throws std::invalid_argument on an invalid spec
  /// Bath polarization: bath_eps if set, else tanh-law at `temperature`.
  Polarization resolve_bath() const;
};

ResultTable run_experiment(const ExperimentSpec& spec);

}  // namespace qecool
