#include "doctest.h"

#include "qecool/experiments.hpp"

#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

using namespace qecool;

namespace {

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// column-major vec: vec(K rho K^dagger) = (conj(K) (x) K) vec(rho)
Matrix superoperator(const KrausChannel& chan) {
  Matrix s = Matrix::Zero(chan.d_out() * chan.d_out(), chan.d_in() * chan.d_in());
  for (const auto& k : chan.operators()) s += kron(k.conjugate(), k);
  return s;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("doubles render with 17 significant digits and round-trip") {
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(0.5) == "0.5");
  const double value = 0.1234567890123456789;
  CHECK(std::stod(format_double(value)) == value);
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("tables render deterministically and reject bad content") {
  ResultTable table;
  table.columns = {"a", "b"};
  table.rows = {{1.0, 2.0}, {0.25, 1e-17}};
  table.provenance = {{"engine", std::string(kEngineVersion)}, {"experiment", "demo"}};
  CHECK(render(table, TableFormat::Csv) == render(table, TableFormat::Csv));
  CHECK(render(table, TableFormat::Json) == render(table, TableFormat::Json));

  ResultTable ragged = table;
  ragged.rows.push_back({1.0});
  CHECK_THROWS_AS(render(ragged, TableFormat::Csv), std::invalid_argument);

  ResultTable poisoned = table;
  poisoned.rows[0][0] = std::nan("");
  CHECK_THROWS_AS(render(poisoned, TableFormat::Csv), std::invalid_argument);
  poisoned.rows[0][0] = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(render(poisoned, TableFormat::Json), std::invalid_argument);
}

TEST_CASE("CSV and JSON forms carry identical numbers") {
  ExperimentSpec spec = ExperimentSpec::defaults_for("fidelity-curves");
  spec.p_steps = 5;
  const ResultTable table = run_experiment(spec);
  const std::string csv = render(table, TableFormat::Csv);

  const auto parsed = nlohmann::ordered_json::parse(render(table, TableFormat::Json));
  ResultTable rebuilt;
  for (const auto& c : parsed["columns"]) rebuilt.columns.push_back(c);
  for (const auto& row : parsed["rows"]) {
    std::vector<double> r;
    for (const auto& v : row) r.push_back(v.get<double>());
    rebuilt.rows.push_back(std::move(r));
  }
  for (const auto& [key, value] : parsed["provenance"].items())
    rebuilt.provenance.emplace_back(key, value.get<std::string>());
  CHECK(render(rebuilt, TableFormat::Csv) == csv);
}

TEST_CASE("invalid specs are rejected before any emission") {
  ExperimentSpec spec = ExperimentSpec::defaults_for("fidelity-curves");
  spec.p_steps = 0;
  CHECK_THROWS_AS(run_experiment(spec), std::invalid_argument);
  spec = ExperimentSpec::defaults_for("fidelity-curves");
  spec.p_min = 0.4;
  spec.p_max = 0.1;
  CHECK_THROWS_AS(run_experiment(spec), std::invalid_argument);
  spec = ExperimentSpec::defaults_for("hbac-contour");
  spec.temp_min = -1.0;
  CHECK_THROWS_AS(run_experiment(spec), std::invalid_argument);
  spec.id = "no-such-experiment";
  CHECK_THROWS_AS(run_experiment(spec), std::invalid_argument);
  spec = ExperimentSpec::defaults_for("critical-ancilla");
  spec.p_min = 0.0;  // thresholds need p > 0
  CHECK_THROWS_AS(run_experiment(spec), std::invalid_argument);
}

TEST_CASE("identical specs emit byte-identical files") {
  ExperimentSpec spec = ExperimentSpec::defaults_for("fidelity-curves");
  spec.p_steps = 4;
  const auto dir = std::filesystem::temp_directory_path();
  const auto a = dir / "qecool_det_a.csv";
  const auto b = dir / "qecool_det_b.csv";
  emit(run_experiment(spec), TableFormat::Csv, a);
  emit(run_experiment(spec), TableFormat::Csv, b);
  CHECK(slurp(a) == slurp(b));
  std::filesystem::remove(a);
  std::filesystem::remove(b);

  CHECK_THROWS_AS(
      emit(run_experiment(spec), TableFormat::Csv, dir / "no-such-dir" / "x.csv"),
      std::runtime_error);
}

TEST_CASE("fidelity-curves starts at (0, 1, 0.96, 1)") {
  ExperimentSpec spec = ExperimentSpec::defaults_for("fidelity-curves");
  spec.p_steps = 6;
  const ResultTable table = run_experiment(spec);
  CHECK(table.rows.size() == 6);
  CHECK(table.rows[0][0] == 0.0);
  CHECK(table.rows[0][1] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(table.rows[0][2] == doctest::Approx(0.96).epsilon(1e-12));
  CHECK(table.rows[0][3] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("critical-ancilla reports a constant one half for the optimal code") {
  ExperimentSpec spec = ExperimentSpec::defaults_for("critical-ancilla");
  spec.p_steps = 3;
  const ResultTable table = run_experiment(spec);
  for (const auto& row : table.rows) {
    CHECK(std::abs(row[2] - 0.5) < 1e-9);
    CHECK(row[1] > row[2]);  // the traditional code needs a purer ancilla
  }
}

TEST_CASE("hbac-trace on a thermalized pair never moves") {
  ExperimentSpec spec = ExperimentSpec::defaults_for("hbac-trace");
  spec.n_register = 2;
  spec.start = "bath";
  spec.bath_eps = 0.31;
  spec.iterations = 3;
  const ResultTable table = run_experiment(spec);
  CHECK(table.rows.size() == 7);
  for (const auto& row : table.rows)
    for (int i = 0; i < 4; ++i)
      CHECK(row[static_cast<std::size_t>(2 + i)] ==
            doctest::Approx(table.rows[0][static_cast<std::size_t>(2 + i)])
                .epsilon(1e-12));
}

TEST_CASE("hbac-trace reproduces the frozen cooling trajectory") {
  // frozen from tests/oracles/ppa_oracle.py (uniform start, eps = 0.31)
  ExperimentSpec spec = ExperimentSpec::defaults_for("hbac-trace");
  spec.n_register = 3;
  spec.start = "mixed";
  spec.bath_eps = 0.31;
  spec.iterations = 3;
  const ResultTable table = run_experiment(spec);
  REQUIRE(table.rows.size() == 7);
  // op 4 (second exchange): kind codes and diagonal
  const auto& row4 = table.rows[4];
  CHECK(row4[0] == 4.0);
  CHECK(row4[1] == 2.0);
  CHECK(row4[2] == doctest::Approx(0.2145125).epsilon(1e-12));
  CHECK(row4[3] == doctest::Approx(0.1129875).epsilon(1e-12));
  CHECK(row4[9] == doctest::Approx(0.0595125).epsilon(1e-12));
  // op 6: the register has exactly thermalized after three iterations
  const auto& row6 = table.rows[6];
  CHECK(row6[2] == doctest::Approx(0.281011375).epsilon(1e-12));
  CHECK(row6[9] == doctest::Approx(0.041063625).epsilon(1e-12));
}

TEST_CASE("contour grids are rectangular and hit the frozen cells") {
  ExperimentSpec spec = ExperimentSpec::defaults_for("hbac-contour");
  spec.temp_min = 3.4;
  spec.temp_max = 4.7;
  spec.temp_steps = 2;
  spec.iterations = 3;
  const ResultTable table = run_experiment(spec);
  REQUIRE(table.rows.size() == 6);
  // frozen from tests/oracles/ppa_oracle.py (calibrated gamma_e, B0)
  CHECK(table.rows[2][0] == 3.4);
  CHECK(table.rows[2][1] == 3.0);
  CHECK(table.rows[2][2] == doctest::Approx(0.58578197326795622).epsilon(1e-10));
  CHECK(table.rows[5][0] == 4.7);
  CHECK(table.rows[5][2] == doctest::Approx(0.49428031489205726).epsilon(1e-10));
}

TEST_CASE("init-contour thermalizes in three iterations before cooling past the bath") {
  ExperimentSpec spec = ExperimentSpec::defaults_for("init-contour");
  spec.temp_min = 3.0;
  spec.temp_max = 5.0;
  spec.temp_steps = 3;
  spec.iterations = 4;
  const ResultTable table = run_experiment(spec);
  REQUIRE(table.rows.size() == 12);
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    const double eps =
        polarization_from_temperature(ThermalSpec(spec.gamma, spec.b0, row[0])).epsilon;
    if (row[1] == 3.0)  // uniform start: three iterations reach the bath exactly
      CHECK(row[2] == doctest::Approx((1 + eps) / 2).epsilon(1e-12));
    // the message (third-ranked) qubit never exceeds the bath population
    CHECK(row[2] >= 0.5 - 1e-12);
    CHECK(row[2] <= (1 + eps) / 2 + 1e-12);
  }
}

TEST_CASE("imperfect-gates reports thresholds per gate-fidelity family") {
  ExperimentSpec spec = ExperimentSpec::defaults_for("imperfect-gates");
  spec.gate_fidelities = {1.0, 0.99};
  spec.p_min = 0.1;
  spec.p_max = 0.3;
  spec.p_steps = 2;
  const ResultTable table = run_experiment(spec);
  REQUIRE(table.rows.size() == 4);
  for (const auto& row : table.rows) {
    CHECK(row[3] == 1.0);  // attainable
    if (row[0] == 1.0)
      CHECK(std::abs(row[4] - 0.5) < 1e-9);
    else
      CHECK(row[4] > 0.5);
  }
}

TEST_CASE("imperfect-hbac matches the frozen oracle row") {
  ExperimentSpec spec = ExperimentSpec::defaults_for("imperfect-hbac");
  spec.c_min = 0.02;
  spec.c_max = 0.02;
  spec.c_steps = 1;
  const ResultTable table = run_experiment(spec);
  REQUIRE(table.rows.size() == 1);
  const auto& row = table.rows[0];
  // columns: c, rho00_pair, pol_q0, pol_q1, pol_q2
  CHECK(row[1] == doctest::Approx(0.487331095278866).epsilon(1e-12));
  CHECK(row[2] == doctest::Approx(0.499480293165743).epsilon(1e-12));
  CHECK(row[3] == doctest::Approx(0.285016671240208).epsilon(1e-12));
  CHECK(row[4] == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("one ideal round equals the single-shot pipeline") {
  MultiRoundSpec spec;
  spec.protocol = Protocol::FourQubit;
  spec.kind = CodeKind::Optimal;
  spec.rounds = 1;
  spec.p = 0.12;
  spec.theta = 0.0;
  spec.dephase_during_refresh = false;
  spec.ideal_refresh = AncillaState(1.0, 0.0, 0.0, 0.0);
  const ResultTable table = multiround_sim(spec);
  const double pipeline = channel_fidelity(build_pipeline(PipelineSpec::with_ancilla(
      CodeKind::Optimal, DephasingStrength(0.12), AncillaState(1.0, 0.0, 0.0, 0.0))));
  CHECK(std::abs(table.rows[0][1] - pipeline) < 1e-12);
}

TEST_CASE("a noiseless optimal run holds fidelity 1 forever") {
  MultiRoundSpec spec;
  spec.kind = CodeKind::Optimal;
  spec.rounds = 4;
  spec.p = 0.0;
  spec.theta = 1.1;  // arbitrary preparation
  spec.phi = 0.7;
  spec.bath = Polarization(0.31);
  spec.dephase_during_refresh = false;
  const ResultTable table = multiround_sim(spec);
  for (const auto& row : table.rows)
    CHECK(std::abs(row[1] - 1.0) < 1e-12);
}

TEST_CASE("ideal-refresh trajectories follow channel powers") {
  const AncillaState anc = AncillaState::thermal(MixingStrength(0.35));
  MultiRoundSpec spec;
  spec.kind = CodeKind::Optimal;
  spec.rounds = 5;
  spec.p = 0.15;
  spec.theta = 0.0;
  spec.dephase_during_refresh = false;
  spec.ideal_refresh = anc;
  const ResultTable table = multiround_sim(spec);

  const KrausChannel round_channel = build_pipeline(
      PipelineSpec::with_ancilla(CodeKind::Optimal, DephasingStrength(0.15), anc));
  // composing the channel with itself matches the superoperator square
  const Matrix s = superoperator(round_channel);
  const KrausChannel twice = compose_channels(round_channel, round_channel);
  CHECK((superoperator(twice) - s * s).cwiseAbs().maxCoeff() < 1e-12);

  Vector rho_vec(4);
  rho_vec << 1.0, 0.0, 0.0, 0.0;  // vec(|0><0|), column-major
  for (int r = 1; r <= spec.rounds; ++r) {
    rho_vec = (s * rho_vec).eval();
    CHECK(std::abs(table.rows[static_cast<std::size_t>(r - 1)][1] -
                   std::real(rho_vec(0))) < 1e-10);
  }
}

TEST_CASE("four- and six-qubit protocols coincide under ideal refresh") {
  const AncillaState anc = AncillaState::thermal(MixingStrength(0.4));
  MultiRoundSpec four;
  four.protocol = Protocol::FourQubit;
  four.rounds = 4;
  four.p = 0.1;
  four.theta = 0.6;
  four.phi = 0.3;
  four.dephase_during_refresh = false;
  four.ideal_refresh = anc;
  MultiRoundSpec six = four;
  six.protocol = Protocol::SixQubit;
  const ResultTable a = multiround_sim(four);
  const ResultTable b = multiround_sim(six);
  for (std::size_t r = 0; r < a.rows.size(); ++r) {
    CHECK(std::abs(a.rows[r][1] - b.rows[r][1]) < 1e-12);
    CHECK(std::abs(a.rows[r][2] - b.rows[r][2]) < 1e-12);
  }
}

TEST_CASE("with converged PPA refreshing both protocols reach the same pair state") {
  // Pairs polarized far beyond the bath are near-fixed under the PPA
  // (compression keeps them on top, exchange only touches the helper), so a
  // pair coming straight from a long initialization keeps its excess cold
  // through its first refresh. From round 3 on, every refresh input has been
  // through a decode, which lands it in the bath fixed point's basin.
  MultiRoundSpec four;
  four.protocol = Protocol::FourQubit;
  four.rounds = 5;
  four.p = 0.1;
  four.theta = 0.0;
  four.bath = Polarization(0.36);
  four.refresh_iterations = 60;
  four.dephase_during_refresh = false;
  MultiRoundSpec six = four;
  six.protocol = Protocol::SixQubit;
  const ResultTable a = multiround_sim(four);
  const ResultTable b = multiround_sim(six);
  for (std::size_t r = 2; r < a.rows.size(); ++r) {
    CHECK(std::abs(a.rows[r][2] - b.rows[r][2]) < 1e-9);
    // frozen standalone fixed point at eps = 0.36 (tests/oracles/ppa_oracle.py)
    CHECK(a.rows[r][2] == doctest::Approx(0.55671388101982733).epsilon(1e-7));
  }
}

TEST_CASE("dephasing the idle message can only hurt") {
  MultiRoundSpec spec;
  spec.kind = CodeKind::Optimal;
  spec.rounds = 4;
  spec.p = 0.12;
  spec.theta = 1.5707963267948966;  // equator state, exposed to dephasing
  spec.bath = Polarization(0.5);
  spec.refresh_iterations = 3;
  spec.dephase_during_refresh = true;
  const ResultTable exposed = multiround_sim(spec);
  spec.dephase_during_refresh = false;
  const ResultTable shielded = multiround_sim(spec);
  for (std::size_t r = 0; r < exposed.rows.size(); ++r)
    CHECK(exposed.rows[r][1] <= shielded.rows[r][1] + 1e-12);
}

TEST_CASE("experiment reruns are reproducible end to end") {
  for (const char* id : {"critical-ancilla", "hbac-trace", "multiround"}) {
    ExperimentSpec spec = ExperimentSpec::defaults_for(id);
    if (spec.id == "critical-ancilla") spec.p_steps = 2;
    if (spec.id == "multiround") spec.multiround.rounds = 2;
    const std::string first = render(run_experiment(spec), TableFormat::Json);
    const std::string second = render(run_experiment(spec), TableFormat::Json);
    CHECK(first == second);
  }
}
