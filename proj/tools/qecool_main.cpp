#include "CLI11.hpp"

#include "qecool/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

namespace {

struct Options {
  qecool::ExperimentSpec spec;
  std::string code = "optimal";
  std::string protocol = "four";
  double bath_eps = 0.0;
  double ideal_rho00 = 0.0;
  CLI::Option* bath_eps_opt = nullptr;
  CLI::Option* temp_opt = nullptr;
  CLI::Option* ideal_opt = nullptr;
};

void add_output_options(CLI::App* sub, Options& o) {
  sub->add_option("--output", o.spec.output,
                  "Output path (default <experiment>.<format>)");
  sub->add_option("--format", o.spec.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--gamma", o.spec.gamma, "Gyromagnetic ratio in rad/(s T)");
  sub->add_option("--b0", o.spec.b0, "Static field in tesla");
}

void add_p_sweep(CLI::App* sub, Options& o) {
  sub->add_option("--p-min", o.spec.p_min, "Dephasing sweep start");
  sub->add_option("--p-max", o.spec.p_max, "Dephasing sweep end");
  sub->add_option("--p-steps", o.spec.p_steps, "Dephasing sweep points");
}

void add_bath(CLI::App* sub, Options& o) {
  o.bath_eps_opt =
      sub->add_option("--bath-eps", o.bath_eps, "Bath polarization (overrides --temp)");
  o.temp_opt = sub->add_option("--temp", o.spec.temperature, "Bath temperature in kelvin");
}

void finalize(Options& o) {
  if (o.bath_eps_opt && o.bath_eps_opt->count() > 0)
    o.spec.bath_eps = o.bath_eps;
  else if (o.temp_opt && o.temp_opt->count() > 0)
    o.spec.bath_eps.reset();  // an explicit --temp beats the default bath_eps
  o.spec.kind = o.code == "traditional" ? qecool::CodeKind::Traditional
                                        : qecool::CodeKind::Optimal;
  if (o.spec.id == "multiround") {
    o.spec.multiround.kind = o.spec.kind;
    o.spec.multiround.protocol = o.protocol == "six" ? qecool::Protocol::SixQubit
                                                     : qecool::Protocol::FourQubit;
    if (o.ideal_opt && o.ideal_opt->count() > 0) {
      if (!(o.ideal_rho00 >= 0.25 && o.ideal_rho00 <= 1.0))
        throw std::invalid_argument(
            "--ideal-refresh-rho00 must lie in [0.25, 1] for a thermal pair");
      const double q = 2.0 * (1.0 - std::sqrt(o.ideal_rho00));
      o.spec.multiround.ideal_refresh =
          qecool::AncillaState::thermal(qecool::MixingStrength(q));
    }
  }
  if (o.spec.output.empty()) o.spec.output = o.spec.id + "." + o.spec.format;
}

void run(Options& o) {
  finalize(o);
  const qecool::ResultTable table = qecool::run_experiment(o.spec);
  const auto format = o.spec.format == "json" ? qecool::TableFormat::Json
                                              : qecool::TableFormat::Csv;
  qecool::emit(table, format, o.spec.output);
  std::fprintf(stderr, "wrote %s (%zu rows)\n", o.spec.output.c_str(),
               table.rows.size());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-temperature 3-qubit error correction and heat-bath "
               "algorithmic cooling experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(qecool::kEngineVersion));
  app.set_config("--config", "", "Read options from an INI/TOML file; flags override");

  std::vector<std::shared_ptr<Options>> bindings;
  auto make = [&](const std::string& id, const std::string& help) {
    auto o = std::make_shared<Options>();
    o->spec = qecool::ExperimentSpec::defaults_for(id);
    bindings.push_back(o);
    CLI::App* sub = app.add_subcommand(id, help);
    sub->fallthrough();  // lets --config reach the top-level app
    add_output_options(sub, *o);
    sub->callback([o]() { run(*o); });
    return std::pair<CLI::App*, std::shared_ptr<Options>>(sub, o);
  };

  {
    auto [sub, o] = make("fidelity-curves",
                         "Channel fidelity of both codes vs dephasing at fixed q");
    add_p_sweep(sub, *o);
    sub->add_option("--q", o->spec.q, "Ancilla mixing strength");
    sub->add_option("--c", o->spec.c, "Gate error rate");
  }
  {
    auto [sub, o] =
        make("critical-ancilla", "Ancilla rho00 needed to beat inaction, both codes");
    add_p_sweep(sub, *o);
    sub->add_option("--c", o->spec.c, "Gate error rate");
  }
  {
    auto [sub, o] = make("hbac-trace", "Per-operation diagonal snapshots of a PPA run");
    sub->add_option("--n-register", o->spec.n_register, "Register size");
    sub->add_option("--iters", o->spec.iterations, "PPA iterations");
    sub->add_option("--c", o->spec.c, "Compression gate error rate");
    sub->add_option("--start", o->spec.start, "Initial register: auto|bath|mixed")
        ->check(CLI::IsMember({"auto", "bath", "mixed"}));
    sub->add_flag("--exchange-first", o->spec.exchange_first,
                  "Run exchange before compression in each iteration");
    add_bath(sub, *o);
  }
  for (const char* id : {"hbac-contour", "init-contour"}) {
    auto [sub, o] = make(id, std::string(id) == "hbac-contour"
                                 ? "rho00_pair over (temperature, iterations)"
                                 : "Message-qubit purity over (temperature, iterations)");
    sub->add_option("--n-register", o->spec.n_register, "Register size");
    sub->add_option("--temp-min", o->spec.temp_min, "Temperature sweep start (K)");
    sub->add_option("--temp-max", o->spec.temp_max, "Temperature sweep end (K)");
    sub->add_option("--temp-steps", o->spec.temp_steps, "Temperature sweep points");
    sub->add_option("--iters", o->spec.iterations, "Iteration-axis maximum");
    sub->add_option("--c", o->spec.c, "Compression gate error rate");
    sub->add_option("--start", o->spec.start, "Initial register: auto|bath|mixed")
        ->check(CLI::IsMember({"auto", "bath", "mixed"}));
  }
  {
    auto [sub, o] = make("imperfect-gates",
                         "Critical rho00 under depolarizing gate noise families");
    add_p_sweep(sub, *o);
    sub->add_option("--code", o->code, "Code kind")
        ->check(CLI::IsMember({"traditional", "optimal"}));
    sub->add_option("--gate-fidelities", o->spec.gate_fidelities,
                    "Gate-fidelity family for the curves");
  }
  {
    auto [sub, o] =
        make("imperfect-hbac", "Polarizations after PPA with noisy compressions");
    sub->add_option("--n-register", o->spec.n_register, "Register size (3 or 4)");
    sub->add_option("--c-min", o->spec.c_min, "Gate error sweep start");
    sub->add_option("--c-max", o->spec.c_max, "Gate error sweep end");
    sub->add_option("--c-steps", o->spec.c_steps, "Gate error sweep points");
    sub->add_option("--iters", o->spec.iterations, "PPA iterations");
    sub->add_option("--start", o->spec.start, "Initial register: auto|bath|mixed")
        ->check(CLI::IsMember({"auto", "bath", "mixed"}));
    add_bath(sub, *o);
  }
  {
    auto [sub, o] = make("multiround", "Multi-round storage with ancilla refreshing");
    sub->add_option("--protocol", o->protocol, "four (testbed) or six (always encoded)")
        ->check(CLI::IsMember({"four", "six"}));
    sub->add_option("--code", o->code, "Code kind")
        ->check(CLI::IsMember({"traditional", "optimal"}));
    sub->add_option("--rounds", o->spec.multiround.rounds, "Error-correction rounds");
    sub->add_option("--p", o->spec.multiround.p, "Dephasing per transmission");
    sub->add_option("--c", o->spec.multiround.c.c, "Gate error rate");
    sub->add_option("--refresh-iters", o->spec.multiround.refresh_iterations,
                    "PPA iterations per refresh");
    sub->add_option("--init-iters", o->spec.multiround.init_iterations,
                    "PPA iterations for initialization (-1: same as refresh)");
    sub->add_option("--theta", o->spec.multiround.theta, "Preparation polar angle");
    sub->add_option("--phi", o->spec.multiround.phi, "Preparation azimuthal angle");
    sub->add_option("--dephase-during-refresh",
                    o->spec.multiround.dephase_during_refresh,
                    "Dephase the idle message during refresh (four-qubit only)");
    o->ideal_opt = sub->add_option(
        "--ideal-refresh-rho00", o->ideal_rho00,
        "Replace PPA refresh by resetting to a thermal pair with this rho00");
    add_bath(sub, *o);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "invalid spec: %s\n", e.what());
    return 2;
  } catch (const std::runtime_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 0;
}
