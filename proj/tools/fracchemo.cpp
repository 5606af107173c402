// Command-line front end: run | verify | sweep | scaling-test | sobolev | bench | dump-config

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fracchemo/runner.hpp"

using namespace fracchemo;

namespace {

struct Flags {
  std::string config;
  std::string out = ".";
  int workers = 1;
  std::optional<std::uint64_t> seed;
  bool strict = false;
};

void add_common(CLI::App* cmd, Flags& f, bool config_required) {
  auto* opt = cmd->add_option("--config", f.config, "scenario file (key = value sections)");
  if (config_required) opt->required();
  opt->check(CLI::ExistingFile);
  cmd->add_option("--out", f.out, "output directory")->capture_default_str();
  cmd->add_option("--workers", f.workers, "worker threads for sweeps")->check(CLI::Range(1, 256))->capture_default_str();
  cmd->add_option("--seed", f.seed, "override the scenario seed");
  cmd->add_flag("--strict", f.strict, "reject unknown config keys instead of warning");
}

Scenario load(const Flags& f) {
  std::vector<std::string> warnings;
  Scenario sc = load_scenario(f.config, f.strict, &warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
  if (f.seed) sc.seed = *f.seed;
  return sc;
}

CommandOptions options(const Flags& f) {
  CommandOptions o;
  o.out_dir = f.out;
  o.workers = f.workers;
  o.seed = f.seed;
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pseudo-spectral solver and verification harness for fractional chemotaxis on the torus"};
  app.require_subcommand(1);
  Flags f;

  auto* run = app.add_subcommand("run", "integrate a scenario, write the diagnostics CSV and snapshots");
  add_common(run, f, true);
  auto* verify = app.add_subcommand("verify", "residual and monitor suite (bundled smoke set without --config)");
  add_common(verify, f, false);
  auto* sweep = app.add_subcommand("sweep", "alpha x amplitude sweep to CSV");
  add_common(sweep, f, true);
  auto* scaling = app.add_subcommand("scaling-test", "scaling symmetry discrepancy");
  add_common(scaling, f, true);
  auto* sobolev = app.add_subcommand("sobolev", "lower bound for the L4 / Hdot^(1/4) constant");
  add_common(sobolev, f, false);
  std::optional<std::size_t> budget;
  sobolev->add_option("--budget", budget, "ratio evaluations (default 10000 or [sobolev] budget)");
  auto* bench = app.add_subcommand("bench", "steps per second and FFT share");
  add_common(bench, f, false);
  auto* dump = app.add_subcommand("dump-config", "print the normalized scenario with defaults");
  add_common(dump, f, true);

  CLI11_PARSE(app, argc, argv);

  try {
    const CommandOptions o = options(f);
    if (*run) return command_run(load(f), o);
    if (*verify) {
      if (f.config.empty()) return command_verify(smoke_scenarios(), o);
      return command_verify({load(f)}, o);
    }
    if (*sweep) return command_sweep(load(f), o);
    if (*scaling) return command_scaling(load(f), o);
    if (*sobolev) {
      std::size_t n = 10000;
      std::uint64_t seed = f.seed.value_or(1);
      if (!f.config.empty()) {
        const Scenario sc = load(f);
        n = sc.sobolev_budget;
        seed = sc.seed;
      }
      if (budget) n = *budget;
      return command_sobolev(n, seed, o);
    }
    if (*bench) return command_bench(o);
    if (*dump) {
      std::cout << dump_config(load(f));
      return exit_code::ok;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return exit_code::error;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code::error;
  }
  return exit_code::error;
}
