#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fracchemo/scenario.hpp"

namespace fracchemo {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int error = 1;
inline constexpr int blowup = 2;
}  // namespace exit_code

/// Diagnostics CSV: fixed header, one row per DiagnosticsRow, %.17g numbers,
/// flushed after every row.
class DiagnosticsCsv {
 public:
  explicit DiagnosticsCsv(std::ostream& out);
  explicit DiagnosticsCsv(const std::filesystem::path& path);

  void write(const DiagnosticsRow& row);

  static std::string header();
  static std::string format(const DiagnosticsRow& row);

 private:
  std::ofstream file_;
  std::ostream* out_;
};

struct CommandOptions {
  std::filesystem::path out_dir = ".";
  int workers = 1;
  std::optional<std::uint64_t> seed;
  std::ostream* log = nullptr;  // defaults to std::cout
};

Scenario load_scenario(const std::filesystem::path& path, bool strict, std::vector<std::string>* warnings);

/// One verdict of the verify suite.
struct Check {
  std::string scenario;
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

/// Runs the scenario and evaluates every residual, monitor and conservation
/// check that applies to it.
std::vector<Check> verify_scenario(const Scenario& sc);

/// Small fast scenarios used by `verify` without a config.
std::vector<Scenario> smoke_scenarios();

int command_run(const Scenario& sc, const CommandOptions& opt);
int command_verify(const std::vector<Scenario>& scenarios, const CommandOptions& opt);
int command_sweep(const Scenario& sc, const CommandOptions& opt);
int command_scaling(const Scenario& sc, const CommandOptions& opt);
int command_sobolev(std::size_t budget, std::uint64_t seed, const CommandOptions& opt);
int command_bench(const CommandOptions& opt);

}  // namespace fracchemo
