#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fracchemo/diagnostics.hpp"
#include "fracchemo/verification.hpp"

namespace fracchemo {

/// Configuration problem tied to a key and, when known, a line of the file.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, int line, const std::string& message);
  const std::string& key() const noexcept { return key_; }
  int line() const noexcept { return line_; }

 private:
  std::string key_;
  int line_;
};

/// One term of a mode-list recipe: amplitude * cos|sin(k.x + phase), or a constant.
struct ModeTerm {
  enum class Kind { constant, cosine, sine } kind = Kind::constant;
  double amplitude = 0.0;
  Wavevector k;
  double phase = 0.0;
};

/// Parses "0.1*cos(1) - 0.05*sin(2,1;0.3) + 1". Each term is a constant or
/// [amp*]cos|sin(k1[,k2][;phase]); `dim` fixes how many wavenumbers are allowed.
std::vector<ModeTerm> parse_recipe(std::string_view text, int dim);
std::string format_recipe(const std::vector<ModeTerm>& terms);
SpectralField realize(const std::vector<ModeTerm>& terms, const Grid& grid);

struct InitialRecipe {
  std::string u0;            // mode list
  std::vector<std::string> q0;  // one mode list per component (empty entries are zero)
  std::string q0_potential;  // q0 = grad(phi) when set
  std::string snapshot;      // path; overrides the mode lists
  std::string preset;        // "random_smooth" or empty
  double preset_amplitude = 0.1;
  int preset_band = 4;
};

struct Hypotheses {
  bool u0_nonnegative = false;
  bool irrotational = false;
  std::vector<Monitor> monitors;
  double monitor_tolerance = 1e-9;
};

struct OutputPlan {
  std::string csv = "diagnostics.csv";  // empty disables the CSV
  int snapshot_every = 0;               // steps; 0 writes only the final snapshot
  std::string snapshot_prefix = "snapshot";
};

struct VerifyPlan {
  double tol_energy = 1e-8;
  double tol_h1 = 1e-7;
  double tol_h2 = 1e-6;
  double tol_h1_2d = 1e-6;
};

struct SweepPlan {
  std::vector<double> alphas;
  std::vector<double> amplitudes;
  std::string csv = "sweep.csv";
};

struct Scenario {
  std::string name = "scenario";
  std::uint64_t seed = 1;
  int n = 64;
  double fixed_dt = 0.0;
  ModelParams model;
  IntegratorSettings settings;
  InitialRecipe initial;
  Hypotheses hypotheses;
  OutputPlan output;
  VerifyPlan verify;
  SweepPlan sweep;
  double scaling_lambda = 2.0;
  std::size_t sobolev_budget = 10000;
};

struct ParseOptions {
  bool strict = true;                       // unknown keys are errors
  std::vector<std::string>* warnings = nullptr;  // unknown keys land here otherwise
};

/// Parses key = value lines grouped in [sections]. Keys may also appear before
/// the first section when their name is unambiguous. Validates the model,
/// integrator settings and declared hypotheses.
Scenario parse_config(std::string_view text, const ParseOptions& options = {});

/// Normalized text form with every default materialized; parses back to the same Scenario.
std::string dump_config(const Scenario& sc);

/// Builds the initial state from the recipe (snapshot, preset or mode lists).
State initial_state(const Scenario& sc);

/// Throws ConfigError when the initial state violates a declared hypothesis.
void check_hypotheses(const Scenario& sc, const State& initial);

/// Problem view of a validated scenario.
Problem make_problem(const Scenario& sc);

}  // namespace fracchemo
