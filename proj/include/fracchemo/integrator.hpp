#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "fracchemo/diagnostics.hpp"
#include "fracchemo/dynamics.hpp"

namespace fracchemo {

enum class StepMode {
  full,
  linear_only,  // coupling terms dropped: u follows the exact diffusion semigroup, q is frozen
};

std::string_view to_string(StepMode m);
StepMode parse_step_mode(std::string_view text);

struct IntegratorSettings {
  double dt_max = 1e-3;
  double cfl = 0.4;
  double t_end = 1.0;
  int sample_every = 1;
  StepMode mode = StepMode::full;
  double blowup_cap = 1e6;   // stop once max |u| exceeds this
  bool keep_states = false;  // store a State per recorded row

  void validate() const;
};

/// Raised by a stepper that produced non-finite values.
class NonFiniteState : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Integrating-factor Heun scheme: the diffusion multiplier exp(-|k|^alpha dt)
/// is applied exactly, the explicit terms use two stages.
class IfRk2Stepper {
 public:
  IfRk2Stepper(const Grid& grid, ModelParams params, StepMode mode = StepMode::full);

  State step(const State& s, double dt);
  Dynamics& dynamics() noexcept { return dynamics_; }

 private:
  void refresh_decay(double dt);
  void apply_decay(SpectralField& f) const;

  Dynamics dynamics_;
  StepMode mode_;
  double cached_dt_ = -1.0;
  std::vector<double> decay_;
};

State step_ifrk2(const State& s, const ModelParams& p, double dt, StepMode mode = StepMode::full);

/// min(dt_max, cfl / (max|q|/dx + max|u|/dx + 1e-12)).
double cfl_dt(const State& s, const ModelParams& p, const IntegratorSettings& settings);
double cfl_dt(double max_abs_u, double max_abs_q, const Grid& grid, const IntegratorSettings& settings);

using StepFunction = std::function<State(const State&, double)>;

struct RunOptions {
  bool irrotational = false;
  /// Fixed step instead of the CFL rule (the last step is shortened to hit t_end).
  double fixed_dt = 0.0;
  std::function<void(const DiagnosticsRow&)> on_row;
  /// Called after every accepted step; `last` marks the terminal state.
  std::function<void(const State&, std::size_t step, bool last)> on_step;
};

/// Generic driver: advances with `step`, measures diagnostics at every step
/// boundary, records rows every `sample_every` steps and at the end.
Trajectory integrate(const State& initial, const ModelParams& params, const IntegratorSettings& settings,
                     const StepFunction& step, const RunOptions& options = {});

/// IFRK2 with the CFL rule.
Trajectory simulate(const State& initial, const ModelParams& params, const IntegratorSettings& settings,
                    const RunOptions& options = {});

}  // namespace fracchemo
