#include "fracchemo/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fracchemo/operators.hpp"

namespace fracchemo {

std::string_view to_string(StepMode m) { return m == StepMode::full ? "full" : "linear_only"; }

StepMode parse_step_mode(std::string_view text) {
  if (text == "full") return StepMode::full;
  if (text == "linear_only") return StepMode::linear_only;
  throw std::invalid_argument("unknown integrator mode '" + std::string(text) +
                              "' (expected full or linear_only)");
}

void IntegratorSettings::validate() const {
  if (!(dt_max > 0.0)) throw std::invalid_argument("dt_max must be positive");
  if (!(cfl > 0.0 && cfl <= 1.0)) throw std::invalid_argument("cfl must lie in (0, 1]");
  if (!(t_end > 0.0)) throw std::invalid_argument("t_end must be positive");
  if (sample_every < 1) throw std::invalid_argument("sample_every must be >= 1");
  if (!(blowup_cap > 0.0)) throw std::invalid_argument("blowup_cap must be positive");
}

IfRk2Stepper::IfRk2Stepper(const Grid& grid, ModelParams params, StepMode mode)
    : dynamics_(grid, std::move(params)), mode_(mode), decay_(grid.spectral_size()) {}

void IfRk2Stepper::refresh_decay(double dt) {
  if (dt == cached_dt_) return;
  const auto& ksq = dynamics_.grid().modes().ksq;
  const double half_alpha = 0.5 * dynamics_.params().alpha;
  for (std::size_t i = 0; i < decay_.size(); ++i) {
    decay_[i] = std::exp(-std::pow(ksq[i], half_alpha) * dt);
  }
  cached_dt_ = dt;
}

void IfRk2Stepper::apply_decay(SpectralField& f) const {
  auto c = f.coeffs();
  for (std::size_t i = 0; i < c.size(); ++i) c[i] *= decay_[i];
}

State IfRk2Stepper::step(const State& s, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
  if (!s.all_finite()) throw NonFiniteState("non-finite values in state at t=" + std::to_string(s.t));
  refresh_decay(dt);
  const bool coupling = mode_ == StepMode::full;

  const Dynamics::Tendency k1 = dynamics_.explicit_terms(s, coupling);

  SpectralField u_pred = s.u;
  u_pred += dt * k1.u;
  apply_decay(u_pred);
  State predictor(s.t + dt, std::move(u_pred), s.q + dt * k1.q);

  const Dynamics::Tendency k2 = dynamics_.explicit_terms(predictor, coupling);

  SpectralField u_next = s.u;
  u_next += (0.5 * dt) * k1.u;
  apply_decay(u_next);
  u_next += (0.5 * dt) * k2.u;
  VectorField q_next = s.q;
  if (coupling || !dynamics_.params().forcing.empty()) q_next += (0.5 * dt) * (k1.q + k2.q);

  State next(s.t + dt, std::move(u_next), std::move(q_next));
  if (!next.all_finite()) throw NonFiniteState("step produced non-finite values at t=" + std::to_string(next.t));
  return next;
}

State step_ifrk2(const State& s, const ModelParams& p, double dt, StepMode mode) {
  IfRk2Stepper stepper(s.grid(), p, mode);
  return stepper.step(s, dt);
}

double cfl_dt(double max_abs_u, double max_abs_q, const Grid& grid, const IntegratorSettings& settings) {
  const double dx = grid.spacing();
  const double rate = max_abs_q / dx + max_abs_u / dx + 1e-12;
  return std::min(settings.dt_max, settings.cfl / rate);
}

double cfl_dt(const State& s, const ModelParams& p, const IntegratorSettings& settings) {
  (void)p;
  if (!s.all_finite()) throw NonFiniteState("cfl_dt on a non-finite state");
  FourierTransform transform(s.grid());
  const double max_u = lp_norm(s.u, kLinf, transform);
  double max_q = 0.0;
  for (const auto& c : s.q) max_q = std::max(max_q, lp_norm(c, kLinf, transform));
  return cfl_dt(max_u, max_q, s.grid(), settings);
}

namespace {

bool row_finite(const DiagnosticsRow& r) {
  return std::isfinite(r.E0) && std::isfinite(r.E2) && std::isfinite(r.min_u) &&
         std::isfinite(r.max_u) && std::isfinite(r.max_abs_q);
}

}  // namespace

Trajectory integrate(const State& initial, const ModelParams& params, const IntegratorSettings& settings,
                     const StepFunction& step, const RunOptions& options) {
  settings.validate();
  params.validate();
  if (!(settings.t_end > initial.t)) throw std::invalid_argument("t_end must exceed the initial time");
  if (options.fixed_dt < 0.0) throw std::invalid_argument("fixed_dt must be non-negative");

  Trajectory tr;
  tr.dim = params.dim;
  tr.alpha = params.alpha;
  tr.kinetics = params.kinetics;
  tr.forced = !params.forcing.empty();
  tr.nonlinear_active = settings.mode == StepMode::full;
  tr.irrotational = options.irrotational;

  DiagnosticsProbe probe(initial.grid(), params.alpha);
  IdentityLedger ledger(params.dim, tr.nonlinear_active);

  State s = initial;
  DiagnosticsRow prev = probe.measure(s);
  ledger.start(prev);
  bool prev_recorded = true;

  // Rows are handed to on_row one behind so a blow-up flag can still be
  // attached to the last recorded row.
  auto record = [&](const DiagnosticsRow& row) {
    if (options.on_row && !tr.rows.empty()) options.on_row(tr.rows.back());
    tr.rows.push_back(row);
    if (settings.keep_states) tr.states.push_back(s);
  };
  record(prev);

  const double t_end = settings.t_end;
  std::size_t steps = 0;
  while (s.t < t_end) {
    double dt = options.fixed_dt > 0.0
                    ? std::min(options.fixed_dt, settings.dt_max)
                    : cfl_dt(std::max(std::abs(prev.min_u), std::abs(prev.max_u)), prev.max_abs_q,
                             s.grid(), settings);
    const double remaining = t_end - s.t;
    const bool last = dt >= remaining - 1e-12 * std::max(1.0, t_end);
    if (last) dt = remaining;

    State next;
    try {
      next = step(s, dt);
    } catch (const NonFiniteState& e) {
      tr.blew_up = true;
      tr.stop_reason = e.what();
      break;
    }
    if (last) next.t = t_end;
    s = std::move(next);
    ++steps;

    DiagnosticsRow cur = probe.measure(s);
    cur.step = steps;
    ledger.advance(prev, cur);

    const double max_abs_u = std::max(std::abs(cur.min_u), std::abs(cur.max_u));
    if (!row_finite(cur) || max_abs_u > settings.blowup_cap) {
      tr.blew_up = true;
      tr.stop_reason = "max |u| = " + std::to_string(max_abs_u) + " exceeds cap at t=" + std::to_string(s.t);
      cur.blowup = true;
      record(cur);
      prev_recorded = true;
      if (options.on_step) options.on_step(s, steps, true);
      prev = cur;
      break;
    }

    const bool sample = last || steps % static_cast<std::size_t>(settings.sample_every) == 0;
    if (sample) record(cur);
    prev_recorded = sample;
    if (options.on_step) options.on_step(s, steps, last);
    prev = cur;
  }

  if (tr.blew_up && !tr.rows.back().blowup) {
    prev.blowup = true;
    if (prev_recorded) {
      tr.rows.back().blowup = true;
    } else {
      record(prev);
    }
  }
  if (options.on_row) options.on_row(tr.rows.back());
  tr.steps = steps;
  tr.final_state = std::move(s);
  if (tr.stop_reason.empty()) tr.stop_reason = "completed";
  return tr;
}

Trajectory simulate(const State& initial, const ModelParams& params, const IntegratorSettings& settings,
                    const RunOptions& options) {
  IfRk2Stepper stepper(initial.grid(), params, settings.mode);
  return integrate(initial, params, settings,
                   [&stepper](const State& s, double dt) { return stepper.step(s, dt); }, options);
}

}  // namespace fracchemo
