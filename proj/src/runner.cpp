#include "fracchemo/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

#include "fracchemo/operators.hpp"
#include "fracchemo/snapshot.hpp"

namespace fracchemo {

// --- CSV ---------------------------------------------------------------------

DiagnosticsCsv::DiagnosticsCsv(std::ostream& out) : out_(&out) { *out_ << header() << '\n' << std::flush; }

DiagnosticsCsv::DiagnosticsCsv(const std::filesystem::path& path) : file_(path), out_(&file_) {
  if (!file_) throw std::runtime_error("cannot open " + path.string() + " for writing");
  *out_ << header() << '\n' << std::flush;
}

std::string DiagnosticsCsv::header() {
  return "t,E0,Ehalf,E1,E2,D0,D1,D2,mean_u,min_u,max_u,curl_norm,div_q,grad_q,R_low,R_1,R_2,flags";
}

std::string DiagnosticsCsv::format(const DiagnosticsRow& r) {
  std::string flags;
  if (r.blowup) flags = "blowup";
  if (r.negative_u) flags += flags.empty() ? "negative_u" : "|negative_u";
  return fmt::format(
      "{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},"
      "{:.17g},{:.17g},{:.17g},{:.17g},{}",
      r.t, r.E0, r.Ehalf, r.E1, r.E2, r.D0, r.D1, r.D2, r.mean_u, r.min_u, r.max_u, r.curl_norm, r.div_q_norm,
      r.grad_q_norm, r.R_low, r.R_1, r.R_2, flags);
}

void DiagnosticsCsv::write(const DiagnosticsRow& row) { *out_ << format(row) << '\n' << std::flush; }

// --- scenarios -----------------------------------------------------------------

Scenario load_scenario(const std::filesystem::path& path, bool strict, std::vector<std::string>* warnings) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", 0, "cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  ParseOptions opt;
  opt.strict = strict;
  opt.warnings = warnings;
  return parse_config(buf.str(), opt);
}

namespace {

std::ostream& log_of(const CommandOptions& opt) { return opt.log ? *opt.log : std::cout; }

RunOptions run_options(const Scenario& sc) {
  RunOptions o;
  o.fixed_dt = sc.fixed_dt;
  return o;
}

template <class F>
void residual_check(std::vector<Check>& out, const Scenario& sc, const std::string& name, double tol, F&& f) {
  try {
    const double v = f();
    out.push_back({sc.name, name, v, tol, v <= tol});
  } catch (const std::invalid_argument&) {
    // identity does not apply to this run
  }
}

}  // namespace

std::vector<Check> verify_scenario(const Scenario& sc) {
  const Problem pb = make_problem(sc);
  const Trajectory tr = run_problem(pb, run_options(sc));
  std::vector<Check> out;
  out.push_back({sc.name, "completed", tr.blew_up ? 1.0 : 0.0, 0.0, !tr.blew_up});
  if (tr.blew_up) return out;

  residual_check(out, sc, "R_low", sc.verify.tol_energy, [&] { return residual_energy_balance(tr); });
  if (sc.model.dim == 1) {
    residual_check(out, sc, "R_1", sc.verify.tol_h1, [&] { return residual_h1_1d(tr); });
    residual_check(out, sc, "R_2", sc.verify.tol_h2, [&] { return residual_h2_1d(tr); });
  } else {
    residual_check(out, sc, "R_1_2d", sc.verify.tol_h1_2d, [&] { return residual_h1_2d(tr); });
  }

  std::vector<Monitor> monitors = sc.hypotheses.monitors;
  if (std::find(monitors.begin(), monitors.end(), Monitor::E0) == monitors.end()) {
    monitors.insert(monitors.begin(), Monitor::E0);
  }
  for (Monitor m : monitors) {
    const MonitorReport rep = monitor_monotone(tr, m, sc.hypotheses.monitor_tolerance);
    out.push_back({sc.name, "monitor_" + rep.name, rep.max_increment, rep.tolerance * std::max(rep.initial, 1e-14),
                   rep.pass});
  }

  const DiagnosticsRow& first = tr.rows.front();
  double drift_u = 0.0;
  double drift_q = 0.0;
  double curl = 0.0;
  for (const auto& r : tr.rows) {
    drift_u = std::max(drift_u, std::abs(r.mean_u - first.mean_u));
    for (int i = 0; i < sc.model.dim; ++i) drift_q = std::max(drift_q, std::abs(r.mean_q[i] - first.mean_q[i]));
    if (r.q_l2 > 0.0) curl = std::max(curl, r.curl_norm / r.q_l2);
  }
  out.push_back({sc.name, "mean_u_drift", drift_u, 1e-12, drift_u <= 1e-12});
  out.push_back({sc.name, "mean_q_drift", drift_q, 1e-12, drift_q <= 1e-12});
  if (sc.model.dim == 2 && sc.hypotheses.irrotational) {
    out.push_back({sc.name, "relative_curl", curl, 1e-12, curl <= 1e-12});
  }
  return out;
}

std::vector<Scenario> smoke_scenarios() {
  static const char* const configs[] = {
      R"cfg(name = smoke_1d
d = 1
alpha = 1.6
n = 64
t_end = 0.2
fixed_dt = 2e-4
u0 = "0.1*cos(1)"
q0 = "0.1*sin(1)"
)cfg",
      R"cfg(name = smoke_linear
d = 1
alpha = 1.0
n = 64
t_end = 0.5
fixed_dt = 2.5e-4
mode = linear_only
u0 = "1 + 0.3*cos(1) - 0.2*sin(2;0.5)"
q0 = "0.2*sin(2)"
u0_nonnegative = true
)cfg",
      R"cfg(name = smoke_2d
d = 2
alpha = 1.5
n = 32
t_end = 0.1
fixed_dt = 2.5e-4
u0 = "0.05 + 0.1*cos(1,0) + 0.05*cos(1,1)"
q0_potential = "0.1*sin(0,1) + 0.05*cos(1,-1)"
irrotational = true
)cfg",
      R"cfg(name = smoke_steady
d = 1
alpha = 0.7
n = 16
t_end = 1
u0 = "2"
)cfg",
  };
  std::vector<Scenario> out;
  for (const char* c : configs) out.push_back(parse_config(c));
  return out;
}

// --- commands ------------------------------------------------------------------

int command_run(const Scenario& sc, const CommandOptions& opt) {
  std::ostream& log = log_of(opt);
  const Problem pb = make_problem(sc);
  std::filesystem::create_directories(opt.out_dir);

  std::optional<DiagnosticsCsv> csv;
  if (!sc.output.csv.empty()) csv.emplace(opt.out_dir / sc.output.csv);

  RunOptions ro = run_options(sc);
  ro.irrotational = pb.irrotational;
  if (csv) ro.on_row = [&csv](const DiagnosticsRow& r) { csv->write(r); };
  if (sc.output.snapshot_every > 0) {
    ro.on_step = [&](const State& s, std::size_t step, bool last) {
      if (last || step % static_cast<std::size_t>(sc.output.snapshot_every) != 0) return;
      write_snapshot(opt.out_dir / fmt::format("{}_{:08d}.snap", sc.output.snapshot_prefix, step), s,
                     sc.model.alpha, sc.model.kinetics);
    };
  }
  const Trajectory tr = simulate(pb.initial, pb.model, pb.settings, ro);
  if (tr.final_state.all_finite()) {
    write_snapshot(opt.out_dir / (sc.output.snapshot_prefix + "_final.snap"), tr.final_state, sc.model.alpha,
                   sc.model.kinetics);
  }

  const DiagnosticsRow& last = tr.rows.back();
  log << fmt::format("scenario {}\n", sc.name);
  log << fmt::format("steps {}\nt_final {:.17g}\nstatus {}\n", tr.steps, last.t, tr.stop_reason);
  log << fmt::format("E0 {:.17g}\nE2 {:.17g}\nR_low {:.6e}\nR_1 {:.6e}\nR_2 {:.6e}\n", last.E0, last.E2, last.R_low,
                     last.R_1, last.R_2);
  for (Monitor m : sc.hypotheses.monitors) {
    const MonitorReport rep = monitor_monotone(tr, m, sc.hypotheses.monitor_tolerance);
    log << fmt::format("monitor {} {} max_increment={:.6e} ({})\n", rep.name, rep.pass ? "pass" : "FAIL",
                       rep.max_increment, rep.regime);
  }
  return tr.blew_up ? exit_code::blowup : exit_code::ok;
}

int command_verify(const std::vector<Scenario>& scenarios, const CommandOptions& opt) {
  std::ostream& log = log_of(opt);
  bool all = true;
  for (const auto& sc : scenarios) {
    for (const auto& c : verify_scenario(sc)) {
      all = all && c.pass;
      log << fmt::format("{} {} {} value={:.6e} tol={:.3e}\n", c.pass ? "PASS" : "FAIL", c.scenario, c.name, c.value,
                         c.tolerance);
    }
  }
  log << (all ? "verify: all checks passed\n" : "verify: some checks FAILED\n");
  return all ? exit_code::ok : exit_code::error;
}

int command_sweep(const Scenario& sc, const CommandOptions& opt) {
  if (sc.sweep.alphas.empty()) throw ConfigError("alphas", 0, "sweep needs [sweep] alphas");
  if (sc.sweep.amplitudes.empty()) throw ConfigError("amplitudes", 0, "sweep needs [sweep] amplitudes");
  const Problem base = make_problem(sc);
  std::vector<Monitor> monitors = sc.hypotheses.monitors;
  if (monitors.empty()) monitors.push_back(Monitor::E0);
  const auto cells = criticality_sweep(base, sc.sweep.alphas, sc.sweep.amplitudes, monitors, opt.workers);
  std::filesystem::create_directories(opt.out_dir);
  const auto path = opt.out_dir / sc.sweep.csv;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  write_sweep_csv(out, cells);
  std::size_t flagged = 0;
  for (const auto& c : cells) flagged += c.blew_up ? 1 : 0;
  log_of(opt) << fmt::format("sweep cells {} blowups {} csv {}\n", cells.size(), flagged, path.string());
  return exit_code::ok;
}

int command_scaling(const Scenario& sc, const CommandOptions& opt) {
  const Problem base = make_problem(sc);
  const ScalingReport rep = scaling_symmetry_check(base, sc.scaling_lambda);
  log_of(opt) << fmt::format("lambda {}\nt_original {:.17g}\nt_rescaled {:.17g}\ndiscrepancy {:.6e}\n", rep.lambda,
                             rep.t_original, rep.t_rescaled, rep.discrepancy);
  return rep.blew_up ? exit_code::blowup : exit_code::ok;
}

int command_sobolev(std::size_t budget, std::uint64_t seed, const CommandOptions& opt) {
  const SobolevEstimate est = estimate_sobolev_constant(budget, seed);
  std::filesystem::create_directories(opt.out_dir);
  const auto path = opt.out_dir / "sobolev_field.csv";
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << "k,re,im\n";
  for (int k = 1; k <= kSobolevBand; ++k) {
    const Complex c = est.field.coeff({k, 0});
    out << fmt::format("{},{:.17g},{:.17g}\n", k, c.real(), c.imag());
  }
  const double floor = std::pow(3.0 * std::numbers::pi / 4.0, 0.25) / std::sqrt(std::numbers::pi);
  log_of(opt) << fmt::format("C_S_lower_bound {:.17g}\nthreshold {:.17g}\nsingle_mode_ratio {:.17g}\n"
                             "evaluations {}\nseed {}\nfield {}\n",
                             est.ratio, est.threshold, floor, est.evaluations, seed, path.string());
  return exit_code::ok;
}

int command_bench(const CommandOptions& opt) {
  std::ostream& log = log_of(opt);
  struct Case {
    int d;
    int n;
    int steps;
  };
  const Case cases[] = {{1, 128, 2000}, {1, 256, 1000}, {1, 512, 500}, {2, 64, 100}, {2, 128, 30}};
  for (const auto& c : cases) {
    Scenario sc;
    sc.model.dim = c.d;
    sc.model.alpha = 1.5;
    sc.n = c.n;
    sc.initial.preset = "random_smooth";
    sc.initial.preset_amplitude = 0.05;
    const State s0 = initial_state(sc);
    IfRk2Stepper stepper(s0.grid(), sc.model);
    State s = stepper.step(s0, 1e-5);
    stepper.dynamics().transform().reset_timing();
    const auto start = std::chrono::steady_clock::now();
    for (int i = 0; i < c.steps; ++i) s = stepper.step(s, 1e-5);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const double fft = stepper.dynamics().transform().seconds();
    const std::string label = c.d == 1 ? fmt::format("d1_n{}", c.n) : fmt::format("d2_n{}x{}", c.n, c.n);
    log << fmt::format("{:<30} {:.6g}\n", label + ".steps_per_second", c.steps / secs);
    log << fmt::format("{:<30} {:.4f}\n", label + ".fft_share", secs > 0.0 ? fft / secs : 0.0);
  }
  return exit_code::ok;
}

}  // namespace fracchemo
