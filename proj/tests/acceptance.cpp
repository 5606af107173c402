// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "fracchemo/fft.hpp"
#include "fracchemo/runner.hpp"

using namespace fracchemo;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    notes.push_back((ok ? "" : "!") + what);
  }
};

// every trajectory produced here feeds the conservation and E0 checks
struct RunLedger {
  int runs = 0;
  int flagged = 0;
  double mean_u_drift = 0.0;
  double mean_q = 0.0;
  std::vector<std::string> e0_failures;

  void add(const std::string& name, const Trajectory& tr) {
    ++runs;
    const double u0 = tr.rows.front().mean_u;
    for (const auto& r : tr.rows) {
      mean_u_drift = std::max(mean_u_drift, std::abs(r.mean_u - u0));
      for (int i = 0; i < tr.dim; ++i) mean_q = std::max(mean_q, std::abs(r.mean_q[i]));
    }
    if (tr.blew_up) {
      ++flagged;
      return;
    }
    const MonitorReport m = monitor_monotone(tr, Monitor::E0);
    if (!m.pass) e0_failures.push_back(fmt::format("{} ({:.2e})", name, m.max_increment));
  }
};

RunLedger ledger;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Problem problem(const std::string& text) { return make_problem(parse_config(text)); }

Trajectory run(const std::string& name, const Problem& pb, double dt_max) {
  Problem p = pb;
  p.settings.dt_max = dt_max;
  Trajectory tr = run_problem(p, {.irrotational = p.irrotational});
  ledger.add(name, tr);
  return tr;
}

const std::string kOneD = R"cfg(d = 1
alpha = 1.6
n = 128
t_end = 0.5
u0 = "0.1*cos(1)"
q0 = "0.1*sin(1)"
)cfg";

// --- 1, 2: one-dimensional energy identities ------------------------------

struct OneDRuns {
  double seconds = 0.0;
  double low[2]{};
  double h1[2]{};
  double h2[2]{};
};

const OneDRuns& one_d_runs() {
  static const OneDRuns r = [] {
    OneDRuns out;
    const Problem pb = problem(kOneD);
    const double dts[2] = {2e-4, 1e-4};
    for (int i = 0; i < 2; ++i) {
      const auto t0 = std::chrono::steady_clock::now();
      const Trajectory tr = run(fmt::format("1d dt={}", dts[i]), pb, dts[i]);
      if (i == 0) out.seconds = seconds_since(t0);
      out.low[i] = residual_energy_balance(tr);
      out.h1[i] = residual_h1_1d(tr);
      out.h2[i] = residual_h2_1d(tr);
    }
    return out;
  }();
  return r;
}

Outcome criterion_1() {
  const OneDRuns& r = one_d_runs();
  Outcome o;
  o.require(r.low[0] <= 1e-8, fmt::format("R_low(dt=2e-4)={:.3e}", r.low[0]));
  o.require(r.low[0] >= 3.0 * r.low[1], fmt::format("halving ratio={:.2f}", r.low[0] / r.low[1]));
  o.require(r.seconds < 5.0, fmt::format("runtime={:.2f}s", r.seconds));
  return o;
}

Outcome criterion_2() {
  const OneDRuns& r = one_d_runs();
  Outcome o;
  o.require(r.h1[0] <= 1e-7, fmt::format("R_1={:.3e}", r.h1[0]));
  const double ratio = r.h1[0] / r.h1[1];
  o.require(ratio >= 3.0 && ratio <= 5.0, fmt::format("R_1 halving ratio={:.2f}", ratio));
  o.require(r.h2[0] <= 1e-6, fmt::format("R_2={:.3e}", r.h2[0]));
  return o;
}

// --- 3: two-dimensional identity, irrotational structure ------------------

Outcome criterion_3() {
  const Problem pb = problem(R"cfg(d = 2
alpha = 2
n = 128
t_end = 0.25
u0 = "1 + 0.1*cos(1,0) + 0.05*cos(1,1) - 0.04*sin(2,-1)"
q0_potential = "0.1*sin(0,1) + 0.05*cos(1,-1) + 0.02*sin(2,1)"
irrotational = true
u0_nonnegative = true
)cfg");
  const auto t0 = std::chrono::steady_clock::now();
  const Trajectory tr = run("2d alpha=2", pb, 5e-4);
  const double secs = seconds_since(t0);

  double curl = 0.0;
  double grad_div = 0.0;
  for (const auto& row : tr.rows) {
    const double scale = std::max(row.grad_q_norm, std::numeric_limits<double>::min());
    curl = std::max(curl, row.curl_norm / scale);
    grad_div = std::max(grad_div, std::abs(row.grad_q_norm - row.div_q_norm) / scale);
  }
  const IrrotationalReport fin = irrotational_checks(tr.final_state);
  grad_div = std::max(grad_div, std::abs(fin.grad_q_norm - fin.div_q_norm) / fin.grad_q_norm);

  Outcome o;
  o.require(!tr.blew_up, "completed");
  const double r = residual_h1_2d(tr);
  o.require(r <= 1e-6, fmt::format("R_1_2d={:.3e}", r));
  o.require(curl <= 1e-12, fmt::format("max curl/|grad q|={:.2e}", curl));
  o.require(grad_div <= 1e-12, fmt::format("max |grad q - div q|/|grad q|={:.2e}", grad_div));
  o.require(secs < 60.0, fmt::format("runtime={:.1f}s", secs));
  return o;
}

// --- 4: linear oracle -------------------------------------------------------

Outcome criterion_4() {
  Outcome o;
  for (double alpha : {0.6, 1.0, 1.5, 2.0}) {
    Problem pb = problem(fmt::format(R"cfg(d = 1
alpha = {}
n = 64
t_end = 1
mode = linear_only
u0 = "1 + 0.3*cos(1) - 0.2*sin(3;0.7) + 0.1*cos(7;-0.2) + 0.05*sin(20)"
q0 = "0.2*sin(2) + 0.1*cos(5)"
)cfg",
                                     alpha));
    const Trajectory tr = run(fmt::format("linear alpha={}", alpha), pb, 1e-2);
    const Grid& g = pb.initial.grid();
    SpectralField exact = pb.initial.u;
    const auto& modes = g.modes();
    auto c = exact.coeffs();
    for (std::size_t i = 0; i < c.size(); ++i) {
      c[i] *= std::exp(-std::pow(std::hypot(modes.k1[i], modes.k2[i]), alpha) * tr.final_state.t);
    }
    FourierTransform t(g);
    const auto a = t.inverse(tr.final_state.u);
    const auto b = t.inverse(exact);
    double err = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) err = std::max(err, std::abs(a[j] - b[j]));
    o.require(err <= 1e-10 && tr.final_state.t == 1.0, fmt::format("alpha={} err={:.2e}", alpha, err));
  }
  return o;
}

// --- 5: manufactured solutions ---------------------------------------------

Outcome criterion_5() {
  Outcome o;
  const ManufacturedSolution m;
  ModelParams p;
  p.dim = 1;
  p.alpha = 1.5;
  const ConvergenceReport ifrk2 = manufactured_convergence(p, m, 64, 1.0, {1e-2, 5e-3, 2.5e-3, 1.25e-3});
  o.require(std::abs(ifrk2.slope - 2.0) <= 0.2, fmt::format("IFRK2 slope={:.3f}", ifrk2.slope));

  ModelParams q = p;
  q.alpha = 1.0;
  const ConvergenceReport rk4 =
      manufactured_convergence(q, m, 16, 1.0, {0.04, 0.02, 0.01, 0.005}, Scheme::rk4);
  o.require(std::abs(rk4.slope - 4.0) <= 0.3, fmt::format("RK4 slope={:.3f}", rk4.slope));

  // forcing lives on |k| <= 2; quadratic products reach |k| = 4, kept from n = 16 on
  const ConvergenceReport space = manufactured_spatial(p, m, {8, 16, 32, 64, 128}, 0.5, 1e-3);
  for (const auto& lv : space.levels) {
    if (lv.h < 16) continue;
    o.require(lv.error < 1e-10, fmt::format("n={} err={:.2e}", lv.h, lv.error));
  }
  return o;
}

// --- 6: scaling symmetry -----------------------------------------------------

Outcome criterion_6() {
  Problem pb = problem(R"cfg(d = 1
alpha = 1.5
n = 64
t_end = 0.1
u0 = "0.1*cos(1) + 0.05*sin(2)"
q0 = "0.1*sin(1) - 0.03*cos(3)"
)cfg");
  Outcome o;
  double prev = 0.0;
  for (double dt : {1e-3, 5e-4, 2.5e-4}) {
    pb.settings.dt_max = dt;
    const ScalingReport r = scaling_symmetry_check(pb, 2.0);
    o.require(!r.blew_up && r.discrepancy <= 1e-6, fmt::format("dt={} disc={:.3e}", dt, r.discrepancy));
    if (prev > 0.0) o.require(r.discrepancy < prev, "decreasing");
    prev = r.discrepancy;
  }
  const ScalingReport one = scaling_symmetry_check(pb, 1.0);
  o.require(one.discrepancy == 0.0, fmt::format("lambda=1 disc={}", one.discrepancy));
  return o;
}

// --- 7: monotonicity monitors -------------------------------------------------

Outcome criterion_7() {
  Outcome o;

  // Hdot^(alpha/2) energy of (A cos x, A sin x) is 2 pi A^2 = 1e-3
  const double a = std::sqrt(1e-3 / (2.0 * std::numbers::pi));
  const Problem half = problem(fmt::format(R"cfg(d = 1
alpha = 1.25
n = 128
t_end = 2
u0 = "{0:.17g} + {0:.17g}*cos(1)"
q0 = "{0:.17g}*sin(1)"
u0_nonnegative = true
monitors = E_half_alpha
)cfg",
                                           a));
  const Trajectory th = run("E_half_alpha", half, 1e-3);
  const MonitorReport mh = monitor_monotone(th, Monitor::E_half_alpha);
  o.require(mh.hypotheses_hold && mh.pass,
            fmt::format("E_half_alpha E={:.3e} max_inc={:.2e}", mh.initial, mh.max_increment));

  const Problem two = problem(R"cfg(d = 2
alpha = 1.5
n = 32
t_end = 1
u0 = "0.02 + 0.01*cos(1,0) + 0.01*cos(0,1)"
q0_potential = "-0.01*cos(1,0) - 0.01*cos(0,1)"
irrotational = true
u0_nonnegative = true
monitors = H1_divq_2d
)cfg");
  const Trajectory t2 = run("H1_divq_2d", two, 1e-3);
  const MonitorReport m2 = monitor_monotone(t2, Monitor::H1_divq_2d);
  o.require(m2.hypotheses_hold && m2.pass,
            fmt::format("H1_divq_2d Q={:.3e} max_inc={:.2e}", m2.initial, m2.max_increment));

  o.require(ledger.e0_failures.empty(),
            fmt::format("E0 on {} unflagged runs{}", ledger.runs - ledger.flagged,
                        ledger.e0_failures.empty() ? "" : ", failed: " + ledger.e0_failures.front()));
  return o;
}

// --- 8: Sobolev estimator -------------------------------------------------------

Outcome criterion_8() {
  Outcome o;
  const SobolevEstimate e = estimate_sobolev_constant(10000, 7);
  o.require(e.ratio >= 0.699, fmt::format("C_S>={:.6f}", e.ratio));

  const double base = sobolev_ratio(e.field);
  const double scaled = sobolev_ratio(e.field * 37.5);
  const double tiny = sobolev_ratio(e.field * 1e-6);
  const double drift = std::max(std::abs(scaled - base), std::abs(tiny - base)) / base;
  o.require(drift <= 1e-12, fmt::format("amplitude drift={:.1e}", drift));
  o.require(std::abs(base - e.ratio) <= 1e-10 * e.ratio, "recomputes from field");

  const SobolevEstimate again = estimate_sobolev_constant(10000, 7);
  o.require(again.ratio == e.ratio && std::ranges::equal(again.field.coeffs(), e.field.coeffs()), "deterministic");
  o.require(e.threshold == 4.0 / (9.0 * e.ratio * e.ratio), fmt::format("threshold={:.6f}", e.threshold));
  return o;
}

// --- 9: conservation over every run above ------------------------------------------

Outcome criterion_9() {
  Outcome o;
  o.require(ledger.mean_u_drift <= 1e-12, fmt::format("max |<u>(t)-<u>(0)|={:.1e}", ledger.mean_u_drift));
  o.require(ledger.mean_q <= 1e-12, fmt::format("max |<q_i>|={:.1e} over {} runs", ledger.mean_q, ledger.runs));
  return o;
}

// --- 10: determinism ---------------------------------------------------------------

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome criterion_10() {
  Outcome o;
  const fs::path root = fs::temp_directory_path() / "fracchemo_acceptance";
  fs::remove_all(root);
  std::ostringstream log;
  auto options = [&](const std::string& sub, int workers) {
    CommandOptions c;
    c.out_dir = root / sub;
    c.workers = workers;
    c.log = &log;
    fs::create_directories(c.out_dir);
    return c;
  };

  Scenario sc = parse_config(kOneD + "snapshot_every = 100\n");
  command_run(sc, options("a", 1));
  command_run(sc, options("b", 1));
  bool same = slurp(root / "a" / "diagnostics.csv") == slurp(root / "b" / "diagnostics.csv");
  std::size_t files = 0;
  for (const auto& entry : fs::directory_iterator(root / "a")) {
    ++files;
    same = same && slurp(entry.path()) == slurp(root / "b" / entry.path().filename());
  }
  o.require(same && files > 2, fmt::format("rerun byte-identical ({} files)", files));

  Scenario sw = parse_config(kOneD + "[sweep]\nalphas = 1.2, 1.5, 1.8\namplitudes = 0.05, 0.5\n");
  sw.settings.t_end = 0.2;
  command_sweep(sw, options("s1", 1));
  command_sweep(sw, options("s4", 4));
  const std::string one = slurp(root / "s1" / "sweep.csv");
  o.require(!one.empty() && one == slurp(root / "s4" / "sweep.csv"), "4-worker sweep equals 1-worker");
  fs::remove_all(root);
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<int, std::function<Outcome()>>> criteria = {
      {1, criterion_1}, {2, criterion_2}, {3, criterion_3}, {4, criterion_4},  {5, criterion_5},
      {6, criterion_6}, {7, criterion_7}, {8, criterion_8}, {10, criterion_10}, {9, criterion_9},
  };
  std::vector<std::string> lines(11);
  bool all = true;
  for (const auto& [id, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    std::string detail;
    for (const auto& n : o.notes) detail += (detail.empty() ? "" : "; ") + n;
    lines[id] = fmt::format("criterion {:>2}: {}  {}", id, o.pass ? "PASS" : "FAIL", detail);
    all = all && o.pass;
  }
  for (int id = 1; id <= 10; ++id) std::cout << lines[id] << '\n';
  return all ? 0 : 1;
}
