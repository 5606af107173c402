#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "fracchemo/integrator.hpp"
#include "fracchemo/operators.hpp"
#include "test_support.hpp"

using namespace fracchemo;
using namespace fracchemo::testing;

namespace {

ModelParams params(int dim, double alpha) {
  ModelParams p;
  p.dim = dim;
  p.alpha = alpha;
  return p;
}

double state_diff(const State& a, const State& b) {
  double m = max_abs_diff(a.u, b.u);
  for (int i = 0; i < a.q.dim(); ++i) m = std::max(m, max_abs_diff(a.q[i], b.q[i]));
  return m;
}

State smooth_1d(const Grid& g, double amp) {
  SpectralField u(g);
  u.add_cosine({1, 0}, amp);
  u.add_mode({0, 0}, 0.5 * amp);
  VectorField q(g);
  q[0].add_sine({1, 0}, amp);
  q[0].add_cosine({2, 0}, 0.3 * amp);
  return State(0.0, u, q);
}

}  // namespace

TEST_CASE("linear_only step is the exact semigroup") {
  const Grid g(1, 32);
  SpectralField u(g);
  u.add_cosine({2, 0}, 1.0);
  VectorField q(g);
  q[0].add_sine({3, 0}, 0.4);
  const State s(0.0, u, q);
  for (double dt : {1e-3, 0.1, 0.7, 3.0}) {
    const State next = step_ifrk2(s, params(1, 1.0), dt, StepMode::linear_only);
    SpectralField expected(g);
    expected.add_cosine({2, 0}, std::exp(-2 * dt));
    CHECK(max_abs_diff(next.u, expected) <= 1e-13);
    CHECK(max_abs_diff(next.q[0], q[0]) == 0.0);
    CHECK(next.t == doctest::Approx(dt));
  }
}

TEST_CASE("constant state is a fixed point") {
  for (int dim : {1, 2}) {
    const Grid g(dim, 16);
    SpectralField u(g);
    u.add_mode({0, 0}, 1.3);
    const State s(0.0, u, VectorField(g));
    const State next = step_ifrk2(s, params(dim, 0.7), 0.05);
    CHECK(state_diff(s, next) == 0.0);
  }
}

TEST_CASE("one-step error is third order") {
  const Grid g(1, 32);
  const State s = smooth_1d(g, 0.2);
  const ModelParams p = params(1, 1.5);
  IfRk2Stepper stepper(g, p);
  auto defect = [&](double dt) {
    const State big = stepper.step(s, dt);
    const State half = stepper.step(stepper.step(s, 0.5 * dt), 0.5 * dt);
    return state_diff(big, half);
  };
  double prev = defect(0.04);
  for (double dt : {0.02, 0.01, 0.005}) {
    const double cur = defect(dt);
    const double ratio = prev / cur;
    MESSAGE("dt=" << dt << " ratio=" << ratio);
    CHECK(ratio > 7.0);
    CHECK(ratio < 9.0);
    prev = cur;
  }
}

TEST_CASE("non-finite state is rejected") {
  const Grid g(1, 16);
  SpectralField u(g);
  u.add_cosine({1, 0}, std::nan(""));
  const State s(0.0, u, VectorField(g));
  CHECK_THROWS_AS(step_ifrk2(s, params(1, 2.0), 0.1), NonFiniteState);
}

TEST_CASE("cfl_dt examples") {
  IntegratorSettings set;
  set.dt_max = 0.05;
  set.cfl = 0.4;
  const Grid g(1, 128);
  CHECK(cfl_dt(State::zero(g), params(1, 2.0), set) == 0.05);

  VectorField q(g);
  q[0].add_sine({1, 0}, 1.0);
  const State s1(0.0, SpectralField(g), q);
  const double dt1 = cfl_dt(s1, params(1, 2.0), set);
  CHECK(dt1 == doctest::Approx(0.4 * 2 * kPi / 128).epsilon(1e-10));

  const State s2(0.0, SpectralField(g), 2.0 * q);
  CHECK(cfl_dt(s2, params(1, 2.0), set) == doctest::Approx(0.5 * dt1).epsilon(1e-10));

  IntegratorSettings bad;
  bad.cfl = 1.5;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = {};
  bad.sample_every = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("steady state trajectory") {
  const Grid g(1, 32);
  SpectralField u(g);
  u.add_mode({0, 0}, 2.0);
  IntegratorSettings set;
  set.dt_max = 0.05;
  set.t_end = 1.0;
  const Trajectory tr = simulate(State(0.0, u, VectorField(g)), params(1, 1.6), set);
  REQUIRE(tr.rows.size() >= 2);
  CHECK(tr.rows.front().t == 0.0);
  CHECK(tr.rows.back().t == 1.0);
  for (std::size_t i = 1; i < tr.rows.size(); ++i) {
    CHECK(tr.rows[i].t > tr.rows[i - 1].t);
    CHECK(tr.rows[i].E0 == tr.rows[0].E0);
    CHECK(std::abs(tr.rows[i].R_low) <= 1e-13);
    CHECK(std::abs(tr.rows[i].R_1) <= 1e-13);
    CHECK(std::abs(tr.rows[i].R_2) <= 1e-13);
  }
  CHECK_FALSE(tr.blew_up);
  CHECK(tr.stop_reason == "completed");
}

TEST_CASE("linear_only run matches the closed form") {
  const Grid g(1, 64);
  SpectralField u(g);
  const double amps[] = {0.4, -0.3, 0.2, 0.1};
  const int ks[] = {1, 3, 7, 12};
  for (int i = 0; i < 4; ++i) u.add_cosine({ks[i], 0}, amps[i], 0.3 * i);
  u.add_mode({0, 0}, 1.0);
  VectorField q(g);
  q[0].add_sine({2, 0}, 0.5);
  IntegratorSettings set;
  set.dt_max = 0.013;
  set.t_end = 1.0;
  set.mode = StepMode::linear_only;
  const Trajectory tr = simulate(State(0.0, u, q), params(1, 1.6), set);
  SpectralField expected(g);
  for (int i = 0; i < 4; ++i) expected.add_cosine({ks[i], 0}, amps[i] * std::exp(-std::pow(ks[i], 1.6)), 0.3 * i);
  expected.add_mode({0, 0}, 1.0);
  CHECK(max_abs_diff(tr.final_state.u, expected) <= 1e-10);
  CHECK(max_abs_diff(tr.final_state.q[0], q[0]) == 0.0);
  CHECK(tr.final_state.t == 1.0);
}

TEST_CASE("means are conserved and curl stays zero") {
  const Grid g(2, 32);
  SpectralField u = random_field(g, 6, 21);
  u.add_mode({0, 0}, 0.3);
  const VectorField q = gradient(0.2 * random_field(g, 6, 22));
  IntegratorSettings set;
  set.dt_max = 5e-3;
  set.t_end = 0.2;
  set.keep_states = true;
  const Trajectory tr = simulate(State(0.0, 0.2 * u, q), params(2, 1.2), set, {.irrotational = true});
  const double mean0 = tr.rows.front().mean_u;
  for (const auto& row : tr.rows) {
    CHECK(std::abs(row.mean_u - mean0) <= 1e-12);
    CHECK(std::abs(row.mean_q[0]) <= 1e-12);
    CHECK(std::abs(row.mean_q[1]) <= 1e-12);
    CHECK(row.curl_norm <= 1e-12 * row.q_l2);
  }
  CHECK(tr.states.size() == tr.rows.size());
}

TEST_CASE("sampling and callbacks") {
  const Grid g(1, 32);
  IntegratorSettings set;
  set.dt_max = 0.01;
  set.t_end = 0.105;
  set.sample_every = 3;
  std::size_t rows_seen = 0;
  std::size_t last_calls = 0;
  RunOptions opt;
  opt.on_row = [&](const DiagnosticsRow&) { ++rows_seen; };
  opt.on_step = [&](const State&, std::size_t, bool last) { last_calls += last ? 1 : 0; };
  opt.fixed_dt = 0.01;
  const Trajectory tr = simulate(smooth_1d(g, 0.1), params(1, 1.0), set, opt);
  CHECK(tr.steps == 11);
  // t = 0, steps 3, 6, 9 and the final clipped step
  CHECK(tr.rows.size() == 5);
  CHECK(rows_seen == tr.rows.size());
  CHECK(last_calls == 1);
  CHECK(tr.rows.back().t == 0.105);
}

TEST_CASE("blow-up cap stops the run with a flag") {
  const Grid g(1, 32);
  IntegratorSettings set;
  set.dt_max = 0.01;
  set.t_end = 1.0;
  set.blowup_cap = 0.5;
  const Trajectory tr = simulate(smooth_1d(g, 1.0), params(1, 1.0), set);
  CHECK(tr.blew_up);
  CHECK(tr.rows.back().blowup);
  CHECK(tr.steps == 1);
}
