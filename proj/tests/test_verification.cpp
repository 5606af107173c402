#include <cmath>
#include <sstream>
#include <stdexcept>

#include "doctest.h"
#include "fracchemo/operators.hpp"
#include "fracchemo/verification.hpp"
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

Problem small_problem(int n, double alpha, double t_end, double dt_max) {
  const Grid g(1, n);
  SpectralField u(g);
  u.add_cosine({1, 0}, 0.1);
  u.add_cosine({2, 0}, 0.03, 0.4);
  u.add_mode({0, 0}, 0.2);
  VectorField q(g);
  q[0].add_sine({1, 0}, 0.1);
  Problem pb;
  pb.initial = State(0.0, u, q);
  pb.model = params(1, alpha);
  pb.settings.t_end = t_end;
  pb.settings.dt_max = dt_max;
  return pb;
}

}  // namespace

TEST_CASE("rk4 reference: steady state and stability guard") {
  const Grid g(1, 16);
  SpectralField u(g);
  u.add_mode({0, 0}, 1.0);
  Problem pb;
  pb.initial = State(0.0, u, VectorField(g));
  pb.model = params(1, 2.0);
  pb.settings.t_end = 0.1;
  const Trajectory tr = rk4_reference(pb, 0.005);
  CHECK(max_abs_diff(tr.final_state.u, u) == 0.0);
  CHECK(rk4_stable_dt(g, 2.0) == doctest::Approx(0.5 / 64));
  CHECK_THROWS_AS(rk4_reference(pb, 0.01), std::invalid_argument);
}

TEST_CASE("rk4 reference: linear_only error is fourth order") {
  const Grid g(1, 16);
  SpectralField u(g);
  for (int k = 1; k <= 7; ++k) u.add_cosine({k, 0}, 0.5 / k, 0.2 * k);
  Problem pb;
  pb.initial = State(0.0, u, VectorField(g));
  pb.model = params(1, 1.0);
  pb.settings.t_end = 1.0;
  pb.settings.mode = StepMode::linear_only;
  SpectralField exact(g);
  for (int k = 1; k <= 7; ++k) exact.add_cosine({k, 0}, 0.5 / k * std::exp(-k), 0.2 * k);
  std::vector<ConvergenceLevel> levels;
  for (double dt : {0.05, 0.025, 0.0125, 0.00625}) {
    const Trajectory tr = rk4_reference(pb, dt);
    levels.push_back({dt, sobolev_norm(tr.final_state.u - exact, 0.0)});
  }
  const double slope = fitted_slope(levels);
  MESSAGE("rk4 linear slope " << slope);
  CHECK(slope == doctest::Approx(4.0).epsilon(0.075));
}

TEST_CASE("rk4 and IFRK2 agree at small dt") {
  Problem pb = small_problem(32, 1.5, 0.2, 2e-4);
  const Trajectory a = rk4_reference(pb, 2e-4);
  RunOptions opt;
  opt.fixed_dt = 2e-4;
  const Trajectory b = run_problem(pb, opt);
  const double d = state_distance(a.final_state, b.final_state);
  MESSAGE("rk4 vs ifrk2: " << d);
  CHECK(d <= 1e-8);
  opt.fixed_dt = 4e-4;
  pb.settings.dt_max = 4e-4;
  const double d2 = state_distance(rk4_reference(pb, 4e-4).final_state, run_problem(pb, opt).final_state);
  CHECK(d2 / d == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("manufactured forcing makes the target exact") {
  // residual of the forced rhs against d/dt of the target, at several times
  const ManufacturedSolution m{0.3, -0.2};
  for (Kinetics k : {Kinetics::quadratic, Kinetics::linear}) {
    for (int dim : {1, 2}) {
      ModelParams p = params(dim, 1.3);
      p.kinetics = k;
      p.forcing = manufactured_forcing(m, k, dim);
      const Grid g(dim, 16);
      Dynamics dyn(g, p);
      for (double t : {0.0, 0.4, 1.1}) {
        const State s = manufactured_state(g, m, t);
        SpectralField du = dyn.rhs_u(s);
        du += s.u;  // d/dt of a e^{-t} cos x is -u
        CHECK(max_abs(du) <= 1e-15);
        const Dynamics::Tendency tq = dyn.explicit_terms(s);
        SpectralField dq = tq.q[0];
        dq += s.q[0];
        CHECK(max_abs(dq) <= 1e-15);
        if (dim == 2) CHECK(max_abs(tq.q[1]) == 0.0);
      }
    }
  }
}

TEST_CASE("manufactured temporal convergence") {
  const ModelParams p = params(1, 1.5);
  const ConvergenceReport r =
      manufactured_convergence(p, {0.5, 0.5}, 64, 1.0, {1e-2, 5e-3, 2.5e-3, 1.25e-3});
  for (const auto& l : r.levels) MESSAGE("dt=" << l.h << " err=" << l.error);
  CHECK(r.target == 2.0);
  CHECK(std::abs(r.slope - 2.0) <= 0.2);

  const ConvergenceReport zero = manufactured_convergence(p, {0.0, 0.0}, 32, 0.5, {1e-2, 5e-3, 2.5e-3});
  for (const auto& l : zero.levels) CHECK(l.error == 0.0);

  const ConvergenceReport rk4 =
      manufactured_convergence(params(1, 1.0), {0.5, 0.5}, 16, 1.0, {0.04, 0.02, 0.01, 0.005}, Scheme::rk4);
  for (const auto& l : rk4.levels) MESSAGE("rk4 dt=" << l.h << " err=" << l.error);
  CHECK(std::abs(rk4.slope - 4.0) <= 0.3);
  CHECK_THROWS_AS(manufactured_convergence(p, {0.5, 0.5}, 64, 1.0, {1e-2, 5e-3}), std::invalid_argument);
}

TEST_CASE("manufactured spatial convergence") {
  const ConvergenceReport r = manufactured_spatial(params(1, 1.5), {0.5, 0.5}, {8, 16, 32, 64, 128}, 0.5, 5e-3);
  for (const auto& l : r.levels) MESSAGE("n=" << l.h << " err=" << l.error);
  REQUIRE(r.levels.size() == 4);
  CHECK(r.levels[2].error < 1e-10);
  CHECK(r.levels[3].error < 1e-10);
}

TEST_CASE("Sobolev ratio of a single mode") {
  const Grid g(1, 256);
  SpectralField c(g);
  c.add_cosine({1, 0}, 1.0);
  const double expected = std::pow(3 * kPi / 4, 0.25) / std::sqrt(kPi);
  CHECK(expected == doctest::Approx(0.699).epsilon(1e-3));
  CHECK(sobolev_ratio(c) == doctest::Approx(expected).epsilon(1e-14));
  CHECK(std::abs(sobolev_ratio(10.0 * c) - sobolev_ratio(c)) <= 1e-12);
  CHECK(sobolev_ratio(SpectralField(g)) == 0.0);
  SpectralField shifted = c;
  shifted.add_mode({0, 0}, 1.0);
  CHECK_THROWS_AS(sobolev_ratio(shifted), std::invalid_argument);
}

TEST_CASE("Sobolev estimator") {
  const double single = std::pow(3 * kPi / 4, 0.25) / std::sqrt(kPi);
  const SobolevEstimate a = estimate_sobolev_constant(2000, 7);
  const SobolevEstimate b = estimate_sobolev_constant(2000, 7);
  const SobolevEstimate c = estimate_sobolev_constant(6000, 7);
  MESSAGE("C_S >= " << a.ratio << " / " << c.ratio);
  CHECK(a.ratio >= single);
  CHECK(a.ratio == b.ratio);
  CHECK(c.ratio >= a.ratio);
  CHECK(a.evaluations == 2000);
  CHECK(a.threshold == 4.0 / (9.0 * a.ratio * a.ratio));
  CHECK(std::abs(sobolev_ratio(a.field) - a.ratio) <= 1e-10);
  CHECK(std::abs(mean(a.field)) == 0.0);
  CHECK_THROWS_AS(estimate_sobolev_constant(0, 1), std::invalid_argument);
}

TEST_CASE("scaling symmetry") {
  const Problem base = small_problem(32, 1.5, 0.1, 1e-3);
  const ScalingReport one = scaling_symmetry_check(base, 1.0);
  CHECK(one.discrepancy == 0.0);
  CHECK_THROWS_AS(scaling_symmetry_check(base, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(scaling_symmetry_check(base, 0.0), std::invalid_argument);

  Problem lin = base;
  lin.settings.mode = StepMode::linear_only;
  CHECK(scaling_symmetry_check(lin, 2.0).discrepancy <= 1e-10);
  CHECK(scaling_symmetry_check(lin, 3.0).discrepancy <= 1e-10);

  const ScalingReport coarse = scaling_symmetry_check(base, 2.0);
  Problem fine = base;
  fine.settings.dt_max = 2.5e-4;
  const ScalingReport refined = scaling_symmetry_check(fine, 2.0);
  MESSAGE("scaling: " << coarse.discrepancy << " -> " << refined.discrepancy);
  CHECK(coarse.t_original == doctest::Approx(0.1 * std::pow(2.0, 1.5)));
  CHECK(coarse.discrepancy <= 1e-6);
  CHECK(refined.discrepancy < coarse.discrepancy);
}

TEST_CASE("criticality sweep") {
  Problem base = small_problem(32, 1.5, 0.2, 2e-3);
  const std::vector<Monitor> monitors{Monitor::E0, Monitor::E_half_alpha};
  const auto cells = criticality_sweep(base, {1.2, 1.5, 1.8}, {0.0, 0.5}, monitors, 1);
  REQUIRE(cells.size() == 6);
  CHECK(cells[0].alpha == 1.2);
  CHECK(cells[1].amplitude == 0.5);
  for (std::size_t i = 0; i < cells.size(); i += 2) {
    CHECK(cells[i].E2_growth == 1.0);
    CHECK_FALSE(cells[i].blew_up);
    CHECK(cells[i].monitors[0].pass);
  }
  const auto parallel = criticality_sweep(base, {1.2, 1.5, 1.8}, {0.0, 0.5}, monitors, 3);
  std::ostringstream s1, s3;
  write_sweep_csv(s1, cells);
  write_sweep_csv(s3, parallel);
  CHECK(s1.str() == s3.str());
  CHECK(s1.str().find("E0_pass") != std::string::npos);
  CHECK_THROWS_AS(criticality_sweep(base, {2.5}, {0.1}, monitors, 1), std::invalid_argument);
}
