#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "fracchemo/dynamics.hpp"
#include "fracchemo/operators.hpp"
#include "test_support.hpp"

using namespace fracchemo;
using namespace fracchemo::testing;

namespace {

ModelParams params(int dim, double alpha, Kinetics k = Kinetics::quadratic) {
  ModelParams p;
  p.dim = dim;
  p.alpha = alpha;
  p.kinetics = k;
  return p;
}

SpectralField cosine(const Grid& g, Wavevector k, double amp = 1.0) {
  SpectralField f(g);
  f.add_cosine(k, amp);
  return f;
}

SpectralField sine(const Grid& g, Wavevector k, double amp = 1.0) {
  SpectralField f(g);
  f.add_sine(k, amp);
  return f;
}

}  // namespace

TEST_CASE("rhs_u examples") {
  const Grid g(1, 16);
  const State diffusion(0.0, cosine(g, {1, 0}), VectorField(g));
  CHECK(max_abs_diff(rhs_u(diffusion, params(1, 2.0)), cosine(g, {1, 0}, -1.0)) <= 1e-15);

  const State coupled(0.0, cosine(g, {1, 0}), VectorField({sine(g, {1, 0})}));
  SpectralField expected = cosine(g, {1, 0}, -1.0);
  expected += cosine(g, {2, 0});
  CHECK(max_abs_diff(rhs_u(coupled, params(1, 2.0)), expected) <= 1e-14);

  SpectralField c(g);
  c.add_mode({0, 0}, 0.7);
  const State steady(0.0, c, VectorField(g));
  CHECK(max_abs(rhs_u(steady, params(1, 1.3))) == 0.0);
}

TEST_CASE("rhs_q examples") {
  const Grid g(1, 16);
  const State s(0.0, cosine(g, {1, 0}), VectorField(g));
  const SpectralField expected_quad = sine(g, {2, 0}, -0.5);
  CHECK(max_abs_diff(rhs_q(s, params(1, 2.0))[0], expected_quad) <= 1e-14);
  CHECK(max_abs_diff(rhs_q(s, params(1, 2.0, Kinetics::linear))[0], sine(g, {1, 0}, -1.0)) <= 1e-15);
  CHECK(max_abs_diff(rhs_q_gradient_form(s, params(1, 2.0))[0], expected_quad) <= 1e-14);

  SpectralField c(g);
  c.add_mode({0, 0}, -2.0);
  const State k(0.0, c, VectorField(g));
  CHECK(max_abs(rhs_q(k, params(1, 2.0))[0]) == 0.0);
  CHECK(max_abs(rhs_q_gradient_form(k, params(1, 2.0))[0]) == 0.0);
  CHECK_THROWS_AS(rhs_q_gradient_form(s, params(1, 2.0, Kinetics::linear)), std::invalid_argument);
}

TEST_CASE("gradient form matches product form and is curl-free") {
  const Grid g(2, 24);
  const SpectralField ss = field_from(g, [](double x, double y) { return std::sin(x) * std::sin(y); });
  const State s(0.0, ss, VectorField(g));
  const VectorField grad_form = rhs_q_gradient_form(s, params(2, 2.0));
  CHECK(max_abs(curl2d(grad_form)) <= 1e-13);

  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const State r(0.0, random_field(g, 7, seed), gradient(random_field(g, 7, seed + 50)));
    const VectorField product_form = rhs_q(r, params(2, 1.5));
    const VectorField gradient_form = rhs_q_gradient_form(r, params(2, 1.5));
    for (int i = 0; i < 2; ++i) CHECK(max_abs_diff(product_form[i], gradient_form[i]) <= 1e-13);
    CHECK(max_abs(curl2d(gradient_form)) <= 1e-13);
  }
}

TEST_CASE("rhs means vanish") {
  for (int dim : {1, 2}) {
    const Grid g(dim, 24);
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      VectorField q(g);
      for (int i = 0; i < dim; ++i) q[i] = random_field(g, 11, seed * 10 + i);
      const State s(0.0, random_field(g, 11, seed), q);
      for (Kinetics k : {Kinetics::quadratic, Kinetics::linear}) {
        const ModelParams p = params(dim, 0.8, k);
        CHECK(std::abs(mean(rhs_u(s, p))) <= 1e-15);
        for (const auto& c : rhs_q(s, p)) CHECK(std::abs(mean(c)) <= 1e-15);
      }
    }
  }
}

TEST_CASE("dealiased rhs is resolution independent") {
  for (int dim : {1, 2}) {
    const Grid coarse(dim, 24);
    const Grid fine(dim, 48);
    VectorField q(coarse);
    for (int i = 0; i < dim; ++i) q[i] = random_field(coarse, 8, 7 + i);
    const State s(0.0, random_field(coarse, 8, 3), q);
    VectorField qf(fine);
    for (int i = 0; i < dim; ++i) qf[i] = resample(q[i], fine);
    const State sf(0.0, resample(s.u, fine), qf);
    const ModelParams p = params(dim, 1.7);
    // compare on the modes both grids retain
    const SpectralField a = rhs_u(s, p);
    const SpectralField b = dealias(resample(rhs_u(sf, p), coarse));
    CHECK(max_abs_diff(dealias(a), b) <= 1e-12);
    const VectorField qa = rhs_q_gradient_form(s, p);
    const VectorField qb = rhs_q_gradient_form(sf, p);
    for (int i = 0; i < dim; ++i) CHECK(max_abs_diff(dealias(qa[i]), dealias(resample(qb[i], coarse))) <= 1e-12);
  }
}

TEST_CASE("forcing enters both equations") {
  const Grid g(1, 16);
  ModelParams p = params(1, 2.0);
  p.forcing.terms.push_back({0, {2, 0}, Basis::cosine, 3.0, 1.0});
  p.forcing.terms.push_back({1, {1, 0}, Basis::sine, -2.0, 0.0});
  const State s(std::log(3.0), SpectralField(g), VectorField(g));
  CHECK(max_abs_diff(rhs_u(s, p), cosine(g, {2, 0}, 1.0)) <= 1e-15);
  CHECK(max_abs_diff(rhs_q(s, p)[0], sine(g, {1, 0}, -2.0)) <= 1e-15);

  ModelParams bad = params(1, 2.0);
  bad.forcing.terms.push_back({2, {1, 0}, Basis::sine, 1.0, 0.0});
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("grid mismatch is rejected") {
  const State s(0.0, SpectralField(Grid(1, 16)), VectorField(Grid(1, 16)));
  Dynamics d(Grid(1, 32), params(1, 2.0));
  CHECK_THROWS_AS(d.rhs_u(s), std::invalid_argument);
  CHECK_THROWS_AS(State(0.0, SpectralField(Grid(1, 16)), VectorField(Grid(1, 32))), std::invalid_argument);
}
