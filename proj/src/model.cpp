#include "fracchemo/model.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace fracchemo {

std::string_view to_string(Kinetics k) {
  return k == Kinetics::quadratic ? "quadratic" : "linear";
}

Kinetics parse_kinetics(std::string_view text) {
  if (text == "quadratic") return Kinetics::quadratic;
  if (text == "linear") return Kinetics::linear;
  throw std::invalid_argument("unknown kinetics '" + std::string(text) +
                              "' (expected quadratic or linear)");
}

namespace {

void add_term(const ForcingTerm& term, double t, SpectralField& target) {
  const double amp = term.amplitude * std::exp(-term.decay * t);
  if (term.basis == Basis::cosine) {
    target.add_cosine(term.k, amp);
  } else {
    target.add_sine(term.k, amp);
  }
}

}  // namespace

void Forcing::add_to_u(double t, SpectralField& u) const {
  for (const auto& term : terms) {
    if (term.component == 0) add_term(term, t, u);
  }
}

void Forcing::add_to_q(double t, VectorField& q) const {
  for (const auto& term : terms) {
    if (term.component >= 1) add_term(term, t, q[term.component - 1]);
  }
}

void ModelParams::validate() const {
  if (dim != 1 && dim != 2) throw std::invalid_argument("dimension must be 1 or 2");
  if (!(alpha > 0.0 && alpha <= 2.0)) {
    throw std::invalid_argument("alpha must lie in (0, 2], got " + std::to_string(alpha));
  }
  for (const auto& term : forcing.terms) {
    if (term.component < 0 || term.component > dim) {
      throw std::invalid_argument("forcing term targets a component outside (u, q_1..q_d)");
    }
    if (dim == 1 && term.k.k2 != 0) {
      throw std::invalid_argument("1-D forcing term carries a k2 component");
    }
  }
}

State::State(double time, SpectralField u_field, VectorField q_field)
    : t(time), u(std::move(u_field)), q(std::move(q_field)) {
  if (!(u.grid() == q.grid()) || q.dim() != u.grid().dim()) {
    throw std::invalid_argument("state fields must share one grid");
  }
}

State State::zero(const Grid& grid) { return State(0.0, SpectralField(grid), VectorField(grid)); }

}  // namespace fracchemo
