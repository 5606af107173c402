#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "fracchemo/spectral_field.hpp"

namespace fracchemo {

/// Kinetic function f in dq/dt = grad f(u).
enum class Kinetics {
  quadratic,  // f(u) = u^2/2
  linear,     // f(u) = u
};

std::string_view to_string(Kinetics k);
Kinetics parse_kinetics(std::string_view text);

enum class Basis { cosine, sine };

/// One closed-form source term: amplitude * exp(-decay * t) * cos|sin(k.x).
/// `component` 0 targets u, 1..d target q_1..q_d.
struct ForcingTerm {
  int component = 0;
  Wavevector k;
  Basis basis = Basis::cosine;
  double amplitude = 0.0;
  double decay = 0.0;
};

/// Time-dependent forcing (F_u, F_q) for manufactured solutions.
struct Forcing {
  std::vector<ForcingTerm> terms;

  bool empty() const noexcept { return terms.empty(); }
  /// Adds F_u(t) to `u`.
  void add_to_u(double t, SpectralField& u) const;
  /// Adds F_q(t) to `q`.
  void add_to_q(double t, VectorField& q) const;
};

struct ModelParams {
  int dim = 1;
  double alpha = 2.0;
  Kinetics kinetics = Kinetics::quadratic;
  bool dealias = true;
  Forcing forcing;

  /// Throws std::invalid_argument on alpha outside (0, 2], bad dimension or
  /// forcing terms that name a missing component.
  void validate() const;
};

/// Solution state (u, q) at time t on a shared grid.
struct State {
  double t = 0.0;
  SpectralField u;
  VectorField q;

  State() = default;
  State(double time, SpectralField u_field, VectorField q_field);

  /// Zero state on `grid`.
  static State zero(const Grid& grid);

  const Grid& grid() const noexcept { return u.grid(); }
  bool all_finite() const noexcept { return u.all_finite() && q.all_finite(); }
};

}  // namespace fracchemo
