#pragma once

#include <vector>

#include "fracchemo/fft.hpp"
#include "fracchemo/model.hpp"

namespace fracchemo {

/// Right-hand side of
///   du/dt = -Lambda^alpha u + div(u q) + F_u,
///   dq/dt = grad f(u) + F_q,
/// with products formed at the collocation nodes and 2/3-dealiased.
///
/// Holds transform plans and scratch buffers for one grid; not thread-safe.
class Dynamics {
 public:
  Dynamics(const Grid& grid, ModelParams params);

  const ModelParams& params() const noexcept { return params_; }
  const Grid& grid() const noexcept { return transform_.grid(); }
  FourierTransform& transform() noexcept { return transform_; }

  SpectralField rhs_u(const State& s);
  /// Product form: P(u grad u) for quadratic kinetics, grad u for linear.
  VectorField rhs_q(const State& s);
  /// grad(P(u^2)/2); exactly curl-free. Quadratic kinetics only.
  VectorField rhs_q_gradient_form(const State& s);

  /// Everything except the diffusion term: the transport and kinetic coupling
  /// (skipped when `coupling` is false) plus the forcing. The q part uses the
  /// gradient form for quadratic kinetics.
  struct Tendency {
    SpectralField u;
    VectorField q;
  };
  Tendency explicit_terms(const State& s, bool coupling = true);

 private:
  void require_grid(const State& s) const;
  SpectralField transport(const State& s);
  SpectralField product(std::span<const double> a, std::span<const double> b);
  void to_physical(const SpectralField& f, std::vector<double>& out);

  ModelParams params_;
  FourierTransform transform_;
  std::vector<double> u_phys_;
  std::vector<double> q_phys_;
  std::vector<double> work_;
};

SpectralField rhs_u(const State& s, const ModelParams& p);
VectorField rhs_q(const State& s, const ModelParams& p);
VectorField rhs_q_gradient_form(const State& s, const ModelParams& p);

}  // namespace fracchemo
