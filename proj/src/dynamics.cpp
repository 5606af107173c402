#include "fracchemo/dynamics.hpp"

#include <stdexcept>
#include <utility>

#include "fracchemo/operators.hpp"

namespace fracchemo {

Dynamics::Dynamics(const Grid& grid, ModelParams params)
    : params_(std::move(params)), transform_(grid) {
  params_.validate();
  if (params_.dim != grid.dim()) {
    throw std::invalid_argument("model dimension does not match grid dimension");
  }
  u_phys_.resize(grid.size());
  q_phys_.resize(grid.size());
  work_.resize(grid.size());
}

void Dynamics::require_grid(const State& s) const {
  if (!(s.u.grid() == grid()) || !(s.q.grid() == grid()) || s.q.dim() != grid().dim()) {
    throw std::invalid_argument("state grid does not match the dynamics grid");
  }
}

void Dynamics::to_physical(const SpectralField& f, std::vector<double>& out) {
  transform_.inverse(f, out);
}

SpectralField Dynamics::product(std::span<const double> a, std::span<const double> b) {
  for (std::size_t i = 0; i < work_.size(); ++i) work_[i] = a[i] * b[i];
  SpectralField out = transform_.forward(work_);
  if (params_.dealias) dealias_in_place(out);
  return out;
}

SpectralField Dynamics::transport(const State& s) {
  to_physical(s.u, u_phys_);
  SpectralField div(grid());
  for (int i = 0; i < grid().dim(); ++i) {
    to_physical(s.q[i], q_phys_);
    div += partial(product(u_phys_, q_phys_), i);
  }
  return div;
}

SpectralField Dynamics::rhs_u(const State& s) {
  require_grid(s);
  SpectralField out = transport(s);
  out -= fractional_laplacian(s.u, params_.alpha);
  params_.forcing.add_to_u(s.t, out);
  return out;
}

VectorField Dynamics::rhs_q(const State& s) {
  require_grid(s);
  VectorField out(grid());
  if (params_.kinetics == Kinetics::linear) {
    out = gradient(s.u);
  } else {
    to_physical(s.u, u_phys_);
    for (int i = 0; i < grid().dim(); ++i) {
      to_physical(partial(s.u, i), q_phys_);
      out[i] = product(u_phys_, q_phys_);
    }
  }
  params_.forcing.add_to_q(s.t, out);
  return out;
}

VectorField Dynamics::rhs_q_gradient_form(const State& s) {
  require_grid(s);
  if (params_.kinetics != Kinetics::quadratic) {
    throw std::invalid_argument("gradient form of the q update applies to quadratic kinetics only");
  }
  to_physical(s.u, u_phys_);
  SpectralField half_square = product(u_phys_, u_phys_);
  half_square *= 0.5;
  VectorField out = gradient(half_square);
  params_.forcing.add_to_q(s.t, out);
  return out;
}

Dynamics::Tendency Dynamics::explicit_terms(const State& s, bool coupling) {
  require_grid(s);
  Tendency out{SpectralField(grid()), VectorField(grid())};
  if (coupling) {
    out.u = transport(s);  // leaves u_phys_ holding u at the nodes
    if (params_.kinetics == Kinetics::quadratic) {
      SpectralField half_square = product(u_phys_, u_phys_);
      half_square *= 0.5;
      out.q = gradient(half_square);
    } else {
      out.q = gradient(s.u);
    }
  }
  params_.forcing.add_to_u(s.t, out.u);
  params_.forcing.add_to_q(s.t, out.q);
  return out;
}

SpectralField rhs_u(const State& s, const ModelParams& p) {
  Dynamics dyn(s.grid(), p);
  return dyn.rhs_u(s);
}

VectorField rhs_q(const State& s, const ModelParams& p) {
  Dynamics dyn(s.grid(), p);
  return dyn.rhs_q(s);
}

VectorField rhs_q_gradient_form(const State& s, const ModelParams& p) {
  Dynamics dyn(s.grid(), p);
  return dyn.rhs_q_gradient_form(s);
}

}  // namespace fracchemo
