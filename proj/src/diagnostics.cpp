#include "fracchemo/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "fracchemo/operators.hpp"

namespace fracchemo {

namespace {

constexpr double kNormalizerFloor = 1e-14;
constexpr double kPositivitySlack = 1e-12;

double relative(double value, double reference) {
  return std::abs(value) / std::max(0.5 * reference, kNormalizerFloor);
}

}  // namespace

double energy(const State& s, double beta) {
  return sobolev_norm_sq(s.u, beta) + sobolev_norm_sq(s.q, beta);
}

double dissipation(const State& s, double beta, double alpha) {
  return sobolev_norm_sq(s.u, beta + 0.5 * alpha);
}

DiagnosticsProbe::DiagnosticsProbe(const Grid& grid, double alpha)
    : alpha_(alpha),
      grid_(grid),
      padded_grid_(padded_grid(grid)),
      base_(grid),
      pad_(padded_grid_),
      base_buf_(grid.size()),
      pad_bufs_(6, std::vector<double>(padded_grid_.size())) {}

std::vector<double>& DiagnosticsProbe::padded(const SpectralField& f, std::size_t slot) {
  pad_.inverse(resample(f, padded_grid_), pad_bufs_[slot]);
  return pad_bufs_[slot];
}

DiagnosticsRow DiagnosticsProbe::measure(const State& s) {
  if (!(s.grid() == grid_)) throw std::invalid_argument("state grid does not match probe grid");
  DiagnosticsRow row;
  row.t = s.t;

  row.E0 = energy(s, 0.0);
  row.Ehalf = energy(s, 0.5 * alpha_);
  row.E1 = energy(s, 1.0);
  row.E2 = energy(s, 2.0);
  row.D0 = dissipation(s, 0.0, alpha_);
  row.Dhalf = dissipation(s, 0.5 * alpha_, alpha_);
  row.D1 = dissipation(s, 1.0, alpha_);
  row.D2 = dissipation(s, 2.0, alpha_);
  row.u_l2_sq = sobolev_norm_sq(s.u, 0.0);

  const SpectralField div_q = divergence(s.q);
  const double div_sq = sobolev_norm_sq(div_q, 0.0);
  row.h1_divq = sobolev_norm_sq(s.u, 1.0) + div_sq;
  row.div_q_norm = std::sqrt(div_sq);
  row.grad_q_norm = std::sqrt(sobolev_norm_sq(s.q, 1.0));
  row.q_l2 = std::sqrt(sobolev_norm_sq(s.q, 0.0));
  if (grid_.dim() == 2) row.curl_norm = sobolev_norm(curl2d(s.q), 0.0);

  row.mean_u = mean(s.u);
  for (int i = 0; i < s.q.dim(); ++i) row.mean_q[static_cast<std::size_t>(i)] = mean(s.q[i]);

  base_.inverse(s.u, base_buf_);
  const auto [lo, hi] = std::minmax_element(base_buf_.begin(), base_buf_.end());
  row.min_u = *lo;
  row.max_u = *hi;
  row.negative_u = row.min_u < -kPositivitySlack * std::max(1.0, std::abs(row.max_u));
  for (int i = 0; i < s.q.dim(); ++i) {
    base_.inverse(s.q[i], base_buf_);
    for (double v : base_buf_) row.max_abs_q = std::max(row.max_abs_q, std::abs(v));
  }

  if (grid_.dim() == 1) {
    nonlinear_1d(s, row);
  } else {
    nonlinear_2d(s, row);
  }
  return row;
}

void DiagnosticsProbe::nonlinear_1d(const State& s, DiagnosticsRow& row) {
  const SpectralField ux = partial(s.u, 0);
  const SpectralField uxx = partial(ux, 0);
  const SpectralField qx = partial(s.q[0], 0);
  const SpectralField qxx = partial(qx, 0);
  const auto& a = padded(ux, 0);
  const auto& b = padded(uxx, 1);
  const auto& c = padded(qx, 2);
  const auto& d = padded(qxx, 3);
  double i_sum = 0.0;
  double j1_sum = 0.0;
  double j2_sum = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    i_sum += c[j] * a[j] * a[j];
    j1_sum += c[j] * b[j] * b[j];
    j2_sum += d[j] * b[j] * a[j];
  }
  const double cell = padded_grid_.spacing();
  row.I = 1.5 * cell * i_sum;
  row.J1 = 2.5 * cell * j1_sum;
  row.J2 = 5.0 * cell * j2_sum;
}

void DiagnosticsProbe::nonlinear_2d(const State& s, DiagnosticsRow& row) {
  const auto& ux = padded(partial(s.u, 0), 0);
  const auto& uy = padded(partial(s.u, 1), 1);
  const auto& lap = padded(laplacian(s.u), 2);
  const auto& q1 = padded(s.q[0], 3);
  const auto& q2 = padded(s.q[1], 4);
  const auto& dq = padded(divergence(s.q), 5);
  double sum = 0.0;
  for (std::size_t j = 0; j < ux.size(); ++j) {
    const double transport = (ux[j] * q1[j] + uy[j] * q2[j]) * lap[j];
    sum += -transport + (ux[j] * ux[j] + uy[j] * uy[j]) * dq[j];
  }
  const double h = padded_grid_.spacing();
  row.N2 = h * h * sum;
}

IdentityLedger::IdentityLedger(int dim, bool nonlinear_active)
    : dim_(dim), nonlinear_active_(nonlinear_active) {}

void IdentityLedger::start(DiagnosticsRow& first) {
  first.int_D0 = first.int_D1 = first.int_D2 = 0.0;
  first.int_I = first.int_J1 = first.int_J2 = first.int_N2 = 0.0;
  initial_ = first;
  fill_residuals(first);
}

void IdentityLedger::advance(const DiagnosticsRow& prev, DiagnosticsRow& cur) {
  const double half_dt = 0.5 * (cur.t - prev.t);
  cur.int_D0 = prev.int_D0 + half_dt * (prev.D0 + cur.D0);
  cur.int_D1 = prev.int_D1 + half_dt * (prev.D1 + cur.D1);
  cur.int_D2 = prev.int_D2 + half_dt * (prev.D2 + cur.D2);
  if (nonlinear_active_) {
    cur.int_I = prev.int_I + half_dt * (prev.I + cur.I);
    cur.int_J1 = prev.int_J1 + half_dt * (prev.J1 + cur.J1);
    cur.int_J2 = prev.int_J2 + half_dt * (prev.J2 + cur.J2);
    cur.int_N2 = prev.int_N2 + half_dt * (prev.N2 + cur.N2);
  } else {
    cur.int_I = cur.int_J1 = cur.int_J2 = cur.int_N2 = 0.0;
  }
  fill_residuals(cur);
}

void IdentityLedger::fill_residuals(DiagnosticsRow& row) const {
  const auto& r0 = initial_;
  row.R_low = relative(0.5 * row.E0 + row.int_D0 - 0.5 * r0.E0, r0.E0);
  if (dim_ == 1) {
    row.R_1 = relative(0.5 * row.E1 + row.int_D1 - row.int_I - 0.5 * r0.E1, r0.E1);
    row.R_2 = relative(0.5 * row.E2 + row.int_D2 - row.int_J1 - row.int_J2 - 0.5 * r0.E2, r0.E2);
  } else {
    row.R_1 = relative(0.5 * row.h1_divq + row.int_D1 - row.int_N2 - 0.5 * r0.h1_divq, r0.h1_divq);
    row.R_2 = 0.0;
  }
}

namespace {

void require_rows(const Trajectory& tr) {
  if (tr.rows.size() < 2) throw std::invalid_argument("residual needs at least two trajectory rows");
}

void require_identity_applies(const Trajectory& tr) {
  if (tr.forced) throw std::invalid_argument("energy identities do not hold for forced runs");
  if (tr.nonlinear_active && tr.kinetics != Kinetics::quadratic) {
    throw std::invalid_argument("energy identities are stated for quadratic kinetics");
  }
}

template <class Get>
double max_over_rows(const Trajectory& tr, Get get) {
  double worst = 0.0;
  for (const auto& row : tr.rows) worst = std::max(worst, get(row));
  return worst;
}

}  // namespace

double residual_energy_balance(const Trajectory& tr) {
  require_rows(tr);
  require_identity_applies(tr);
  return max_over_rows(tr, [](const DiagnosticsRow& r) { return r.R_low; });
}

double residual_h1_1d(const Trajectory& tr) {
  if (tr.dim != 1) throw std::invalid_argument("residual_h1_1d requires d = 1");
  require_rows(tr);
  require_identity_applies(tr);
  return max_over_rows(tr, [](const DiagnosticsRow& r) { return r.R_1; });
}

double residual_h2_1d(const Trajectory& tr) {
  if (tr.dim != 1) throw std::invalid_argument("residual_h2_1d requires d = 1");
  require_rows(tr);
  require_identity_applies(tr);
  return max_over_rows(tr, [](const DiagnosticsRow& r) { return r.R_2; });
}

double residual_h1_2d(const Trajectory& tr) {
  if (tr.dim != 2) throw std::invalid_argument("residual_h1_2d requires d = 2");
  if (!tr.irrotational) {
    throw std::invalid_argument("residual_h1_2d requires a scenario declared irrotational");
  }
  require_rows(tr);
  require_identity_applies(tr);
  return max_over_rows(tr, [](const DiagnosticsRow& r) { return r.R_1; });
}

std::string_view to_string(Monitor m) {
  switch (m) {
    case Monitor::E0: return "E0";
    case Monitor::E_half_alpha: return "E_half_alpha";
    case Monitor::E1_full: return "E1_full";
    case Monitor::H1_divq_2d: return "H1_divq_2d";
  }
  return "?";
}

Monitor parse_monitor(std::string_view text) {
  for (Monitor m : {Monitor::E0, Monitor::E_half_alpha, Monitor::E1_full, Monitor::H1_divq_2d}) {
    if (text == to_string(m)) return m;
  }
  throw std::invalid_argument("unknown monitor '" + std::string(text) +
                              "' (expected E0, E_half_alpha, E1_full or H1_divq_2d)");
}

double monitored_quantity(const DiagnosticsRow& row, Monitor which) {
  switch (which) {
    case Monitor::E0: return row.E0;
    case Monitor::E_half_alpha: return row.Ehalf;
    case Monitor::E1_full: return row.E0 + row.E1;
    case Monitor::H1_divq_2d: return row.u_l2_sq + row.h1_divq;
  }
  return 0.0;
}

MonitorReport monitor_monotone(const Trajectory& tr, Monitor which, double relative_tolerance) {
  if (tr.rows.empty()) throw std::invalid_argument("monitor needs a nonempty trajectory");
  MonitorReport report;
  report.name = std::string(to_string(which));
  report.tolerance = relative_tolerance;

  std::ostringstream regime;
  regime << "d=" << tr.dim << " alpha=" << tr.alpha;
  switch (which) {
    case Monitor::E0:
      report.hypotheses_hold = true;
      regime << "; unconditional L2 balance";
      break;
    case Monitor::E_half_alpha:
      report.hypotheses_hold = tr.dim == 1 && tr.alpha > 1.0 && tr.alpha < 1.5;
      regime << "; requires d=1, 1<alpha<1.5, small Hdot^(alpha/2) data";
      break;
    case Monitor::E1_full:
      report.hypotheses_hold = tr.dim == 1 && tr.alpha >= 0.5 && tr.alpha <= 1.0;
      regime << "; requires d=1, 0.5<=alpha<=1, E1(0) < 4/(9 C_S^2)";
      break;
    case Monitor::H1_divq_2d:
      report.hypotheses_hold = tr.dim == 2 && tr.alpha >= 1.0 && tr.alpha < 2.0 && tr.irrotational;
      regime << "; requires d=2, 1<=alpha<2, curl q0 = 0, small Hdot^1 data";
      break;
  }
  regime << (report.hypotheses_hold ? " [met]" : " [not met]");
  report.regime = regime.str();

  report.initial = monitored_quantity(tr.rows.front(), which);
  for (std::size_t i = 1; i < tr.rows.size(); ++i) {
    const double inc = monitored_quantity(tr.rows[i], which) - monitored_quantity(tr.rows[i - 1], which);
    report.max_increment = std::max(report.max_increment, inc);
  }
  report.pass = report.max_increment <= relative_tolerance * std::max(report.initial, kNormalizerFloor);
  return report;
}

IrrotationalReport irrotational_checks(const State& s) {
  if (s.grid().dim() != 2) throw std::invalid_argument("irrotational checks require d = 2");
  IrrotationalReport r;
  r.curl_norm = sobolev_norm(curl2d(s.q), 0.0);
  r.grad_q_norm = std::sqrt(sobolev_norm_sq(s.q, 1.0));
  r.div_q_norm = sobolev_norm(divergence(s.q), 0.0);
  const double q_norm = std::sqrt(sobolev_norm_sq(s.q, 0.0));
  if (r.div_q_norm > 0.0) {
    r.poincare_ratio = q_norm / r.div_q_norm;
  } else {
    r.poincare_ratio = q_norm > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  }
  return r;
}

}  // namespace fracchemo
