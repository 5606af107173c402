#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "fracchemo/fft.hpp"
#include "fracchemo/model.hpp"

namespace fracchemo {

/// Energies E_beta = ||u||^2_{Hdot^beta} + ||q||^2_{Hdot^beta} (q summed over components).
double energy(const State& s, double beta);
/// Dissipations D_beta = ||u||^2_{Hdot^(beta + alpha/2)}.
double dissipation(const State& s, double beta, double alpha);

/// One sampling instant of every monitored quantity.
///
/// The instantaneous block is filled by DiagnosticsProbe; the accumulated
/// integrals and residuals by IdentityLedger. In 2-D the first-order identity
/// uses ||u||^2_{Hdot^1} + ||div q||^2 (`h1_divq`) and the nonlinear integral N2.
struct DiagnosticsRow {
  double t = 0.0;
  std::size_t step = 0;

  double E0 = 0.0;
  double Ehalf = 0.0;  // E_{alpha/2}
  double E1 = 0.0;
  double E2 = 0.0;
  double D0 = 0.0;
  double Dhalf = 0.0;
  double D1 = 0.0;
  double D2 = 0.0;
  double u_l2_sq = 0.0;
  double h1_divq = 0.0;

  double mean_u = 0.0;
  double min_u = 0.0;
  double max_u = 0.0;
  double max_abs_q = 0.0;
  std::array<double, 2> mean_q{};
  double curl_norm = 0.0;
  double div_q_norm = 0.0;
  double grad_q_norm = 0.0;
  double q_l2 = 0.0;

  // Nonlinear integrands at this instant.
  double I = 0.0;   // (3/2) int q_x u_x^2                        (1-D)
  double J1 = 0.0;  // (5/2) int q_x u_xx^2                       (1-D)
  double J2 = 0.0;  // 5 int q_xx u_xx u_x                        (1-D)
  double N2 = 0.0;  // int (-grad u.q lap u + |grad u|^2 div q)   (2-D)

  // Time integrals from 0 to t (trapezoidal at step boundaries).
  double int_D0 = 0.0;
  double int_D1 = 0.0;
  double int_D2 = 0.0;
  double int_I = 0.0;
  double int_J1 = 0.0;
  double int_J2 = 0.0;
  double int_N2 = 0.0;

  double R_low = 0.0;
  double R_1 = 0.0;
  double R_2 = 0.0;  // 1-D only; 0 in 2-D

  bool blowup = false;
  bool negative_u = false;
};

/// Evaluates the instantaneous block of DiagnosticsRow. Cubic integrands are
/// integrated on the 3/2-padded grid, which is exact for fields on the base grid.
class DiagnosticsProbe {
 public:
  DiagnosticsProbe(const Grid& grid, double alpha);

  DiagnosticsRow measure(const State& s);

 private:
  void nonlinear_1d(const State& s, DiagnosticsRow& row);
  void nonlinear_2d(const State& s, DiagnosticsRow& row);
  std::vector<double>& padded(const SpectralField& f, std::size_t slot);

  double alpha_;
  Grid grid_;
  Grid padded_grid_;
  FourierTransform base_;
  FourierTransform pad_;
  std::vector<double> base_buf_;
  std::vector<std::vector<double>> pad_bufs_;
};

/// Accumulates the time integrals of the energy identities and fills the
/// residual columns. Residuals are normalized by max(E(0)/2, 1e-14).
class IdentityLedger {
 public:
  /// `nonlinear_active` false means the coupling terms were switched off, so
  /// the nonlinear integrals are excluded from the balance.
  IdentityLedger(int dim, bool nonlinear_active);

  void start(DiagnosticsRow& first);
  void advance(const DiagnosticsRow& prev, DiagnosticsRow& cur);

 private:
  void fill_residuals(DiagnosticsRow& row) const;

  int dim_;
  bool nonlinear_active_;
  DiagnosticsRow initial_;
};

/// Sampled trajectory together with the run metadata the diagnostics need.
struct Trajectory {
  int dim = 1;
  double alpha = 2.0;
  Kinetics kinetics = Kinetics::quadratic;
  bool forced = false;
  bool nonlinear_active = true;
  bool irrotational = false;

  std::vector<DiagnosticsRow> rows;
  std::vector<State> states;  // filled only when requested
  State final_state;
  std::size_t steps = 0;
  bool blew_up = false;
  std::string stop_reason;
};

double residual_energy_balance(const Trajectory& tr);
double residual_h1_1d(const Trajectory& tr);
double residual_h2_1d(const Trajectory& tr);
double residual_h1_2d(const Trajectory& tr);

enum class Monitor {
  E0,            // E_0, unconditional
  E_half_alpha,  // E_{alpha/2}, small data, 1 < alpha < 1.5, d = 1
  E1_full,       // ||u||^2_{H1} + ||q||^2_{H1}, 0.5 <= alpha <= 1, d = 1
  H1_divq_2d,    // ||u||^2_{H1} + ||div q||^2_{L2}, 1 <= alpha < 2, d = 2
};

std::string_view to_string(Monitor m);
Monitor parse_monitor(std::string_view text);

struct MonitorReport {
  std::string name;
  std::string regime;       // hypotheses of the underlying statement and whether this run meets them
  bool hypotheses_hold = false;
  double initial = 0.0;     // monitored quantity at t = 0
  double max_increment = 0.0;
  double tolerance = 0.0;   // relative, per sampling interval
  bool pass = false;
};

/// Value of the monitored quantity on one row.
double monitored_quantity(const DiagnosticsRow& row, Monitor which);

/// Largest increase of the monitored quantity between consecutive samples;
/// passes iff it does not exceed tolerance * max(quantity(0), tiny).
MonitorReport monitor_monotone(const Trajectory& tr, Monitor which,
                               double relative_tolerance = 1e-9);

struct IrrotationalReport {
  double curl_norm = 0.0;
  double grad_q_norm = 0.0;
  double div_q_norm = 0.0;
  double poincare_ratio = 0.0;  // ||q||_{L2} / ||div q||_{L2}, reported only
};

/// Curl, gradient and divergence norms of q. 2-D only.
IrrotationalReport irrotational_checks(const State& s);

}  // namespace fracchemo
