#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "fracchemo/diagnostics.hpp"
#include "fracchemo/integrator.hpp"

namespace fracchemo {

/// Initial data, model and integrator settings of one run.
struct Problem {
  State initial;
  ModelParams model;
  IntegratorSettings settings;
  bool irrotational = false;
};

/// Runs the problem with IFRK2 and the CFL rule.
Trajectory run_problem(const Problem& pb, const RunOptions& options = {});

// --- explicit reference solver -------------------------------------------

/// Largest dt accepted by rk4_reference: 0.5 / (n/2)^alpha.
double rk4_stable_dt(const Grid& grid, double alpha);

/// Classical RK4 on the full semi-discrete system, diffusion included explicitly.
class Rk4Stepper {
 public:
  Rk4Stepper(const Grid& grid, ModelParams params, StepMode mode = StepMode::full);
  State step(const State& s, double dt);

 private:
  State derivative(const State& s);

  Dynamics dynamics_;
  StepMode mode_;
};

/// Fixed-step RK4 trajectory of the problem. Rejects dt above rk4_stable_dt.
Trajectory rk4_reference(const Problem& pb, double dt);

// --- manufactured solutions ----------------------------------------------

/// u* = a e^{-t} cos x1, q* = (b e^{-t} sin x1, 0).
struct ManufacturedSolution {
  double a = 0.1;
  double b = 0.1;
};

/// Forcing that makes the manufactured pair an exact solution of the model.
Forcing manufactured_forcing(const ManufacturedSolution& m, Kinetics kinetics, int dim);
State manufactured_state(const Grid& grid, const ManufacturedSolution& m, double t);

enum class Scheme { ifrk2, rk4 };

struct ConvergenceLevel {
  double h = 0.0;  // dt or n
  double error = 0.0;
};

struct ConvergenceReport {
  std::string variable;  // "dt" or "n"
  std::vector<ConvergenceLevel> levels;
  double slope = 0.0;   // least-squares slope of log(error) against log(h); NaN if an error is 0
  double target = 0.0;
};

/// Least-squares slope of log error against log h.
double fitted_slope(const std::vector<ConvergenceLevel>& levels);

/// L2 distance between two states on the same grid.
double state_distance(const State& a, const State& b);

/// Temporal study: error at t_end against the exact solution for each dt.
/// `p.forcing` is replaced by the manufactured forcing.
ConvergenceReport manufactured_convergence(const ModelParams& p, const ManufacturedSolution& m, int n,
                                           double t_end, const std::vector<double>& dts,
                                           Scheme scheme = Scheme::ifrk2);

/// Spatial study at fixed dt: each level is compared with the finest grid on
/// the modes it resolves. The finest level itself is not reported.
ConvergenceReport manufactured_spatial(const ModelParams& p, const ManufacturedSolution& m,
                                       const std::vector<int>& ns, double t_end, double dt);

// --- Sobolev constant ----------------------------------------------------

struct SobolevEstimate {
  double ratio = 0.0;      // best ||g||_{L4} / ||g||_{Hdot^{1/4}} found
  SpectralField field;     // maximizer
  double threshold = 0.0;  // 4 / (9 ratio^2)
  std::size_t evaluations = 0;
};

inline constexpr int kSobolevGrid = 256;
inline constexpr int kSobolevBand = 32;

/// ||g||_{L4} / ||g||_{Hdot^{1/4}} for a 1-D mean-zero field; 0 for g = 0.
double sobolev_ratio(const SpectralField& g);
double sobolev_ratio(const SpectralField& g, FourierTransform& transform);

/// Best-so-far search over mean-zero fields with |k| <= 32 on n = 256: coordinate
/// ascent from cos x, then from seeded random starts. `budget` counts ratio
/// evaluations; the search order does not depend on it.
SobolevEstimate estimate_sobolev_constant(std::size_t budget, std::uint64_t seed);

// --- scaling symmetry ----------------------------------------------------

struct ScalingReport {
  int lambda = 1;
  double discrepancy = 0.0;  // relative L2
  double t_original = 0.0;   // lambda^alpha T
  double t_rescaled = 0.0;   // T
  bool blew_up = false;
};

/// Runs the base problem to lambda^alpha T and the rescaled data
/// lambda^(alpha-1) (u0, q0)(lambda x) on the n*lambda grid to T, then compares
/// lambda^(alpha-1) u(lambda x) with the second run. Rejects non-integer lambda.
ScalingReport scaling_symmetry_check(const Problem& base, double lambda);

// --- criticality sweep ---------------------------------------------------

struct SweepCell {
  double alpha = 0.0;
  double amplitude = 0.0;
  double E0_initial = 0.0;
  double E0_final = 0.0;
  double E2_initial = 0.0;
  double E2_final = 0.0;
  double E2_growth = 1.0;  // max_t E2(t) / E2(0)
  bool blew_up = false;
  std::size_t steps = 0;
  double t_final = 0.0;
  std::vector<MonitorReport> monitors;
};

/// One run per (alpha, amplitude) pair on `workers` threads; cells are ordered
/// alpha-major whatever the worker count.
std::vector<SweepCell> criticality_sweep(const Problem& base, const std::vector<double>& alphas,
                                         const std::vector<double>& amplitudes,
                                         const std::vector<Monitor>& monitors, int workers = 1);

void write_sweep_csv(std::ostream& out, const std::vector<SweepCell>& cells);

}  // namespace fracchemo
