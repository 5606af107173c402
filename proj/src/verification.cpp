#include "fracchemo/verification.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <ostream>
#include <random>
#include <stdexcept>
#include <thread>

#include <fmt/format.h>

#include "fracchemo/operators.hpp"

namespace fracchemo {

Trajectory run_problem(const Problem& pb, const RunOptions& options) {
  RunOptions opt = options;
  opt.irrotational = pb.irrotational;
  return simulate(pb.initial, pb.model, pb.settings, opt);
}

double rk4_stable_dt(const Grid& grid, double alpha) { return 0.5 / std::pow(0.5 * grid.n(), alpha); }

Rk4Stepper::Rk4Stepper(const Grid& grid, ModelParams params, StepMode mode)
    : dynamics_(grid, std::move(params)), mode_(mode) {}

State Rk4Stepper::derivative(const State& s) {
  Dynamics::Tendency k = dynamics_.explicit_terms(s, mode_ == StepMode::full);
  k.u -= fractional_laplacian(s.u, dynamics_.params().alpha);
  return State(s.t, std::move(k.u), std::move(k.q));
}

State Rk4Stepper::step(const State& s, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
  if (!s.all_finite()) throw NonFiniteState("non-finite values in state at t=" + std::to_string(s.t));
  auto stage = [&](const State& d, double c) {
    return State(s.t + c * dt, s.u + (c * dt) * d.u, s.q + (c * dt) * d.q);
  };
  const State k1 = derivative(s);
  const State k2 = derivative(stage(k1, 0.5));
  const State k3 = derivative(stage(k2, 0.5));
  const State k4 = derivative(stage(k3, 1.0));
  const double w = dt / 6.0;
  SpectralField u = s.u + w * (k1.u + 2.0 * k2.u + 2.0 * k3.u + k4.u);
  VectorField q = s.q + w * (k1.q + 2.0 * k2.q + 2.0 * k3.q + k4.q);
  State next(s.t + dt, std::move(u), std::move(q));
  if (!next.all_finite()) throw NonFiniteState("step produced non-finite values at t=" + std::to_string(next.t));
  return next;
}

Trajectory rk4_reference(const Problem& pb, double dt) {
  const double limit = rk4_stable_dt(pb.initial.grid(), pb.model.alpha);
  if (!(dt > 0.0) || dt > limit) {
    throw std::invalid_argument(fmt::format("rk4_reference: dt={:g} outside (0, {:g}] for n={} alpha={:g}", dt,
                                            limit, pb.initial.grid().n(), pb.model.alpha));
  }
  IntegratorSettings set = pb.settings;
  set.dt_max = dt;
  RunOptions opt;
  opt.irrotational = pb.irrotational;
  opt.fixed_dt = dt;
  Rk4Stepper stepper(pb.initial.grid(), pb.model, set.mode);
  return integrate(pb.initial, pb.model, set, [&stepper](const State& s, double h) { return stepper.step(s, h); },
                   opt);
}

// --- manufactured solutions ------------------------------------------------

Forcing manufactured_forcing(const ManufacturedSolution& m, Kinetics kinetics, int dim) {
  (void)dim;
  Forcing f;
  if (m.a * m.b != 0.0) f.terms.push_back({0, {2, 0}, Basis::cosine, -m.a * m.b, 2.0});
  if (kinetics == Kinetics::quadratic) {
    if (m.b != 0.0) f.terms.push_back({1, {1, 0}, Basis::sine, -m.b, 1.0});
    if (m.a != 0.0) f.terms.push_back({1, {2, 0}, Basis::sine, 0.5 * m.a * m.a, 2.0});
  } else if (m.a != m.b) {
    f.terms.push_back({1, {1, 0}, Basis::sine, m.a - m.b, 1.0});
  }
  return f;
}

State manufactured_state(const Grid& grid, const ManufacturedSolution& m, double t) {
  SpectralField u(grid);
  u.add_cosine({1, 0}, m.a * std::exp(-t));
  VectorField q(grid);
  q[0].add_sine({1, 0}, m.b * std::exp(-t));
  return State(t, std::move(u), std::move(q));
}

double fitted_slope(const std::vector<ConvergenceLevel>& levels) {
  if (levels.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const auto& l : levels) {
    if (!(l.error > 0.0) || !(l.h > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    const double x = std::log(l.h);
    const double y = std::log(l.error);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(levels.size());
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double state_distance(const State& a, const State& b) {
  double sq = sobolev_norm_sq(a.u - b.u, 0.0);
  for (int i = 0; i < a.q.dim(); ++i) sq += sobolev_norm_sq(a.q[i] - b.q[i], 0.0);
  return std::sqrt(sq);
}

namespace {

Problem manufactured_problem(const ModelParams& p, const ManufacturedSolution& m, int n, double t_end, double dt) {
  Problem pb;
  pb.model = p;
  pb.model.forcing = manufactured_forcing(m, p.kinetics, p.dim);
  pb.initial = manufactured_state(Grid(p.dim, n), m, 0.0);
  pb.settings.t_end = t_end;
  pb.settings.dt_max = dt;
  pb.settings.sample_every = std::numeric_limits<int>::max();
  pb.irrotational = p.dim == 2;
  return pb;
}

State run_fixed(const Problem& pb, double dt, Scheme scheme) {
  if (scheme == Scheme::rk4) return rk4_reference(pb, dt).final_state;
  RunOptions opt;
  opt.fixed_dt = dt;
  const Trajectory tr = run_problem(pb, opt);
  if (tr.blew_up) throw std::runtime_error("manufactured run blew up: " + tr.stop_reason);
  return tr.final_state;
}

}  // namespace

ConvergenceReport manufactured_convergence(const ModelParams& p, const ManufacturedSolution& m, int n,
                                           double t_end, const std::vector<double>& dts, Scheme scheme) {
  p.validate();
  if (dts.size() < 3) throw std::invalid_argument("convergence study needs at least 3 levels");
  ConvergenceReport report;
  report.variable = "dt";
  report.target = scheme == Scheme::ifrk2 ? 2.0 : 4.0;
  const State exact = manufactured_state(Grid(p.dim, n), m, t_end);
  for (double dt : dts) {
    const Problem pb = manufactured_problem(p, m, n, t_end, dt);
    report.levels.push_back({dt, state_distance(run_fixed(pb, dt, scheme), exact)});
  }
  report.slope = fitted_slope(report.levels);
  return report;
}

ConvergenceReport manufactured_spatial(const ModelParams& p, const ManufacturedSolution& m,
                                       const std::vector<int>& ns, double t_end, double dt) {
  p.validate();
  if (ns.size() < 4) throw std::invalid_argument("spatial study needs at least 3 levels plus a reference");
  std::vector<int> sorted = ns;
  std::sort(sorted.begin(), sorted.end());
  const State finest = run_fixed(manufactured_problem(p, m, sorted.back(), t_end, dt), dt, Scheme::ifrk2);
  ConvergenceReport report;
  report.variable = "n";
  report.target = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
    const State coarse = run_fixed(manufactured_problem(p, m, sorted[i], t_end, dt), dt, Scheme::ifrk2);
    const Grid& g = coarse.grid();
    VectorField q(g);
    for (int c = 0; c < q.dim(); ++c) q[c] = resample(finest.q[c], g);
    const State reference(finest.t, resample(finest.u, g), std::move(q));
    report.levels.push_back({static_cast<double>(sorted[i]), state_distance(coarse, reference)});
  }
  report.slope = fitted_slope(report.levels);
  return report;
}

// --- Sobolev constant --------------------------------------------------------

double sobolev_ratio(const SpectralField& g, FourierTransform& transform) {
  if (g.grid().dim() != 1) throw std::invalid_argument("sobolev_ratio is defined for d=1");
  const double h = sobolev_norm(g, 0.25);
  if (h == 0.0) return 0.0;
  if (std::abs(mean(g)) > 1e-12 * h) throw std::invalid_argument("sobolev_ratio needs a mean-zero field");
  return lp_norm(g, 4.0, transform) / h;
}

double sobolev_ratio(const SpectralField& g) {
  FourierTransform t(g.grid());
  return sobolev_ratio(g, t);
}

namespace {

class SobolevSearch {
 public:
  SobolevSearch(std::size_t budget, std::uint64_t seed)
      : budget_(budget), grid_(1, kSobolevGrid), transform_(grid_), field_(grid_), rng_(seed) {}

  SobolevEstimate run() {
    std::vector<double> x(2 * kSobolevBand, 0.0);
    x[0] = 0.5;  // cos x
    ascend(x);
    std::normal_distribution<double> normal(0.0, 1.0);
    while (!exhausted()) {
      for (int k = 1; k <= kSobolevBand; ++k) {
        const double s = 1.0 / std::pow(static_cast<double>(k), 0.75);
        x[2 * k - 2] = s * normal(rng_);
        x[2 * k - 1] = s * normal(rng_);
      }
      ascend(x);
    }
    SobolevEstimate out;
    out.ratio = best_;
    out.field = build(best_x_);
    out.threshold = 4.0 / (9.0 * best_ * best_);
    out.evaluations = evaluations_;
    return out;
  }

 private:
  bool exhausted() const { return evaluations_ >= budget_; }

  SpectralField build(const std::vector<double>& x) const {
    SpectralField f(grid_);
    auto c = f.coeffs();
    for (int k = 1; k <= kSobolevBand; ++k) c[static_cast<std::size_t>(k)] = Complex(x[2 * k - 2], x[2 * k - 1]);
    return f;
  }

  double evaluate(const std::vector<double>& x) {
    bool zero = true;
    for (double v : x) zero = zero && v == 0.0;
    if (zero) return 0.0;
    ++evaluations_;
    field_ = build(x);
    const double r = sobolev_ratio(field_, transform_);
    if (r > best_) {
      best_ = r;
      best_x_ = x;
    }
    return r;
  }

  void ascend(std::vector<double>& x) {
    if (exhausted()) return;
    double f = evaluate(x);
    double scale = 0.0;
    for (double v : x) scale = std::max(scale, std::abs(v));
    double step = 0.5 * scale;
    while (step > 1e-6 * scale) {
      bool improved = false;
      for (std::size_t i = 0; i < x.size(); ++i) {
        for (double sign : {1.0, -1.0}) {
          if (exhausted()) return;
          x[i] += sign * step;
          const double trial = evaluate(x);
          if (trial > f) {
            f = trial;
            improved = true;
            break;
          }
          x[i] -= sign * step;
        }
      }
      if (!improved) step *= 0.5;
    }
  }

  std::size_t budget_;
  Grid grid_;
  FourierTransform transform_;
  SpectralField field_;
  std::mt19937_64 rng_;
  std::size_t evaluations_ = 0;
  double best_ = 0.0;
  std::vector<double> best_x_;
};

}  // namespace

SobolevEstimate estimate_sobolev_constant(std::size_t budget, std::uint64_t seed) {
  if (budget == 0) throw std::invalid_argument("sobolev budget must be positive");
  return SobolevSearch(budget, seed).run();
}

// --- scaling symmetry --------------------------------------------------------

ScalingReport scaling_symmetry_check(const Problem& base, double lambda) {
  if (!(lambda >= 1.0) || lambda != std::floor(lambda) || lambda > 64.0) {
    throw std::invalid_argument(fmt::format("scaling factor must be an integer in [1, 64], got {:g}", lambda));
  }
  const int L = static_cast<int>(lambda);
  const double alpha = base.model.alpha;
  const double time_factor = std::pow(lambda, alpha);
  const double amp = std::pow(lambda, alpha - 1.0);

  ScalingReport report;
  report.lambda = L;
  report.t_rescaled = base.settings.t_end;
  report.t_original = time_factor * base.settings.t_end;

  Problem original = base;
  original.settings.t_end = report.t_original;
  original.settings.sample_every = std::numeric_limits<int>::max();
  const Trajectory a = run_problem(original);

  Problem rescaled = base;
  rescaled.settings.sample_every = std::numeric_limits<int>::max();
  VectorField q0(Grid(base.initial.grid().dim(), base.initial.grid().n() * L));
  for (int i = 0; i < q0.dim(); ++i) q0[i] = amp * dilate(base.initial.q[i], L);
  rescaled.initial = State(base.initial.t, amp * dilate(base.initial.u, L), std::move(q0));
  const Trajectory b = run_problem(rescaled);

  report.blew_up = a.blew_up || b.blew_up;
  const SpectralField mapped = dilate(amp * a.final_state.u, L);
  const double diff = sobolev_norm(mapped - b.final_state.u, 0.0);
  const double ref = sobolev_norm(b.final_state.u, 0.0);
  report.discrepancy = ref > 0.0 ? diff / ref : diff;
  return report;
}

// --- criticality sweep -------------------------------------------------------

namespace {

SweepCell sweep_cell(const Problem& base, double alpha, double amplitude, const std::vector<Monitor>& monitors) {
  Problem pb = base;
  pb.model.alpha = alpha;
  pb.initial = State(base.initial.t, amplitude * base.initial.u, amplitude * base.initial.q);
  const Trajectory tr = run_problem(pb);
  SweepCell cell;
  cell.alpha = alpha;
  cell.amplitude = amplitude;
  cell.E0_initial = tr.rows.front().E0;
  cell.E0_final = tr.rows.back().E0;
  cell.E2_initial = tr.rows.front().E2;
  cell.E2_final = tr.rows.back().E2;
  double peak = cell.E2_initial;
  for (const auto& r : tr.rows) peak = std::max(peak, r.E2);
  cell.E2_growth = cell.E2_initial > 0.0 ? peak / cell.E2_initial : 1.0;
  cell.blew_up = tr.blew_up;
  cell.steps = tr.steps;
  cell.t_final = tr.rows.back().t;
  for (Monitor m : monitors) cell.monitors.push_back(monitor_monotone(tr, m));
  return cell;
}

}  // namespace

std::vector<SweepCell> criticality_sweep(const Problem& base, const std::vector<double>& alphas,
                                         const std::vector<double>& amplitudes,
                                         const std::vector<Monitor>& monitors, int workers) {
  if (workers < 1) throw std::invalid_argument("workers must be >= 1");
  for (double a : alphas) {
    ModelParams p = base.model;
    p.alpha = a;
    p.validate();
  }
  const std::size_t total = alphas.size() * amplitudes.size();
  std::vector<SweepCell> cells(total);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto work = [&] {
    for (std::size_t i = next++; i < total; i = next++) {
      try {
        cells[i] = sweep_cell(base, alphas[i / amplitudes.size()], amplitudes[i % amplitudes.size()], monitors);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };

  const std::size_t count = std::min<std::size_t>(static_cast<std::size_t>(workers), std::max<std::size_t>(total, 1));
  if (count <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < count; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return cells;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepCell>& cells) {
  out << "alpha,amplitude,E0_initial,E0_final,E2_initial,E2_final,E2_growth,blowup,steps,t_final";
  if (!cells.empty()) {
    for (const auto& m : cells.front().monitors) out << ',' << m.name << "_max_increment," << m.name << "_pass";
  }
  out << '\n';
  for (const auto& c : cells) {
    out << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{},{},{:.17g}", c.alpha,
                       c.amplitude, c.E0_initial, c.E0_final, c.E2_initial, c.E2_final, c.E2_growth,
                       c.blew_up ? 1 : 0, c.steps, c.t_final);
    for (const auto& m : c.monitors) out << fmt::format(",{:.17g},{}", m.max_increment, m.pass ? 1 : 0);
    out << '\n';
  }
}

}  // namespace fracchemo
