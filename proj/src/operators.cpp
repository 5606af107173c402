#include "fracchemo/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace fracchemo {

namespace {

double torus_volume(const Grid& g) {
  const double side = 2.0 * std::numbers::pi;
  return g.dim() == 1 ? side : side * side;
}

void require_vector_grid(const VectorField& v) {
  if (v.dim() != v.grid().dim()) throw std::invalid_argument("vector field dimension mismatch");
}

}  // namespace

SpectralField apply_lambda(const SpectralField& f, double s) {
  if (s < 0.0) throw std::invalid_argument("Lambda exponent must be non-negative");
  SpectralField out = f;
  if (s == 0.0) return out;
  const auto& ksq = f.grid().modes().ksq;
  auto c = out.coeffs();
  for (std::size_t i = 0; i < c.size(); ++i) {
    c[i] *= ksq[i] == 0.0 ? 0.0 : std::pow(ksq[i], 0.5 * s);
  }
  return out;
}

SpectralField fractional_laplacian(const SpectralField& f, double alpha) {
  if (!(alpha > 0.0 && alpha <= 2.0)) {
    throw std::invalid_argument("fractional Laplacian order must lie in (0, 2], got " +
                                std::to_string(alpha));
  }
  return apply_lambda(f, alpha);
}

SpectralField partial(const SpectralField& f, int axis) {
  if (axis < 0 || axis >= f.grid().dim()) throw std::invalid_argument("axis out of range");
  const auto& modes = f.grid().modes();
  const auto& k = axis == 0 ? modes.k1 : modes.k2;
  SpectralField out = f;
  auto c = out.coeffs();
  for (std::size_t i = 0; i < c.size(); ++i) c[i] *= Complex(0.0, static_cast<double>(k[i]));
  return out;
}

VectorField gradient(const SpectralField& f) {
  std::vector<SpectralField> comps;
  for (int axis = 0; axis < f.grid().dim(); ++axis) comps.push_back(partial(f, axis));
  return VectorField(std::move(comps));
}

SpectralField divergence(const VectorField& v) {
  require_vector_grid(v);
  SpectralField out = partial(v[0], 0);
  for (int axis = 1; axis < v.dim(); ++axis) out += partial(v[axis], axis);
  return out;
}

SpectralField laplacian(const SpectralField& f) {
  SpectralField out = f;
  const auto& ksq = f.grid().modes().ksq;
  auto c = out.coeffs();
  for (std::size_t i = 0; i < c.size(); ++i) c[i] *= -ksq[i];
  return out;
}

SpectralField curl2d(const VectorField& v) {
  if (v.grid().dim() != 2) throw std::invalid_argument("curl2d requires a 2-D field");
  require_vector_grid(v);
  return partial(v[1], 0) - partial(v[0], 1);
}

double sobolev_norm_sq(const SpectralField& f, double s) {
  if (s < 0.0) throw std::invalid_argument("Sobolev order must be non-negative");
  const auto& modes = f.grid().modes();
  const auto c = f.coeffs();
  double sum = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double ksq = modes.ksq[i];
    double mult = 1.0;
    if (s != 0.0) mult = ksq == 0.0 ? 0.0 : std::pow(ksq, s);
    sum += modes.weight[i] * mult * std::norm(c[i]);
  }
  return torus_volume(f.grid()) * sum;
}

double sobolev_norm_sq(const VectorField& v, double s) {
  double sum = 0.0;
  for (const auto& c : v) sum += sobolev_norm_sq(c, s);
  return sum;
}

double sobolev_norm(const SpectralField& f, double s, bool homogeneous) {
  double sq = sobolev_norm_sq(f, s);
  if (!homogeneous) sq += sobolev_norm_sq(f, 0.0);
  return std::sqrt(sq);
}

double l2_inner(const SpectralField& f, const SpectralField& g) {
  if (!(f.grid() == g.grid())) throw std::invalid_argument("fields live on different grids");
  const auto& w = f.grid().modes().weight;
  const auto a = f.coeffs();
  const auto b = g.coeffs();
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += w[i] * (std::conj(a[i]) * b[i]).real();
  return torus_volume(f.grid()) * sum;
}

double l2_inner(const VectorField& f, const VectorField& g) {
  if (f.dim() != g.dim()) throw std::invalid_argument("vector field dimension mismatch");
  double sum = 0.0;
  for (int i = 0; i < f.dim(); ++i) sum += l2_inner(f[i], g[i]);
  return sum;
}

double lp_norm(const SpectralField& f, double p, FourierTransform& transform) {
  if (!(p == 2.0 || p == 4.0 || p == kLinf)) {
    throw std::invalid_argument("unsupported L^p exponent " + std::to_string(p) +
                                " (supported: 2, 4, inf)");
  }
  const std::vector<double> values = transform.inverse(f);
  if (p == kLinf) {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
  }
  const double cell = torus_volume(f.grid()) / static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += p == 2.0 ? v * v : (v * v) * (v * v);
  return std::pow(cell * sum, 1.0 / p);
}

double lp_norm(const SpectralField& f, double p) {
  FourierTransform transform(f.grid());
  return lp_norm(f, p, transform);
}

void dealias_in_place(SpectralField& f) {
  const int n = f.grid().n();
  const auto& modes = f.grid().modes();
  auto c = f.coeffs();
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (3 * std::abs(modes.k1[i]) >= n || 3 * std::abs(modes.k2[i]) >= n) c[i] = 0.0;
  }
}

SpectralField dealias(const SpectralField& f) {
  SpectralField out = f;
  dealias_in_place(out);
  return out;
}

VectorField dealias(const VectorField& v) {
  VectorField out = v;
  for (auto& c : out) dealias_in_place(c);
  return out;
}

double mean(const SpectralField& f) { return f.coeffs()[0].real(); }

SpectralField resample(const SpectralField& f, const Grid& target) {
  if (target.dim() != f.grid().dim()) throw std::invalid_argument("resample across dimensions");
  SpectralField out(target);
  const auto& modes = f.grid().modes();
  const auto c = f.coeffs();
  auto dst = out.coeffs();
  for (std::size_t i = 0; i < c.size(); ++i) {
    const Wavevector k{modes.k1[i], modes.k2[i]};
    if (!f.grid().resolves(k) || !target.resolves(k)) continue;
    dst[target.index_of(k)] = c[i];
  }
  out.enforce_symmetry();
  return out;
}

VectorField resample(const VectorField& v, const Grid& target) {
  std::vector<SpectralField> comps;
  for (const auto& c : v) comps.push_back(resample(c, target));
  return VectorField(std::move(comps));
}

SpectralField dilate(const SpectralField& f, int lambda) {
  if (lambda < 1) throw std::invalid_argument("dilation factor must be a positive integer");
  const Grid target(f.grid().dim(), f.grid().n() * lambda);
  SpectralField out(target);
  const auto& modes = f.grid().modes();
  const auto c = f.coeffs();
  auto dst = out.coeffs();
  for (std::size_t i = 0; i < c.size(); ++i) {
    const Wavevector k{modes.k1[i], modes.k2[i]};
    if (!f.grid().resolves(k)) continue;
    dst[target.index_of({k.k1 * lambda, k.k2 * lambda})] = c[i];
  }
  out.enforce_symmetry();
  return out;
}

VectorField dilate(const VectorField& v, int lambda) {
  std::vector<SpectralField> comps;
  for (const auto& c : v) comps.push_back(dilate(c, lambda));
  return VectorField(std::move(comps));
}

Grid padded_grid(const Grid& g) {
  int m = (3 * g.n() + 1) / 2;
  if (m % 2 != 0) ++m;
  return Grid(g.dim(), m);
}

}  // namespace fracchemo
