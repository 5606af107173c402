#include "fracchemo/spectral_field.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace fracchemo {

namespace {

Wavevector wrap(const Grid& g, Wavevector k) {
  const int half = g.n() / 2;
  if (std::abs(k.k1) > half || std::abs(k.k2) > half) {
    throw std::out_of_range("wavevector beyond grid band");
  }
  if (g.dim() == 2 && k.k1 == half) k.k1 = -half;
  return k;
}

}  // namespace

SpectralField::SpectralField(Grid grid) : grid_(std::move(grid)), coeffs_(grid_.spectral_size()) {}

SpectralField::SpectralField(Grid grid, std::vector<Complex> coeffs)
    : grid_(std::move(grid)), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != grid_.spectral_size()) {
    throw std::invalid_argument("coefficient count does not match grid");
  }
  enforce_symmetry();
}

Complex SpectralField::coeff(Wavevector k) const {
  k = wrap(grid_, k);
  if (grid_.dim() == 1) {
    if (k.k2 != 0) throw std::out_of_range("1-D field has no k2 component");
    return k.k1 >= 0 ? coeffs_[grid_.index_of(k)] : std::conj(coeffs_[grid_.index_of({-k.k1, 0})]);
  }
  if (k.k2 >= 0) return coeffs_[grid_.index_of(k)];
  return std::conj(coeffs_[grid_.index_of(wrap(grid_, {-k.k1, -k.k2}))]);
}

void SpectralField::add_mode(Wavevector k, Complex value) {
  if (!grid_.resolves(k)) {
    throw std::out_of_range("mode (" + std::to_string(k.k1) + "," + std::to_string(k.k2) +
                            ") is not resolved below the Nyquist limit of n=" +
                            std::to_string(grid_.n()));
  }
  if (grid_.dim() == 1) {
    if (k.k1 > 0) {
      coeffs_[grid_.index_of(k)] += value;
    } else if (k.k1 < 0) {
      coeffs_[grid_.index_of({-k.k1, 0})] += std::conj(value);
    } else {
      coeffs_[0] += value + std::conj(value);
    }
    return;
  }
  if (k.k2 > 0) {
    coeffs_[grid_.index_of(k)] += value;
  } else if (k.k2 < 0) {
    coeffs_[grid_.index_of({-k.k1, -k.k2})] += std::conj(value);
  } else {
    coeffs_[grid_.index_of(k)] += value;
    coeffs_[grid_.index_of({-k.k1, 0})] += std::conj(value);
  }
}

void SpectralField::add_cosine(Wavevector k, double amplitude, double phase) {
  add_mode(k, 0.5 * amplitude * std::polar(1.0, phase));
}

void SpectralField::add_sine(Wavevector k, double amplitude, double phase) {
  add_mode(k, 0.5 * amplitude * std::polar(1.0, phase - 0.5 * std::numbers::pi));
}

void SpectralField::enforce_symmetry() {
  const int n = grid_.n();
  const int half = n / 2;
  if (grid_.dim() == 1) {
    coeffs_[0] = Complex(coeffs_[0].real(), 0.0);
    coeffs_[static_cast<std::size_t>(half)] = 0.0;
    return;
  }
  const std::size_t cols = grid_.spectral_cols();
  for (int i = 0; i < n; ++i) {
    coeffs_[static_cast<std::size_t>(i) * cols + static_cast<std::size_t>(half)] = 0.0;
  }
  for (std::size_t j = 0; j < cols; ++j) {
    coeffs_[static_cast<std::size_t>(half) * cols + j] = 0.0;
  }
  coeffs_[0] = Complex(coeffs_[0].real(), 0.0);
  for (int k1 = 1; k1 < half; ++k1) {
    Complex& pos = coeffs_[grid_.index_of({k1, 0})];
    Complex& neg = coeffs_[grid_.index_of({-k1, 0})];
    const Complex avg = 0.5 * (pos + std::conj(neg));
    pos = avg;
    neg = std::conj(avg);
  }
}

bool SpectralField::all_finite() const noexcept {
  for (const Complex& c : coeffs_) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
  }
  return true;
}

void SpectralField::require_same_grid(const SpectralField& other) const {
  if (!(grid_ == other.grid_)) throw std::invalid_argument("fields live on different grids");
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
  require_same_grid(other);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
  require_same_grid(other);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator*=(double s) {
  for (Complex& c : coeffs_) c *= s;
  return *this;
}

VectorField::VectorField(Grid grid) : grid_(grid) {
  for (int i = 0; i < grid_.dim(); ++i) components_.emplace_back(grid_);
}

VectorField::VectorField(std::vector<SpectralField> components) : components_(std::move(components)) {
  if (components_.empty()) throw std::invalid_argument("vector field needs at least one component");
  grid_ = components_.front().grid();
  if (static_cast<int>(components_.size()) != grid_.dim()) {
    throw std::invalid_argument("vector field component count must equal grid dimension");
  }
  for (const auto& c : components_) {
    if (!(c.grid() == grid_)) throw std::invalid_argument("vector components must share one grid");
  }
}

bool VectorField::all_finite() const noexcept {
  for (const auto& c : components_) {
    if (!c.all_finite()) return false;
  }
  return true;
}

VectorField& VectorField::operator+=(const VectorField& other) {
  if (other.dim() != dim()) throw std::invalid_argument("vector field dimension mismatch");
  for (std::size_t i = 0; i < components_.size(); ++i) components_[i] += other.components_[i];
  return *this;
}

VectorField& VectorField::operator-=(const VectorField& other) {
  if (other.dim() != dim()) throw std::invalid_argument("vector field dimension mismatch");
  for (std::size_t i = 0; i < components_.size(); ++i) components_[i] -= other.components_[i];
  return *this;
}

VectorField& VectorField::operator*=(double s) {
  for (auto& c : components_) c *= s;
  return *this;
}

}  // namespace fracchemo
