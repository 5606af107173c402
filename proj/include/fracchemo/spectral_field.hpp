#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "fracchemo/grid.hpp"

namespace fracchemo {

using Complex = std::complex<double>;

/// Real band-limited scalar field on the torus, stored as Fourier coefficients
/// with the convention u(x) = sum_k c(k) exp(i k.x), so c(0) is the mean.
///
/// Only the half spectrum is stored; c(-k) = conj(c(k)) is implied. Nyquist
/// modes (|k_i| = n/2) are kept at zero.
class SpectralField {
 public:
  SpectralField() = default;
  explicit SpectralField(Grid grid);
  SpectralField(Grid grid, std::vector<Complex> coeffs);

  const Grid& grid() const noexcept { return grid_; }
  std::span<const Complex> coeffs() const noexcept { return coeffs_; }
  std::span<Complex> coeffs() noexcept { return coeffs_; }

  /// Coefficient of an arbitrary wavevector with |k_i| <= n/2.
  Complex coeff(Wavevector k) const;

  /// Adds `value` at k and conj(value) at -k, keeping the field real.
  void add_mode(Wavevector k, Complex value);

  /// Adds amplitude * cos(k.x + phase).
  void add_cosine(Wavevector k, double amplitude, double phase = 0.0);
  /// Adds amplitude * sin(k.x + phase).
  void add_sine(Wavevector k, double amplitude, double phase = 0.0);

  /// Projects stored data onto real fields: zero Nyquist modes, real mean,
  /// conjugate pairs on the self-paired k2 = 0 column in 2-D.
  void enforce_symmetry();

  bool all_finite() const noexcept;

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(double s);

  friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
  friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
  friend SpectralField operator*(SpectralField a, double s) { return a *= s; }
  friend SpectralField operator*(double s, SpectralField a) { return a *= s; }

 private:
  void require_same_grid(const SpectralField& other) const;

  Grid grid_;
  std::vector<Complex> coeffs_;
};

/// d spectral components on a shared grid.
class VectorField {
 public:
  VectorField() = default;
  explicit VectorField(Grid grid);
  explicit VectorField(std::vector<SpectralField> components);

  const Grid& grid() const noexcept { return grid_; }
  int dim() const noexcept { return static_cast<int>(components_.size()); }

  SpectralField& operator[](int i) { return components_.at(static_cast<std::size_t>(i)); }
  const SpectralField& operator[](int i) const { return components_.at(static_cast<std::size_t>(i)); }

  auto begin() noexcept { return components_.begin(); }
  auto end() noexcept { return components_.end(); }
  auto begin() const noexcept { return components_.begin(); }
  auto end() const noexcept { return components_.end(); }

  bool all_finite() const noexcept;

  VectorField& operator+=(const VectorField& other);
  VectorField& operator-=(const VectorField& other);
  VectorField& operator*=(double s);

  friend VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
  friend VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
  friend VectorField operator*(VectorField a, double s) { return a *= s; }
  friend VectorField operator*(double s, VectorField a) { return a *= s; }

 private:
  Grid grid_;
  std::vector<SpectralField> components_;
};

}  // namespace fracchemo
