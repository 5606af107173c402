#pragma once

#include <cstddef>
#include <memory>
#include <vector>

namespace fracchemo {

/// Integer wavevector. In one dimension only `k1` is used and `k2` stays 0.
struct Wavevector {
  int k1 = 0;
  int k2 = 0;

  friend bool operator==(const Wavevector&, const Wavevector&) = default;
};

/// Precomputed per-mode data for the half-spectrum storage of a real field.
struct ModeTable {
  std::vector<int> k1;
  std::vector<int> k2;
  std::vector<double> ksq;     // |k|^2
  std::vector<double> weight;  // multiplicity of the stored mode in sums over all of Z^d
  std::vector<double> parity;  // (-1)^(k1+k2), shift between x_0 = -pi and FFT origin
};

/// Uniform grid on the d-torus [-pi, pi]^d with n points per dimension.
///
/// Spectral storage follows the FFTW real-to-complex layout: in 1-D the
/// modes k = 0..n/2, in 2-D an n x (n/2+1) array with the first index
/// carrying k1 (wrapped to [-n/2, n/2)) and the second k2 = 0..n/2.
class Grid {
 public:
  Grid() : Grid(1, 8) {}
  Grid(int dim, int n);

  int dim() const noexcept { return dim_; }
  int n() const noexcept { return n_; }
  double spacing() const noexcept;
  std::size_t size() const noexcept;           // n^d physical nodes
  std::size_t spectral_size() const noexcept;  // stored complex coefficients
  std::size_t spectral_cols() const noexcept { return static_cast<std::size_t>(n_ / 2 + 1); }

  /// Physical coordinate of node index j along one axis.
  double node(int j) const noexcept;

  const ModeTable& modes() const noexcept { return *modes_; }

  /// Storage index of a wavevector with k2 >= 0 (or k >= 0 in 1-D).
  std::size_t index_of(Wavevector k) const;

  /// True when every |k_i| < n/2.
  bool resolves(Wavevector k) const noexcept;

  friend bool operator==(const Grid& a, const Grid& b) noexcept {
    return a.dim_ == b.dim_ && a.n_ == b.n_;
  }

 private:
  int dim_;
  int n_;
  std::shared_ptr<const ModeTable> modes_;
};

}  // namespace fracchemo
