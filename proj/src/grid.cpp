#include "fracchemo/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace fracchemo {

namespace {

std::shared_ptr<const ModeTable> build_modes(int dim, int n) {
  auto table = std::make_shared<ModeTable>();
  const int cols = n / 2 + 1;
  const int rows = dim == 1 ? 1 : n;
  const std::size_t count = static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
  table->k1.resize(count);
  table->k2.resize(count);
  table->ksq.resize(count);
  table->weight.resize(count);
  table->parity.resize(count);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      const std::size_t idx = static_cast<std::size_t>(i) * cols + j;
      int k1 = 0;
      int k2 = 0;
      if (dim == 1) {
        k1 = j;
      } else {
        k1 = i < n / 2 ? i : i - n;
        k2 = j;
      }
      table->k1[idx] = k1;
      table->k2[idx] = k2;
      table->ksq[idx] = static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2;
      table->weight[idx] = (j == 0 || j == n / 2) ? 1.0 : 2.0;
      table->parity[idx] = ((k1 + k2) % 2 == 0) ? 1.0 : -1.0;
    }
  }
  return table;
}

}  // namespace

Grid::Grid(int dim, int n) : dim_(dim), n_(n) {
  if (dim != 1 && dim != 2) {
    throw std::invalid_argument("grid dimension must be 1 or 2, got " + std::to_string(dim));
  }
  if (n < 8 || n % 2 != 0) {
    throw std::invalid_argument("grid size must be even and >= 8, got " + std::to_string(n));
  }
  modes_ = build_modes(dim, n);
}

double Grid::spacing() const noexcept { return 2.0 * std::numbers::pi / n_; }

std::size_t Grid::size() const noexcept {
  const auto n = static_cast<std::size_t>(n_);
  return dim_ == 1 ? n : n * n;
}

std::size_t Grid::spectral_size() const noexcept {
  return (dim_ == 1 ? 1 : static_cast<std::size_t>(n_)) * spectral_cols();
}

double Grid::node(int j) const noexcept { return -std::numbers::pi + j * spacing(); }

bool Grid::resolves(Wavevector k) const noexcept {
  const int half = n_ / 2;
  if (std::abs(k.k1) >= half) return false;
  if (dim_ == 1) return k.k2 == 0;
  return std::abs(k.k2) < half;
}

std::size_t Grid::index_of(Wavevector k) const {
  const int half = n_ / 2;
  if (dim_ == 1) {
    if (k.k2 != 0 || k.k1 < 0 || k.k1 > half) {
      throw std::out_of_range("wavevector outside 1-D half spectrum");
    }
    return static_cast<std::size_t>(k.k1);
  }
  if (k.k2 < 0 || k.k2 > half || k.k1 < -half || k.k1 >= half) {
    throw std::out_of_range("wavevector outside 2-D half spectrum");
  }
  const int row = k.k1 >= 0 ? k.k1 : k.k1 + n_;
  return static_cast<std::size_t>(row) * spectral_cols() + static_cast<std::size_t>(k.k2);
}

}  // namespace fracchemo
