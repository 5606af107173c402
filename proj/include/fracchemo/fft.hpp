#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fracchemo/spectral_field.hpp"

namespace fracchemo {

/// Real-to-complex transform pair for one grid, backed by FFTW.
///
/// Owns its plans and aligned buffers; one instance per simulation. Plans are
/// built with FFTW_ESTIMATE so repeated runs take identical code paths.
/// Planning is serialized internally, execution is not shared.
class FourierTransform {
 public:
  explicit FourierTransform(Grid grid);
  ~FourierTransform();
  FourierTransform(const FourierTransform&) = delete;
  FourierTransform& operator=(const FourierTransform&) = delete;
  FourierTransform(FourierTransform&& other) noexcept;
  FourierTransform& operator=(FourierTransform&& other) noexcept;

  const Grid& grid() const noexcept { return grid_; }

  /// Samples at the nodes x_j = -pi + j*h, row-major with x1 slowest.
  SpectralField forward(std::span<const double> samples);
  void forward(std::span<const double> samples, SpectralField& out);

  std::vector<double> inverse(const SpectralField& field);
  void inverse(const SpectralField& field, std::span<double> out);

  /// Wall time spent inside FFTW execute calls since construction or reset.
  double seconds() const noexcept { return seconds_; }
  std::uint64_t calls() const noexcept { return calls_; }
  void reset_timing() noexcept {
    seconds_ = 0.0;
    calls_ = 0;
  }

 private:
  void release() noexcept;

  Grid grid_;
  double* real_ = nullptr;
  void* spec_ = nullptr;  // fftw_complex*
  void* plan_forward_ = nullptr;
  void* plan_inverse_ = nullptr;
  double seconds_ = 0.0;
  std::uint64_t calls_ = 0;
};

}  // namespace fracchemo
