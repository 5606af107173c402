#include "fracchemo/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <chrono>
#include <cstring>
#include <mutex>
#include <stdexcept>
#include <string>

namespace fracchemo {

namespace {

// FFTW's planner is not reentrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

class Stopwatch {
 public:
  explicit Stopwatch(double& sink) : sink_(sink), start_(std::chrono::steady_clock::now()) {}
  ~Stopwatch() {
    sink_ += std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  double& sink_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace

FourierTransform::FourierTransform(Grid grid) : grid_(std::move(grid)) {
  real_ = fftw_alloc_real(grid_.size());
  auto* spec = fftw_alloc_complex(grid_.spectral_size());
  spec_ = spec;
  if (real_ == nullptr || spec == nullptr) {
    release();
    throw std::bad_alloc();
  }
  const int n = grid_.n();
  std::lock_guard lock(planner_mutex());
  if (grid_.dim() == 1) {
    plan_forward_ = fftw_plan_dft_r2c_1d(n, real_, spec, FFTW_ESTIMATE);
    plan_inverse_ = fftw_plan_dft_c2r_1d(n, spec, real_, FFTW_ESTIMATE);
  } else {
    plan_forward_ = fftw_plan_dft_r2c_2d(n, n, real_, spec, FFTW_ESTIMATE);
    plan_inverse_ = fftw_plan_dft_c2r_2d(n, n, spec, real_, FFTW_ESTIMATE);
  }
  if (plan_forward_ == nullptr || plan_inverse_ == nullptr) {
    release();
    throw std::runtime_error("FFTW planning failed for n=" + std::to_string(n));
  }
}

FourierTransform::~FourierTransform() { release(); }

FourierTransform::FourierTransform(FourierTransform&& other) noexcept
    : grid_(other.grid_),
      real_(std::exchange(other.real_, nullptr)),
      spec_(std::exchange(other.spec_, nullptr)),
      plan_forward_(std::exchange(other.plan_forward_, nullptr)),
      plan_inverse_(std::exchange(other.plan_inverse_, nullptr)),
      seconds_(other.seconds_),
      calls_(other.calls_) {}

FourierTransform& FourierTransform::operator=(FourierTransform&& other) noexcept {
  if (this != &other) {
    release();
    grid_ = other.grid_;
    real_ = std::exchange(other.real_, nullptr);
    spec_ = std::exchange(other.spec_, nullptr);
    plan_forward_ = std::exchange(other.plan_forward_, nullptr);
    plan_inverse_ = std::exchange(other.plan_inverse_, nullptr);
    seconds_ = other.seconds_;
    calls_ = other.calls_;
  }
  return *this;
}

void FourierTransform::release() noexcept {
  {
    std::lock_guard lock(planner_mutex());
    if (plan_forward_ != nullptr) fftw_destroy_plan(static_cast<fftw_plan>(plan_forward_));
    if (plan_inverse_ != nullptr) fftw_destroy_plan(static_cast<fftw_plan>(plan_inverse_));
  }
  plan_forward_ = nullptr;
  plan_inverse_ = nullptr;
  if (real_ != nullptr) fftw_free(real_);
  if (spec_ != nullptr) fftw_free(spec_);
  real_ = nullptr;
  spec_ = nullptr;
}

SpectralField FourierTransform::forward(std::span<const double> samples) {
  SpectralField out(grid_);
  forward(samples, out);
  return out;
}

void FourierTransform::forward(std::span<const double> samples, SpectralField& out) {
  if (samples.size() != grid_.size()) {
    throw std::invalid_argument("sample count " + std::to_string(samples.size()) +
                                " does not match grid size " + std::to_string(grid_.size()));
  }
  if (!(out.grid() == grid_)) out = SpectralField(grid_);
  std::copy(samples.begin(), samples.end(), real_);
  {
    Stopwatch sw(seconds_);
    fftw_execute(static_cast<fftw_plan>(plan_forward_));
  }
  ++calls_;
  const auto* spec = static_cast<const fftw_complex*>(spec_);
  const double scale = 1.0 / static_cast<double>(grid_.size());
  const auto& parity = grid_.modes().parity;
  auto coeffs = out.coeffs();
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    const double s = scale * parity[i];
    coeffs[i] = Complex(spec[i][0] * s, spec[i][1] * s);
  }
  out.enforce_symmetry();
}

std::vector<double> FourierTransform::inverse(const SpectralField& field) {
  std::vector<double> out(grid_.size());
  inverse(field, out);
  return out;
}

void FourierTransform::inverse(const SpectralField& field, std::span<double> out) {
  if (!(field.grid() == grid_)) throw std::invalid_argument("field grid does not match transform");
  if (out.size() != grid_.size()) throw std::invalid_argument("output span has wrong size");
  auto* spec = static_cast<fftw_complex*>(spec_);
  const auto& parity = grid_.modes().parity;
  const auto coeffs = field.coeffs();
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    spec[i][0] = coeffs[i].real() * parity[i];
    spec[i][1] = coeffs[i].imag() * parity[i];
  }
  {
    Stopwatch sw(seconds_);
    fftw_execute(static_cast<fftw_plan>(plan_inverse_));
  }
  ++calls_;
  std::copy(real_, real_ + grid_.size(), out.begin());
}

}  // namespace fracchemo
