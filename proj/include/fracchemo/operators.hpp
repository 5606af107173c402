#pragma once

#include <limits>

#include "fracchemo/fft.hpp"
#include "fracchemo/spectral_field.hpp"

namespace fracchemo {

/// Lambda^alpha = (-Laplacian)^(alpha/2): multiplies c(k) by |k|^alpha. Requires alpha in (0, 2].
SpectralField fractional_laplacian(const SpectralField& f, double alpha);

/// c(k) -> |k|^s c(k) for any s >= 0 (k = 0 is mapped to 0 unless s == 0).
SpectralField apply_lambda(const SpectralField& f, double s);

VectorField gradient(const SpectralField& f);
SpectralField partial(const SpectralField& f, int axis);
SpectralField divergence(const VectorField& v);
SpectralField laplacian(const SpectralField& f);

/// d v2/dx1 - d v1/dx2. Only defined on the 2-torus.
SpectralField curl2d(const VectorField& v);

/// Homogeneous: ||Lambda^s f||_{L2}. Full: sqrt(||f||_{L2}^2 + ||f||_{Hdot^s}^2).
/// For s = 0 the homogeneous norm is the L2 norm (Lambda^0 is the identity).
double sobolev_norm(const SpectralField& f, double s, bool homogeneous = true);
double sobolev_norm_sq(const SpectralField& f, double s);
/// Sum over components of the squared homogeneous norms.
double sobolev_norm_sq(const VectorField& v, double s);

/// (2 pi)^d sum_k conj(f(k)) g(k), i.e. the integral of f*g over the torus.
double l2_inner(const SpectralField& f, const SpectralField& g);
double l2_inner(const VectorField& f, const VectorField& g);

inline constexpr double kLinf = std::numeric_limits<double>::infinity();

/// Rectangle-rule L^p norm at the collocation nodes; p in {2, 4, inf}.
double lp_norm(const SpectralField& f, double p, FourierTransform& transform);
double lp_norm(const SpectralField& f, double p);

/// Zeroes every mode with some 3|k_i| >= n.
SpectralField dealias(const SpectralField& f);
void dealias_in_place(SpectralField& f);
VectorField dealias(const VectorField& v);

double mean(const SpectralField& f);

/// Re-expresses f on another grid of the same dimension: modes are copied
/// where both grids resolve them, dropped otherwise.
SpectralField resample(const SpectralField& f, const Grid& target);
VectorField resample(const VectorField& v, const Grid& target);

/// g(x) = f(lambda x) on the grid with n*lambda points: c_g(lambda k) = c_f(k).
SpectralField dilate(const SpectralField& f, int lambda);
VectorField dilate(const VectorField& v, int lambda);

/// 3/2-padded grid that integrates cubic products of n/3-band fields exactly.
Grid padded_grid(const Grid& g);

}  // namespace fracchemo
