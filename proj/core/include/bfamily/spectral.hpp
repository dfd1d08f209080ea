#pragma once

#include <complex>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "bfamily/grid.hpp"

namespace bfam {

/// Fourier-multiplier operators on a periodic grid.
///
/// Owns FFTW plans and scratch buffers, so one instance must not be used from
/// two threads at once. The free functions below go through a thread-local
/// cache of instances keyed by grid geometry.
///
/// Odd-order multipliers zero the Nyquist coefficient so that real input
/// gives real, parity-respecting output.
class SpectralOps {
 public:
  explicit SpectralOps(GridPtr grid);
  ~SpectralOps();
  SpectralOps(const SpectralOps&) = delete;
  SpectralOps& operator=(const SpectralOps&) = delete;

  const GridPtr& grid_ptr() const noexcept { return grid_; }
  const Grid& grid() const noexcept { return *grid_; }

  /// (i kappa)^order, order in {1, 2, 3}. Throws NonFiniteInput on NaN/Inf.
  Field derivative(const Field& f, int order);
  /// 1 - d_xx, multiplier 1 + kappa^2.
  Field helmholtz(const Field& f);
  /// (1 - d_xx)^{-1}, the periodic counterpart of convolution with exp(-|x|)/2.
  Field helmholtz_inv(const Field& f);
  /// d_x (1 - d_xx)^{-1}, multiplier i kappa / (1 + kappa^2).
  Field dx_helmholtz_inv(const Field& f);
  /// 2/3-rule truncation: modes above N/3 are zeroed.
  Field dealias(const Field& f);

  /// sum_n (1 + kappa_n^2)^s |f_n|^2, normalized so that s = 0 equals the
  /// trapezoid integral of f^2.
  double sobolev_norm_sq(const Field& f, double s);

  /// Evaluates the trigonometric interpolant at arbitrary points (wrapped
  /// into [-L, L)).
  std::vector<double> interpolate(const Field& f, std::span<const double> points);
  /// f and f_x at the points in one pass.
  std::pair<std::vector<double>, std::vector<double>> interpolate_with_derivative(const Field& f,
                                                                                  std::span<const double> points);

  /// Unnormalized half-spectrum DFT coefficients F_n, n = 0..N/2, with the
  /// phase referenced to x = -L.
  std::vector<std::complex<double>> coefficients(const Field& f);

  /// Largest coefficient magnitude in the top fifth of the active band,
  /// relative to the largest overall. The active band ends at N/3 when
  /// dealiased and at N/2 otherwise. Zero for a zero field.
  double tail_ratio(const Field& f, bool dealiased);

 private:
  std::vector<std::complex<double>> series_coefficients(const Field& f);
  std::vector<double> angles(std::span<const double> points) const;
  void forward(std::span<const double> in);
  Field backward();
  template <class Multiplier>
  Field apply(const Field& f, Multiplier mult);

  GridPtr grid_;
  double* real_ = nullptr;
  void* spec_ = nullptr;  // fftw_complex[N/2 + 1]
  void* forward_plan_ = nullptr;
  void* backward_plan_ = nullptr;
};

/// Thread-local operator instance for the grid's geometry.
SpectralOps& spectral_ops(const GridPtr& grid);

Field derivative(const Field& f, int order);
Field helmholtz(const Field& f);
Field helmholtz_inv(const Field& f);
Field dx_helmholtz_inv(const Field& f);
Field dealias(const Field& f);
double sobolev_norm_sq(const Field& f, double s);
std::vector<double> interpolate(const Field& f, std::span<const double> points);

enum class Kernel {
  P,   ///< exp(-|x|)/2
  DP,  ///< its a.e. derivative -sgn(x) exp(-|x|)/2
};

/// Direct O(N^2) line convolution of f with the chosen kernel over the
/// truncated domain. Used as the FFT-free reference for helmholtz_inv and
/// dx_helmholtz_inv.
///
/// Trapezoid rule with Euler-Maclaurin corrections for the kernel's kink at
/// y = x (through h^4, derivatives of f by finite differences). f must be
/// negligible near x = +-L; that is the caller's responsibility.
Field green_convolve(const Field& f, Kernel kernel);

}  // namespace bfam
