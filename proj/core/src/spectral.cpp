#include "bfamily/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <deque>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "bfamily/error.hpp"

namespace bfam {

namespace {

// FFTW planning and plan destruction are not thread-safe.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_complex(void* p) { return static_cast<fftw_complex*>(p); }

void require_finite(const Field& f, const char* op) {
  if (!f.all_finite()) throw NonFiniteInput(std::string(op) + ": input contains non-finite values");
}

}  // namespace

SpectralOps::SpectralOps(GridPtr grid) : grid_(std::move(grid)) {
  if (!grid_) throw std::invalid_argument("SpectralOps needs a grid");
  const int n = static_cast<int>(grid_->size());
  std::lock_guard lock(fftw_planner_mutex());
  real_ = fftw_alloc_real(grid_->size());
  spec_ = fftw_alloc_complex(grid_->spectrum_size());
  forward_plan_ = fftw_plan_dft_r2c_1d(n, real_, as_complex(spec_), FFTW_ESTIMATE);
  backward_plan_ = fftw_plan_dft_c2r_1d(n, as_complex(spec_), real_, FFTW_ESTIMATE);
  if (!forward_plan_ || !backward_plan_) throw std::runtime_error("FFTW plan creation failed");
}

SpectralOps::~SpectralOps() {
  std::lock_guard lock(fftw_planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(backward_plan_));
  fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  fftw_free(spec_);
  fftw_free(real_);
}

void SpectralOps::forward(std::span<const double> in) {
  std::copy(in.begin(), in.end(), real_);
  fftw_execute(static_cast<fftw_plan>(forward_plan_));
}

Field SpectralOps::backward() {
  fftw_execute(static_cast<fftw_plan>(backward_plan_));
  const double scale = 1.0 / static_cast<double>(grid_->size());
  std::vector<double> out(real_, real_ + grid_->size());
  for (double& v : out) v *= scale;
  return Field(grid_, std::move(out));
}

template <class Multiplier>
Field SpectralOps::apply(const Field& f, Multiplier mult) {
  forward(f.values());
  fftw_complex* c = as_complex(spec_);
  const std::size_t m = grid_->spectrum_size();
  for (std::size_t n = 0; n < m; ++n) {
    const std::complex<double> z = mult(n) * std::complex<double>(c[n][0], c[n][1]);
    c[n][0] = z.real();
    c[n][1] = z.imag();
  }
  return backward();
}

Field SpectralOps::derivative(const Field& f, int order) {
  if (order < 1 || order > 3) throw std::invalid_argument("derivative order must be 1, 2 or 3");
  require_finite(f, "derivative");
  const std::size_t nyquist = grid_->size() / 2;
  const auto& g = *grid_;
  return apply(f, [&](std::size_t n) -> std::complex<double> {
    if (order % 2 == 1 && n == nyquist) return 0.0;
    const double k = g.wavenumber(n);
    switch (order) {
      case 1: return {0.0, k};
      case 2: return {-k * k, 0.0};
      default: return {0.0, -k * k * k};
    }
  });
}

Field SpectralOps::helmholtz(const Field& f) {
  const auto& g = *grid_;
  return apply(f, [&](std::size_t n) -> std::complex<double> {
    const double k = g.wavenumber(n);
    return 1.0 + k * k;
  });
}

Field SpectralOps::helmholtz_inv(const Field& f) {
  const auto& g = *grid_;
  return apply(f, [&](std::size_t n) -> std::complex<double> {
    const double k = g.wavenumber(n);
    return 1.0 / (1.0 + k * k);
  });
}

Field SpectralOps::dx_helmholtz_inv(const Field& f) {
  const auto& g = *grid_;
  const std::size_t nyquist = g.size() / 2;
  return apply(f, [&](std::size_t n) -> std::complex<double> {
    if (n == nyquist) return 0.0;
    const double k = g.wavenumber(n);
    return {0.0, k / (1.0 + k * k)};
  });
}

Field SpectralOps::dealias(const Field& f) {
  const std::size_t cutoff = grid_->dealias_cutoff();
  return apply(f, [&](std::size_t n) -> std::complex<double> { return n <= cutoff ? 1.0 : 0.0; });
}

std::vector<std::complex<double>> SpectralOps::coefficients(const Field& f) {
  forward(f.values());
  const fftw_complex* c = as_complex(spec_);
  std::vector<std::complex<double>> out(grid_->spectrum_size());
  for (std::size_t n = 0; n < out.size(); ++n) out[n] = {c[n][0], c[n][1]};
  return out;
}

double SpectralOps::sobolev_norm_sq(const Field& f, double s) {
  if (!std::isfinite(s)) throw std::invalid_argument("Sobolev order must be finite");
  const auto coeffs = coefficients(f);
  const std::size_t nyquist = grid_->size() / 2;
  double sum = 0.0;
  for (std::size_t n = 0; n < coeffs.size(); ++n) {
    const double k = grid_->wavenumber(n);
    const double w = (n == 0 || n == nyquist) ? 1.0 : 2.0;
    sum += w * std::pow(1.0 + k * k, s) * std::norm(coeffs[n]);
  }
  const double nn = static_cast<double>(grid_->size());
  return 2.0 * grid_->half_length() / (nn * nn) * sum;
}

namespace {

// Sum_n Re(c[k][n] z_i^n) for every coefficient set k and point i. Modes run
// in the outer loop so the per-point recurrences are independent and
// vectorize; the powers are refreshed from polar() every 64 modes to keep the
// recurrence error at roundoff.
void evaluate_series(std::span<const std::vector<std::complex<double>>> sets, std::span<const double> theta,
                     std::span<std::vector<double>> out) {
  const std::size_t np = theta.size();
  const std::size_t nm = sets.front().size();
  std::vector<double> zr(np), zi(np), wr(np), wi(np);
  for (std::size_t i = 0; i < np; ++i) {
    wr[i] = std::cos(theta[i]);
    wi[i] = std::sin(theta[i]);
  }
  for (auto& o : out) o.assign(np, 0.0);
  for (std::size_t n = 0; n < nm; ++n) {
    if (n % 64 == 0) {
      for (std::size_t i = 0; i < np; ++i) {
        const double a = static_cast<double>(n) * theta[i];
        zr[i] = std::cos(a);
        zi[i] = std::sin(a);
      }
    }
    for (std::size_t k = 0; k < sets.size(); ++k) {
      const double cr = sets[k][n].real(), ci = sets[k][n].imag();
      double* acc = out[k].data();
      for (std::size_t i = 0; i < np; ++i) acc[i] += cr * zr[i] - ci * zi[i];
    }
    for (std::size_t i = 0; i < np; ++i) {
      const double r = zr[i] * wr[i] - zi[i] * wi[i];
      zi[i] = zr[i] * wi[i] + zi[i] * wr[i];
      zr[i] = r;
    }
  }
}

}  // namespace

std::vector<std::complex<double>> SpectralOps::series_coefficients(const Field& f) {
  auto c = coefficients(f);
  const std::size_t nyquist = grid_->size() / 2;
  const double inv_n = 1.0 / static_cast<double>(grid_->size());
  for (std::size_t n = 0; n < c.size(); ++n) c[n] *= ((n == 0 || n == nyquist) ? 1.0 : 2.0) * inv_n;
  return c;
}

std::vector<double> SpectralOps::angles(std::span<const double> points) const {
  const double L = grid_->half_length();
  std::vector<double> theta(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) theta[i] = std::numbers::pi * (grid_->wrap(points[i]) + L) / L;
  return theta;
}

std::vector<double> SpectralOps::interpolate(const Field& f, std::span<const double> points) {
  const std::vector<std::vector<std::complex<double>>> sets{series_coefficients(f)};
  std::vector<std::vector<double>> out(1);
  evaluate_series(sets, angles(points), out);
  return std::move(out[0]);
}

std::pair<std::vector<double>, std::vector<double>> SpectralOps::interpolate_with_derivative(
    const Field& f, std::span<const double> points) {
  std::vector<std::vector<std::complex<double>>> sets{series_coefficients(f)};
  auto d = sets[0];
  const std::size_t nyquist = grid_->size() / 2;
  for (std::size_t n = 0; n < d.size(); ++n) {
    d[n] = n == nyquist ? 0.0 : std::complex<double>(0.0, grid_->wavenumber(n)) * d[n];
  }
  sets.push_back(std::move(d));
  std::vector<std::vector<double>> out(2);
  evaluate_series(sets, angles(points), out);
  return {std::move(out[0]), std::move(out[1])};
}

double SpectralOps::tail_ratio(const Field& f, bool dealiased) {
  const auto coeffs = coefficients(f);
  const std::size_t hi = dealiased ? grid_->dealias_cutoff() : grid_->size() / 2;
  const std::size_t lo = (4 * hi) / 5;
  double peak = 0.0, tail = 0.0;
  for (std::size_t n = 0; n < coeffs.size(); ++n) {
    const double a = std::abs(coeffs[n]);
    peak = std::max(peak, a);
    if (n >= lo && n <= hi) tail = std::max(tail, a);
  }
  return peak > 0.0 ? tail / peak : 0.0;
}

SpectralOps& spectral_ops(const GridPtr& grid) {
  thread_local std::deque<std::unique_ptr<SpectralOps>> cache;
  for (auto& ops : cache) {
    if (ops->grid() == *grid) return *ops;
  }
  if (cache.size() >= 8) cache.pop_front();
  cache.push_back(std::make_unique<SpectralOps>(grid));
  return *cache.back();
}

Field derivative(const Field& f, int order) { return spectral_ops(f.grid_ptr()).derivative(f, order); }
Field helmholtz(const Field& f) { return spectral_ops(f.grid_ptr()).helmholtz(f); }
Field helmholtz_inv(const Field& f) { return spectral_ops(f.grid_ptr()).helmholtz_inv(f); }
Field dx_helmholtz_inv(const Field& f) { return spectral_ops(f.grid_ptr()).dx_helmholtz_inv(f); }
Field dealias(const Field& f) { return spectral_ops(f.grid_ptr()).dealias(f); }
double sobolev_norm_sq(const Field& f, double s) { return spectral_ops(f.grid_ptr()).sobolev_norm_sq(f, s); }
std::vector<double> interpolate(const Field& f, std::span<const double> points) {
  return spectral_ops(f.grid_ptr()).interpolate(f, points);
}

Field green_convolve(const Field& f, Kernel kernel) {
  const Grid& g = f.grid();
  const std::size_t n = g.size();
  const double h = g.dx();
  auto at = [&](std::ptrdiff_t j) { return f[static_cast<std::size_t>((j % static_cast<std::ptrdiff_t>(n) + n) % n)]; };

  Field out(f.grid_ptr());
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double r = g.node(i) - g.node(j);
      const double e = 0.5 * std::exp(-std::abs(r));
      if (kernel == Kernel::P) {
        sum += e * f[j];
      } else if (r != 0.0) {
        sum += (r > 0.0 ? -e : e) * f[j];
      }
    }
    sum *= h;

    const auto ii = static_cast<std::ptrdiff_t>(i);
    const double f0 = f[i];
    const double d1 = (-at(ii + 2) + 8.0 * at(ii + 1) - 8.0 * at(ii - 1) + at(ii - 2)) / (12.0 * h);
    const double d2 =
        (-at(ii + 2) + 16.0 * at(ii + 1) - 30.0 * f0 + 16.0 * at(ii - 1) - at(ii - 2)) / (12.0 * h * h);
    const double d3 = (at(ii + 2) - 2.0 * at(ii + 1) + 2.0 * at(ii - 1) - at(ii - 2)) / (2.0 * h * h * h);
    const double h2 = h * h / 12.0;
    const double h4 = h * h * h * h / 720.0;
    if (kernel == Kernel::P) {
      sum += -h2 * f0 + h4 * (f0 + 3.0 * d2);
    } else {
      sum += h2 * d1 - h4 * (3.0 * d1 + d3);
    }
    out[i] = sum;
  }
  return out;
}

}  // namespace bfam
