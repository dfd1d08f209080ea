#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace bfam {

/// Uniform periodic grid on [-L, L) with N nodes x_j = -L + j*dx.
///
/// N is even, so x = 0 is node N/2 and the grid is mirror-symmetric:
/// node j reflects to node (N - j) mod N. Wavenumbers of the half spectrum
/// are kappa_n = n*pi/L for n = 0..N/2.
class Grid {
 public:
  Grid(double half_length, std::size_t n);

  double half_length() const noexcept { return half_length_; }
  std::size_t size() const noexcept { return n_; }
  double dx() const noexcept { return dx_; }

  double node(std::size_t j) const noexcept { return nodes_[j]; }
  std::span<const double> nodes() const noexcept { return nodes_; }

  std::size_t spectrum_size() const noexcept { return n_ / 2 + 1; }
  double wavenumber(std::size_t mode) const noexcept { return kappa_[mode]; }
  std::span<const double> wavenumbers() const noexcept { return kappa_; }

  std::size_t origin_index() const noexcept { return n_ / 2; }
  std::size_t mirror_index(std::size_t j) const noexcept { return (n_ - j) % n_; }

  /// Highest mode kept by the 2/3 rule.
  std::size_t dealias_cutoff() const noexcept { return n_ / 3; }

  /// Maps x periodically into [-L, L).
  double wrap(double x) const noexcept;

  friend bool operator==(const Grid& a, const Grid& b) noexcept {
    return a.n_ == b.n_ && a.half_length_ == b.half_length_;
  }

 private:
  double half_length_;
  std::size_t n_;
  double dx_;
  std::vector<double> nodes_;
  std::vector<double> kappa_;
};

using GridPtr = std::shared_ptr<const Grid>;

GridPtr make_grid(double half_length, std::size_t n);

/// Real samples bound to a grid.
class Field {
 public:
  Field() = default;
  explicit Field(GridPtr grid);
  Field(GridPtr grid, std::vector<double> values);

  static Field from_function(GridPtr grid, const std::function<double(double)>& f);

  const Grid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }

  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }
  double operator[](std::size_t j) const noexcept { return values_[j]; }
  double& operator[](std::size_t j) noexcept { return values_[j]; }

  bool all_finite() const noexcept;
  double sup_norm() const noexcept;
  double min() const noexcept;
  double max() const noexcept;
  /// Trapezoid rule on the periodic grid: dx * sum f_j.
  double integral() const noexcept;

  /// this += a * x
  Field& axpy(double a, const Field& x);

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(double s) noexcept;

  friend Field operator+(Field a, const Field& b) { return a += b; }
  friend Field operator-(Field a, const Field& b) { return a -= b; }
  friend Field operator*(double s, Field a) { return a *= s; }
  /// Pointwise product.
  friend Field operator*(const Field& a, const Field& b);

 private:
  void check_compatible(const Field& other) const;

  GridPtr grid_;
  std::vector<double> values_;
};

/// Trapezoid integral of the pointwise product of fields.
double integrate_product(std::span<const double> a, std::span<const double> b, double dx);

}  // namespace bfam
