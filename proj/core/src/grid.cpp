#include "bfamily/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>

namespace bfam {

Grid::Grid(double half_length, std::size_t n) : half_length_(half_length), n_(n) {
  if (!(half_length > 0.0) || !std::isfinite(half_length)) {
    throw std::invalid_argument("grid half-length L must be positive and finite");
  }
  if (n < 16 || n % 2 != 0) {
    throw std::invalid_argument("grid size N must be even and at least 16, got " + std::to_string(n));
  }
  dx_ = 2.0 * half_length / static_cast<double>(n);
  nodes_.resize(n);
  // (j - N/2) * dx rather than -L + j * dx: the integer offset flips sign
  // exactly, so node N - j is bitwise the negative of node j.
  const auto half = static_cast<std::ptrdiff_t>(n / 2);
  for (std::size_t j = 0; j < n; ++j) nodes_[j] = static_cast<double>(static_cast<std::ptrdiff_t>(j) - half) * dx_;
  nodes_[0] = -half_length;
  kappa_.resize(n / 2 + 1);
  for (std::size_t m = 0; m < kappa_.size(); ++m) {
    kappa_[m] = static_cast<double>(m) * std::numbers::pi / half_length;
  }
}

double Grid::wrap(double x) const noexcept {
  const double period = 2.0 * half_length_;
  double y = std::fmod(x + half_length_, period);
  if (y < 0.0) y += period;
  if (y >= period) y -= period;
  return y - half_length_;
}

GridPtr make_grid(double half_length, std::size_t n) {
  return std::make_shared<const Grid>(half_length, n);
}

Field::Field(GridPtr grid) : grid_(std::move(grid)) {
  if (!grid_) throw std::invalid_argument("field needs a grid");
  values_.assign(grid_->size(), 0.0);
}

Field::Field(GridPtr grid, std::vector<double> values) : grid_(std::move(grid)), values_(std::move(values)) {
  if (!grid_) throw std::invalid_argument("field needs a grid");
  if (values_.size() != grid_->size()) {
    throw std::invalid_argument("field length " + std::to_string(values_.size()) +
                                " does not match grid size " + std::to_string(grid_->size()));
  }
}

Field Field::from_function(GridPtr grid, const std::function<double(double)>& f) {
  Field out(std::move(grid));
  for (std::size_t j = 0; j < out.size(); ++j) out.values_[j] = f(out.grid_->node(j));
  return out;
}

bool Field::all_finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

double Field::sup_norm() const noexcept {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double Field::min() const noexcept { return *std::min_element(values_.begin(), values_.end()); }
double Field::max() const noexcept { return *std::max_element(values_.begin(), values_.end()); }

double Field::integral() const noexcept {
  double s = 0.0;
  for (double v : values_) s += v;
  return s * grid_->dx();
}

void Field::check_compatible(const Field& other) const {
  if (grid_ != other.grid_ && !(grid_ && other.grid_ && *grid_ == *other.grid_)) {
    throw std::invalid_argument("fields live on different grids");
  }
}

Field& Field::axpy(double a, const Field& x) {
  check_compatible(x);
  for (std::size_t j = 0; j < values_.size(); ++j) values_[j] += a * x.values_[j];
  return *this;
}

Field& Field::operator+=(const Field& other) {
  check_compatible(other);
  for (std::size_t j = 0; j < values_.size(); ++j) values_[j] += other.values_[j];
  return *this;
}

Field& Field::operator-=(const Field& other) {
  check_compatible(other);
  for (std::size_t j = 0; j < values_.size(); ++j) values_[j] -= other.values_[j];
  return *this;
}

Field& Field::operator*=(double s) noexcept {
  for (double& v : values_) v *= s;
  return *this;
}

Field operator*(const Field& a, const Field& b) {
  a.check_compatible(b);
  Field out(a.grid_);
  for (std::size_t j = 0; j < a.values_.size(); ++j) out.values_[j] = a.values_[j] * b.values_[j];
  return out;
}

double integrate_product(std::span<const double> a, std::span<const double> b, double dx) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += a[j] * b[j];
  return s * dx;
}

}  // namespace bfam
