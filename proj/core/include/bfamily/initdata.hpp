#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "bfamily/dynamics.hpp"
#include "bfamily/grid.hpp"
#include "bfamily/model.hpp"

namespace bfam {

enum class ProfileKind {
  Gaussian,              ///< a exp(-((x-c)/w)^2)
  OddGaussian,           ///< a (x/w) exp(-(x/w)^2), slope a/w at 0
  OddCubicGaussian,      ///< a (x/w)^3 exp(-(x/w)^2), zero slope at 0
  EvenBumpZeroAtOrigin,  ///< a (x/w)^2 exp(-(x/w)^2)
  FromM0,                ///< (1 - d_xx)^{-1} of a nested profile
  CustomTable,           ///< two-column (x, value) file on the exact grid
};

std::string_view to_string(ProfileKind kind);
std::optional<ProfileKind> parse_profile_kind(std::string_view text);

struct InitSpec {
  ProfileKind kind = ProfileKind::Gaussian;
  double amplitude = 1.0;
  double width = 1.0;
  double center = 0.0;  ///< Gaussian only
  std::shared_ptr<const InitSpec> m0;  ///< FromM0 only
  std::string table_path;  ///< CustomTable only

  /// Throws std::invalid_argument naming the field.
  void validate() const;
};

/// Samples a profile on the grid. Analytic profiles (also as the m0 of
/// FromM0) must decay to 1e-12 at both ends of the domain; tables are used
/// as given, so periodic data can be supplied that way.
Field build_profile(const InitSpec& spec, const GridPtr& grid);

State build_initial(const InitSpec& spec_u, const InitSpec& spec_rho, const GridPtr& grid);

/// Reads a (x, value) table. Rows must match the grid nodes one to one;
/// no resampling is done.
Field read_table(const std::string& path, const GridPtr& grid);

/// u0'(0) = int_0^inf e^{-y} m0(y) dy, truncated at L. Trapezoid on the
/// nodes y >= 0 with Gregory corrections at y = 0; the far end needs none
/// because the integrand has decayed there.
double u0_prime_at_zero(const Field& m0);

/// 2 / ((k1 - 1) u0'(0)). Throws std::domain_error unless 1 < k1 <= 3 and
/// u0p0 > 0.
double blowup_bound(const ModelParams& p, double u0p0);

/// Whether the coefficient preconditions 1 < k1 <= 3, k2 >= 0 hold.
bool blowup_bound_applies(const ModelParams& p);

}  // namespace bfam
