#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "bfamily/dynamics.hpp"
#include "bfamily/stepper.hpp"

namespace bfam {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// One row of diagnostics.csv. Columns that a run does not compute (for
/// example transport_res with characteristics disabled) are NaN.
struct DiagRecord {
  std::size_t step = 0;
  double t = 0.0;
  double dt = 0.0;
  double l2_u = 0.0;
  double hs_u = 0.0;
  double hsm1_rho = 0.0;
  double min_ux = 0.0;
  double max_ux = 0.0;
  double sup_rho = 0.0;
  double sup_rhox = 0.0;
  double E1 = 0.0;
  double E2 = 0.0;
  double int_rho = 0.0;
  double R_m2 = kNaN;
  double R_rho2 = kNaN;
  double R_rhox2 = kNaN;
  double R_rhoxx2 = kNaN;
  double transport_res = kNaN;
  double symmetry_res = kNaN;
};

/// Pointwise values at x = 0, used by the origin and Riccati checks.
struct OriginSample {
  double t = 0.0;
  double u = 0.0;
  double ux = 0.0;
  double uxx = 0.0;
  double rho = 0.0;
  /// p * (k1/2 u^2 + (3-k1)/2 u_x^2 + k2/2 rho^2) at the origin.
  double pconv = 0.0;
};

/// Left and right sides of the four energy identities at one time.
/// Index 0..3: int m^2, int rho^2, int rho_x^2, int rho_xx^2.
struct IdentitySample {
  double t = 0.0;
  double lhs[4] = {0, 0, 0, 0};
  double rhs[4] = {0, 0, 0, 0};
};

struct Snapshot {
  std::size_t index = 0;
  State state;
};

struct Trajectory {
  std::vector<DiagRecord> records;
  std::vector<OriginSample> origin;
  std::vector<IdentitySample> identities;
  std::vector<Snapshot> snapshots;
  RunReport report;
};

}  // namespace bfam
