#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bfamily/characteristics.hpp"
#include "bfamily/dynamics.hpp"
#include "bfamily/model.hpp"
#include "bfamily/stepper.hpp"
#include "bfamily/trajectory.hpp"

namespace bfam {

enum class SymmetryMode { UOddRhoEven, UOddRhoOdd };
std::string_view to_string(SymmetryMode mode);
std::optional<SymmetryMode> parse_symmetry_mode(std::string_view text);

/// Norms, extrema and energies of a state. Residual, transport and symmetry
/// columns are left NaN.
DiagRecord measure(const State& s, double hs_order = 2.0);

/// Both sides of
///   d/dt int m^2      = (2k1-1) int m^2 u_x - k2 int u_x rho^2 + k2 int u_xxx rho^2
///   d/dt int rho^2    = k3 int u_x rho^2
///   d/dt int rho_x^2  = 3k3 int u_x rho_x^2 - k3 int u_xxx rho^2
///   d/dt int rho_xx^2 = 5k3 int u_x rho_xx^2 + k3 int u_xxx (2 rho rho_xx - 3 rho_x^2)
/// at the state's time (trapezoid integrals, spectral derivatives).
IdentitySample identity_sample(const State& s, const ModelParams& p);

/// Derivative at t[k] of the quadratic through three (t, f) points. Spacing
/// need not be uniform.
double three_point_derivative(const std::array<double, 3>& t, const std::array<double, 3>& f, int k);

/// |d/dt lhs - rhs| at the middle sample, the time derivative by the
/// three-point difference.
std::array<double, 4> identity_residuals(const std::array<IdentitySample, 3>& window);
std::array<double, 4> identity_residuals(const State& prev, const State& mid, const State& next,
                                         const ModelParams& p);

/// Fills R_* of each record from the matching samples (same length, same
/// times). Interior records use the centered window, the first and last use
/// one-sided three-point differences. Fewer than three samples leaves NaN.
void fill_identity_residuals(std::vector<DiagRecord>& records, const std::vector<IdentitySample>& samples);

/// max over nodes x != -L of |u(x) + u(-x)| + |rho(x) -+ rho(-x)|.
double symmetry_residual(const State& s, SymmetryMode mode);

/// Values at x = 0 (grid node N/2).
OriginSample origin_checks(const State& s, const ModelParams& p);

struct CheckResult {
  bool applicable = true;
  bool passed = true;
  std::optional<double> first_violation_t;
  std::string detail;
};

/// Exponent constant c of E2(t) <= e^{ct} E2(0) for the H2 scenario branch,
/// with M1 the branch-relevant bound on u_x, T the horizon and rho0_sup the
/// sup of the initial density.
double gronwall_constant_h2(const ModelParams& p, Branch branch, double M1, double T, double rho0_sup);

/// Checks E2(t) <= e^{ct} E2(0) with M1 taken from the recorded u_x extrema.
CheckResult gronwall_check_h2(const std::vector<DiagRecord>& records, const ModelParams& p,
                              double rel_slack = 1e-8);

/// The H3-level bound E1(t) <= e^{ct} E1(0) with
///   c = (-3k1+k2-9k3) M1 + 3((|2k2-k3| + 2|k3-k2|) e^{-k3 M1 T} |rho0| + |2k2+3k3| M2).
/// Only stated for the u_x -> -inf branch of the H^s scenario; elsewhere the
/// result is marked not applicable.
double gronwall_constant_h3(const ModelParams& p, double M1, double M2, double T, double rho0_sup);
CheckResult gronwall_check_h3(const std::vector<DiagRecord>& records, const ModelParams& p,
                              double rel_slack = 1e-8);

/// Riccati inequality for h(t) = u_x(t, 0) with tol = 1e-4 (1 + h^2):
///  (a) dh/dt >= (k1-1)/2 h^2 - tol at interior samples;
///  (b) 1/h(t) <= 1/h(t0) - (k1-1)/2 (t - t0) + tol, where t0 = 0 if
///      h(0) > 0, and otherwise h must be strictly increasing and t0 is the
///      first sample with h > 0.
CheckResult riccati_check(const std::vector<OriginSample>& origin, const ModelParams& p);

/// The origin convolution term is nonnegative at every sample.
CheckResult origin_source_check(const std::vector<OriginSample>& origin, double tol = 1e-12);

/// |u(t,0)|, |u_xx(t,0)|, |rho(t,0)| <= tol at every sample up to `until`.
CheckResult origin_value_check(const std::vector<OriginSample>& origin, double tol, double until);

/// |int rho(t) - int rho(0)| <= rel_tol * scale with scale = max(|int rho(0)|,
/// sup|rho(0)|); the second term keeps the test meaningful when int rho(0)
/// vanishes, as it does for odd densities.
CheckResult conservation_check(const std::vector<DiagRecord>& records, double rel_tol = 1e-12);

/// symmetry_res <= tol at every record, ignoring records with index beyond
/// `last_index` (used to skip the final steps before a blow-up report).
CheckResult symmetry_check(const std::vector<DiagRecord>& records, double tol, std::size_t last_index);

struct RecorderOptions {
  std::size_t diag_every = 1;
  std::size_t snapshot_every = 0;  ///< 0 disables snapshots
  double hs_order = 2.0;
  bool identities = true;
  bool symmetry = true;
  SymmetryMode symmetry_mode = SymmetryMode::UOddRhoEven;
  bool origin = true;
};

/// Builds a Trajectory as the run proceeds. The initial and the final state
/// are always recorded. If a CharTracker is given it must be registered
/// before the recorder so that its field is current at each record.
class Recorder final : public StepObserver {
 public:
  Recorder(const ModelParams& p, RecorderOptions options, const CharTracker* tracker = nullptr);

  void on_start(const State& s0) override;
  void on_step(const StepView& view) override;
  void on_finish(const State& last, const RunReport& report) override;

  const Trajectory& trajectory() const noexcept { return traj_; }
  Trajectory take() { return std::move(traj_); }

 private:
  void record(const State& s, double dt, std::size_t step);

  ModelParams p_;
  RecorderOptions opt_;
  const CharTracker* tracker_;
  Trajectory traj_;
  std::size_t last_recorded_step_ = 0;
  double last_dt_ = 0.0;
  std::size_t snapshots_taken_ = 0;
};

}  // namespace bfam
