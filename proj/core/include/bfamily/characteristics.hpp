#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "bfamily/dynamics.hpp"
#include "bfamily/model.hpp"
#include "bfamily/stepper.hpp"
#include "bfamily/trajectory.hpp"

namespace bfam {

/// Characteristics q_t = u(t, -k3 q), q(0, x) = x, on a subset of labels.
///
/// q_x is not integrated directly: A(t, x) = int_0^t -k3 u_x(s, -k3 q) ds is
/// accumulated and q_x = exp(A), which is positive by construction.
struct CharField {
  std::vector<double> labels;
  std::vector<double> q;
  std::vector<double> qx;
  std::vector<double> accumulated_integral;
  /// Labels whose current evaluation point -k3 q lies outside [-L, L).
  std::size_t wrapped = 0;
  /// Set once a characteristic that started inside the 95% band reaches the
  /// outer 5% of the domain.
  bool near_boundary = false;

  /// Seeds every stride-th grid node (stride >= 1).
  static CharField seed(const Grid& g, std::size_t stride);

  std::size_t size() const noexcept { return labels.size(); }
  bool qx_positive() const noexcept;
  bool q_monotone() const noexcept;
};

/// One RK4 step of (q, A) coupled to the PDE step that produced `stages`.
/// Throws OverflowError if an interpolated value is not finite.
void advance_characteristics(CharField& c, const RkStages& stages, const ModelParams& p, double dt);

/// max over labels of |rho(t, -k3 q) q_x - rho0(-k3 x)|.
double transport_residual(const State& s, const CharField& c, const Field& rho0, const ModelParams& p);

/// Centered differences of q across neighbouring labels, for cross-checking
/// the exponential formula. Endpoints use one-sided differences.
std::vector<double> qx_finite_difference(const CharField& c);

struct RhoSupVerdict {
  std::optional<bool> k3_nonpositive;  ///< e^{-k3 M t}, M from u_x >= -M
  std::optional<bool> k3_nonnegative;  ///< e^{k3 M t}, M from u_x <= M
  bool absolute = true;                ///< e^{|k3| M t}, M = sup|u_x|
  std::optional<double> first_violation_t;

  bool all_hold() const noexcept {
    return absolute && k3_nonpositive.value_or(true) && k3_nonnegative.value_or(true);
  }
};

/// Sup bounds on rho with M the running extremum of the recorded u_x
/// extrema, up to a relative slack.
RhoSupVerdict rho_sup_bound_check(const std::vector<DiagRecord>& records, const ModelParams& p,
                                  double rel_slack = 1e-8);

/// Advances characteristics with each PDE step.
class CharTracker final : public StepObserver {
 public:
  CharTracker(const ModelParams& p, std::size_t stride);

  void on_start(const State& s0) override;
  void on_step(const StepView& view) override;
  void on_finish(const State&, const RunReport&) override {}

  const CharField& field() const noexcept { return field_; }
  const Field& rho0() const noexcept { return rho0_; }
  double residual(const State& s) const { return transport_residual(s, field_, rho0_, p_); }
  /// False once any recorded q_x was non-positive or q lost monotonicity.
  bool stayed_diffeomorphic() const noexcept { return diffeomorphic_; }

 private:
  ModelParams p_;
  std::size_t stride_;
  CharField field_;
  Field rho0_;
  bool diffeomorphic_ = true;
};

}  // namespace bfam
