#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

#include "bfamily/dynamics.hpp"
#include "bfamily/model.hpp"

namespace bfam {

struct StepControl {
  double cfl = 0.3;
  double dt_min = 1e-9;
  double dt_max = 1e-2;
  double blowup_grad_threshold = 1e4;
  double t_end = 1.0;
  bool dealias = true;
  /// Spectral tail ratio (see SpectralOps::tail_ratio) of u or rho above
  /// which the front is no longer resolved; <= 0 disables the monitor.
  double resolution_tol = 1e-6;
  /// Blow-up scenario used to pick the watched gradient quantity.
  Framework framework = Framework::H2;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

enum class RunStatus { ReachedTEnd, BlowUpDetected, Overflow };
enum class BlowUpQuantity { MinUx, MaxUx, SupRhoX };
enum class BlowUpTrigger { GradientThreshold, ResolutionLoss, Overflow };

struct BlowUpDiagnostic {
  BlowUpQuantity quantity = BlowUpQuantity::MaxUx;
  double value = 0.0;
  std::size_t location_index = 0;
  double location_x = 0.0;
  BlowUpTrigger trigger = BlowUpTrigger::GradientThreshold;
};

struct RunReport {
  RunStatus status = RunStatus::ReachedTEnd;
  /// Last time with a finite, trusted state. For BlowUpDetected this is a
  /// lower estimate of the maximal existence time.
  double t_final = 0.0;
  std::size_t steps = 0;
  double last_dt = 0.0;
  std::optional<BlowUpDiagnostic> blowup;
  std::optional<int> overflow_stage;
};

std::string_view to_string(RunStatus status);
std::string_view to_string(BlowUpQuantity quantity);
std::string_view to_string(BlowUpTrigger trigger);
std::optional<RunStatus> parse_run_status(std::string_view text);
std::optional<BlowUpQuantity> parse_blowup_quantity(std::string_view text);
std::optional<BlowUpTrigger> parse_blowup_trigger(std::string_view text);

/// u at the four classical RK4 stages (t, t+dt/2, t+dt/2, t+dt), exposed so
/// that quantities integrated alongside the PDE can use the same stages.
struct RkStages {
  std::array<Field, 4> u;
};

/// One classical RK4 step. Throws OverflowError carrying the stage index.
State step_rk4(const State& s, double dt, const ModelParams& p, bool dealias = true,
               RkStages* stages = nullptr);

/// clamp(min(cfl*dx / max(1, (1+|k3|)|u|_inf), cfl / max(1, |u_x|_inf)), dt_min, dt_max)
double choose_dt(const State& s, const StepControl& ctl, const ModelParams& p);
double choose_dt(double u_sup, double ux_sup, double dx, const StepControl& ctl, const ModelParams& p);

/// The gradient quantity the scenario says must diverge at blow-up.
struct GradientWatch {
  BlowUpQuantity quantity;
  double value;
  std::size_t index;
};
GradientWatch watched_gradient(const Field& ux, const Field* rhox, const ModelParams& p, Framework framework);

struct StepView {
  const State& before;
  const State& after;
  const RkStages& stages;
  double dt;
  std::size_t step;  ///< 1-based index of the step just taken
};

/// Callbacks invoked by run(), in registration order.
class StepObserver {
 public:
  virtual ~StepObserver() = default;
  virtual void on_start(const State& s0) = 0;
  virtual void on_step(const StepView& view) = 0;
  virtual void on_finish(const State& last, const RunReport& report) = 0;
};

/// Steps from s0 to ctl.t_end unless blow-up is declared first.
///
/// Blow-up is declared when
///  - the watched gradient exceeds blowup_grad_threshold while choose_dt is
///    pinned at dt_min, or
///  - the spectral tail of u or rho exceeds resolution_tol (the front has
///    become narrower than the grid can represent), or
///  - a stage overflows (status Overflow).
/// Throws std::invalid_argument for a non-finite or unresolved initial state.
RunReport run(State s0, const ModelParams& p, const StepControl& ctl,
              std::span<StepObserver* const> observers = {});

}  // namespace bfam
