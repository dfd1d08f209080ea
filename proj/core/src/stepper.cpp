#include "bfamily/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "bfamily/error.hpp"
#include "bfamily/spectral.hpp"

namespace bfam {

void StepControl::validate() const {
  auto fail = [](const std::string& field, const std::string& why) {
    throw std::invalid_argument("control." + field + ": " + why);
  };
  if (!(cfl > 0.0 && cfl <= 1.0)) fail("cfl", "must lie in (0, 1]");
  if (!(dt_min > 0.0) || !std::isfinite(dt_min)) fail("dt_min", "must be positive");
  if (!(dt_max >= dt_min) || !std::isfinite(dt_max)) fail("dt_max", "must be finite and >= dt_min");
  if (!(blowup_grad_threshold > 0.0)) fail("blowup_grad_threshold", "must be positive");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) fail("t_end", "must be positive and finite");
  if (std::isnan(resolution_tol)) fail("resolution_tol", "must be a number");
}

std::string_view to_string(RunStatus status) {
  switch (status) {
    case RunStatus::ReachedTEnd: return "ReachedTEnd";
    case RunStatus::BlowUpDetected: return "BlowUpDetected";
    case RunStatus::Overflow: return "Overflow";
  }
  return "?";
}

std::string_view to_string(BlowUpQuantity quantity) {
  switch (quantity) {
    case BlowUpQuantity::MinUx: return "MinUx";
    case BlowUpQuantity::MaxUx: return "MaxUx";
    case BlowUpQuantity::SupRhoX: return "SupRhoX";
  }
  return "?";
}

std::string_view to_string(BlowUpTrigger trigger) {
  switch (trigger) {
    case BlowUpTrigger::GradientThreshold: return "GradientThreshold";
    case BlowUpTrigger::ResolutionLoss: return "ResolutionLoss";
    case BlowUpTrigger::Overflow: return "Overflow";
  }
  return "?";
}

std::optional<RunStatus> parse_run_status(std::string_view text) {
  for (auto s : {RunStatus::ReachedTEnd, RunStatus::BlowUpDetected, RunStatus::Overflow}) {
    if (to_string(s) == text) return s;
  }
  return std::nullopt;
}

std::optional<BlowUpQuantity> parse_blowup_quantity(std::string_view text) {
  for (auto q : {BlowUpQuantity::MinUx, BlowUpQuantity::MaxUx, BlowUpQuantity::SupRhoX}) {
    if (to_string(q) == text) return q;
  }
  return std::nullopt;
}

std::optional<BlowUpTrigger> parse_blowup_trigger(std::string_view text) {
  for (auto t : {BlowUpTrigger::GradientThreshold, BlowUpTrigger::ResolutionLoss, BlowUpTrigger::Overflow}) {
    if (to_string(t) == text) return t;
  }
  return std::nullopt;
}

State step_rk4(const State& s, double dt, const ModelParams& p, bool dealias, RkStages* stages) {
  if (!(dt > 0.0)) throw std::invalid_argument("step_rk4: dt must be positive");

  auto stage = [&](const State& y, int index) {
    try {
      return eval_rhs(y, p, dealias);
    } catch (const OverflowError& e) {
      throw OverflowError(e.what(), index);
    }
  };
  auto offset = [&](const Tendency& k, double h) {
    State y{s.t + h, s.u, s.rho};
    y.u.axpy(h, k.du);
    y.rho.axpy(h, k.drho);
    return y;
  };

  const Tendency k1 = stage(s, 1);
  const State y2 = offset(k1, 0.5 * dt);
  const Tendency k2 = stage(y2, 2);
  const State y3 = offset(k2, 0.5 * dt);
  const Tendency k3 = stage(y3, 3);
  const State y4 = offset(k3, dt);
  const Tendency k4 = stage(y4, 4);

  if (stages) stages->u = {s.u, y2.u, y3.u, y4.u};

  State out{s.t + dt, s.u, s.rho};
  const double w = dt / 6.0;
  const std::size_t n = s.u.size();
  for (std::size_t j = 0; j < n; ++j) {
    out.u[j] += w * (k1.du[j] + 2.0 * k2.du[j] + 2.0 * k3.du[j] + k4.du[j]);
    out.rho[j] += w * (k1.drho[j] + 2.0 * k2.drho[j] + 2.0 * k3.drho[j] + k4.drho[j]);
  }
  if (!out.all_finite()) throw OverflowError("step_rk4: update is not finite", 4);
  return out;
}

double choose_dt(double u_sup, double ux_sup, double dx, const StepControl& ctl, const ModelParams& p) {
  const double advective = ctl.cfl * dx / std::max(1.0, (1.0 + std::abs(p.k3)) * u_sup);
  const double gradient = ctl.cfl / std::max(1.0, ux_sup);
  return std::clamp(std::min(advective, gradient), ctl.dt_min, ctl.dt_max);
}

double choose_dt(const State& s, const StepControl& ctl, const ModelParams& p) {
  const Field ux = derivative(s.u, 1);
  return choose_dt(s.u.sup_norm(), ux.sup_norm(), s.grid().dx(), ctl, p);
}

GradientWatch watched_gradient(const Field& ux, const Field* rhox, const ModelParams& p, Framework framework) {
  const auto vals = ux.values();
  const auto [min_it, max_it] = std::minmax_element(vals.begin(), vals.end());
  const GradientWatch neg{BlowUpQuantity::MinUx, -*min_it, static_cast<std::size_t>(min_it - vals.begin())};
  const GradientWatch pos{BlowUpQuantity::MaxUx, *max_it, static_cast<std::size_t>(max_it - vals.begin())};

  const ScenarioBranch branch = classify_scenario(p, framework);
  GradientWatch watch = pos;
  switch (branch.branch) {
    case Branch::NegInfUx: watch = neg; break;
    case Branch::PosInfUx: watch = pos; break;
    case Branch::TwoSidedUx: watch = neg.value > pos.value ? neg : pos; break;
  }
  if (branch.rho_x_relevant && rhox) {
    const auto r = rhox->values();
    const auto it = std::max_element(r.begin(), r.end(), [](double a, double b) { return std::abs(a) < std::abs(b); });
    if (std::abs(*it) > watch.value) {
      watch = {BlowUpQuantity::SupRhoX, std::abs(*it), static_cast<std::size_t>(it - r.begin())};
    }
  }
  return watch;
}

namespace {

BlowUpDiagnostic make_diagnostic(const GradientWatch& w, const Grid& g, BlowUpTrigger trigger) {
  return {w.quantity, w.value, w.index, g.node(w.index), trigger};
}

}  // namespace

RunReport run(State s0, const ModelParams& p, const StepControl& ctl, std::span<StepObserver* const> observers) {
  ctl.validate();
  if (!s0.all_finite()) throw std::invalid_argument("run: initial state is not finite");
  SpectralOps& ops = spectral_ops(s0.u.grid_ptr());
  const bool rho_watch = classify_scenario(p, ctl.framework).rho_x_relevant;

  auto resolution_lost = [&](const State& s) {
    if (!(ctl.resolution_tol > 0.0)) return false;
    return ops.tail_ratio(s.u, ctl.dealias) > ctl.resolution_tol ||
           ops.tail_ratio(s.rho, ctl.dealias) > ctl.resolution_tol;
  };
  if (resolution_lost(s0)) {
    throw std::invalid_argument("run: initial data is not resolved on this grid (spectral tail above resolution_tol)");
  }

  for (auto* o : observers) o->on_start(s0);

  RunReport report;
  State s = std::move(s0);
  RkStages stages;
  const double dx = s.grid().dx();

  while (s.t < ctl.t_end) {
    const Field ux = ops.derivative(s.u, 1);
    std::optional<Field> rhox;
    if (rho_watch) rhox = ops.derivative(s.rho, 1);
    const GradientWatch watch = watched_gradient(ux, rhox ? &*rhox : nullptr, p, ctl.framework);

    double dt = choose_dt(s.u.sup_norm(), ux.sup_norm(), dx, ctl, p);
    if (watch.value > ctl.blowup_grad_threshold && dt <= ctl.dt_min) {
      report.status = RunStatus::BlowUpDetected;
      report.blowup = make_diagnostic(watch, s.grid(), BlowUpTrigger::GradientThreshold);
      break;
    }
    const bool last = dt >= ctl.t_end - s.t;
    if (last) dt = ctl.t_end - s.t;

    State next;
    try {
      next = step_rk4(s, dt, p, ctl.dealias, &stages);
    } catch (const OverflowError& e) {
      report.status = RunStatus::Overflow;
      report.overflow_stage = e.stage();
      report.blowup = make_diagnostic(watch, s.grid(), BlowUpTrigger::Overflow);
      break;
    }
    if (last) next.t = ctl.t_end;

    ++report.steps;
    report.last_dt = dt;
    const StepView view{s, next, stages, dt, report.steps};
    try {
      for (auto* o : observers) o->on_step(view);
    } catch (const OverflowError& e) {
      --report.steps;
      report.status = RunStatus::Overflow;
      report.overflow_stage = e.stage();
      report.blowup = make_diagnostic(watch, s.grid(), BlowUpTrigger::Overflow);
      break;
    }
    s = std::move(next);

    if (s.t < ctl.t_end && resolution_lost(s)) {
      const Field ux_now = ops.derivative(s.u, 1);
      std::optional<Field> rhox_now;
      if (rho_watch) rhox_now = ops.derivative(s.rho, 1);
      report.status = RunStatus::BlowUpDetected;
      report.blowup = make_diagnostic(watched_gradient(ux_now, rhox_now ? &*rhox_now : nullptr, p, ctl.framework),
                                      s.grid(), BlowUpTrigger::ResolutionLoss);
      break;
    }
  }

  report.t_final = s.t;
  for (auto* o : observers) o->on_finish(s, report);
  return report;
}

}  // namespace bfam
