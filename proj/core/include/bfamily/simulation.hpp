#pragma once

#include <cstddef>
#include <optional>

#include "bfamily/characteristics.hpp"
#include "bfamily/diagnostics.hpp"
#include "bfamily/dynamics.hpp"
#include "bfamily/model.hpp"
#include "bfamily/stepper.hpp"
#include "bfamily/trajectory.hpp"

namespace bfam {

struct SimulationOptions {
  RecorderOptions recorder;
  /// Label stride for characteristics; nullopt disables them.
  std::optional<std::size_t> char_label_stride = 4;
};

struct SimulationResult {
  Trajectory trajectory;
  State final_state;
  std::optional<CharField> characteristics;
  /// q_x > 0 and q increasing after every step (true when disabled).
  bool characteristics_smooth = true;
};

/// Runs the stepper with a recorder and, if enabled, a characteristics
/// tracker. The run report is trajectory.report.
SimulationResult simulate(const State& s0, const ModelParams& p, const StepControl& ctl,
                          const SimulationOptions& options = {});

}  // namespace bfam
