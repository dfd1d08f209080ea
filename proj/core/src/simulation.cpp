#include "bfamily/simulation.hpp"

#include <vector>

namespace bfam {

namespace {

class FinalState final : public StepObserver {
 public:
  void on_start(const State& s0) override { state = s0; }
  void on_step(const StepView&) override {}
  void on_finish(const State& last, const RunReport&) override { state = last; }
  State state;
};

}  // namespace

SimulationResult simulate(const State& s0, const ModelParams& p, const StepControl& ctl,
                          const SimulationOptions& options) {
  std::optional<CharTracker> tracker;
  if (options.char_label_stride) tracker.emplace(p, *options.char_label_stride);
  Recorder recorder(p, options.recorder, tracker ? &*tracker : nullptr);
  FinalState final_state;

  std::vector<StepObserver*> observers;
  if (tracker) observers.push_back(&*tracker);
  observers.push_back(&recorder);
  observers.push_back(&final_state);

  run(s0, p, ctl, observers);

  SimulationResult out;
  out.trajectory = recorder.take();
  out.final_state = std::move(final_state.state);
  if (tracker) {
    out.characteristics = tracker->field();
    out.characteristics_smooth = tracker->stayed_diffeomorphic();
  }
  return out;
}

}  // namespace bfam
