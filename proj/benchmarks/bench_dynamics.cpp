#include <benchmark/benchmark.h>

#include "bfamily/characteristics.hpp"
#include "bfamily/initdata.hpp"
#include "bfamily/simulation.hpp"
#include "bfamily/stepper.hpp"

using namespace bfam;

namespace {

State initial(std::size_t n) {
  InitSpec u;
  InitSpec rho;
  rho.amplitude = 0.5;
  return build_initial(u, rho, make_grid(20.0, n));
}

void BM_EvalRhs(benchmark::State& state) {
  const auto s = initial(state.range(0));
  const auto p = make_params(CaseTag::CaseI, 2.0);
  for (auto _ : state) benchmark::DoNotOptimize(eval_rhs(s, p));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_EvalRhs)->RangeMultiplier(2)->Range(256, 4096)->Complexity(benchmark::oNLogN);

void BM_StepRk4(benchmark::State& state) {
  const auto s = initial(state.range(0));
  const auto p = make_params(CaseTag::CaseI, 2.0);
  for (auto _ : state) benchmark::DoNotOptimize(step_rk4(s, 1e-3, p));
}
BENCHMARK(BM_StepRk4)->Arg(1024)->Arg(4096);

void BM_StepRk4WithCharacteristics(benchmark::State& state) {
  const auto s = initial(1024);
  const auto p = make_params(CaseTag::CaseI, 2.0);
  auto chars = CharField::seed(s.grid(), state.range(0));
  for (auto _ : state) {
    RkStages stages;
    benchmark::DoNotOptimize(step_rk4(s, 1e-3, p, true, &stages));
    auto c = chars;
    advance_characteristics(c, stages, p, 1e-3);
    benchmark::DoNotOptimize(c.q.data());
  }
}
BENCHMARK(BM_StepRk4WithCharacteristics)->Arg(16)->Arg(4);

void BM_SimulateShort(benchmark::State& state) {
  const auto s = initial(1024);
  const auto p = make_params(CaseTag::CaseI, 2.0);
  StepControl ctl;
  ctl.t_end = 0.05;
  ctl.dt_max = 1e-3;
  SimulationOptions opt;
  opt.char_label_stride.reset();
  opt.recorder.identities = state.range(0) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(simulate(s, p, ctl, opt));
}
BENCHMARK(BM_SimulateShort)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace
