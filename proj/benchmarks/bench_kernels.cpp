#include "aif/agent.hpp"
#include "aif/efe.hpp"
#include "aif/inference.hpp"

#include <benchmark/benchmark.h>

using namespace aif;

namespace {

GenerativeModel paper_model() {
  LearningConfig lc;
  lc.learn_b = true;
  lc.b_init = 0.1;
  lc.b_jitter = 0.1;
  return GenerativeModel::for_grid(GridSpec{}, enumerate_policies(4, 4, 256), 5, lc, 1);
}

BeliefState first_step(const GenerativeModel& m) {
  BeliefState b = BeliefState::uniform(m.policies().size(), m.episode_len(), static_cast<std::size_t>(m.num_states()));
  b.observations = {0};
  b.current_step = 1;
  return b;
}

void BM_VmpStep(benchmark::State& state) {
  const GenerativeModel m = paper_model();
  const ModelTables tables(m);
  for (auto _ : state) {
    BeliefState b = first_step(m);
    benchmark::DoNotOptimize(vmp_update_states(m, tables, b, static_cast<int>(state.range(0))));
  }
}
BENCHMARK(BM_VmpStep)->Arg(1)->Arg(10);

void BM_EfeAllPolicies(benchmark::State& state) {
  const GenerativeModel m = paper_model();
  const ModelTables tables(m);
  const auto sched = build_schedule({GoalStrength::kHard, false}, GridSpec{}, 5, std::nullopt);
  BeliefState b = first_step(m);
  vmp_update_states(m, tables, b, 10);
  for (auto _ : state)
    for (std::size_t k = 0; k < m.policies().size(); ++k)
      benchmark::DoNotOptimize(total_efe(m, tables, sched, b, k, 1).total);
}
BENCHMARK(BM_EfeAllPolicies);

void BM_ModelTables(benchmark::State& state) {
  const GenerativeModel m = paper_model();
  for (auto _ : state) benchmark::DoNotOptimize(ModelTables(m));
}
BENCHMARK(BM_ModelTables);

void BM_Episode(benchmark::State& state) {
  const GridSpec spec;
  AgentConfig c;
  c.learning.learn_b = true;
  c.learning.b_init = 0.1;
  c.learning.b_jitter = 0.1;
  c.model = paper_model();
  c.schedule = build_schedule({GoalStrength::kHard, true}, spec, 5, default_goal_path(spec, 5));
  c.goal_state = spec.goal;
  c.policy_precision = 128.0;
  Agent agent(c);
  GridEnv env(spec);
  for (auto _ : state) benchmark::DoNotOptimize(agent.run_episode(env).success);
}
BENCHMARK(BM_Episode)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
