#include "aif/serialization.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace aif;

namespace {

// Text round trip, as the files on disk see it.
Json reparse(const Json& j) { return Json::parse(j.dump()); }

Eigen::VectorXd random_vector(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> d(0.0, 10.0);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = d(rng);
  return v;
}

}  // namespace

TEST(Serialization, MatrixIsRowMajorAndExact) {
  Eigen::MatrixXd m(2, 3);
  m << 1.0 / 3.0, 2, 3, 4, 5, 1e-300;
  const Json j = to_json(m);
  EXPECT_DOUBLE_EQ(j[0][1].get<double>(), 2.0);
  EXPECT_DOUBLE_EQ(j[1][0].get<double>(), 4.0);
  EXPECT_TRUE(matrix_from_json(reparse(j)) == m);
}

TEST(Serialization, ModelRoundTrip) {
  LearningConfig lc;
  lc.b_init = 0.1;
  lc.b_jitter = 0.3;
  const GenerativeModel m = GenerativeModel::for_grid(GridSpec{}, enumerate_policies(4, 4, 256), 5, lc, 12);
  const GenerativeModel back = model_from_json(reparse(to_json(m)));
  for (std::size_t a = 0; a < 4; ++a) EXPECT_TRUE(back.b_counts()[a] == m.b_counts()[a]);
  EXPECT_TRUE(back.a_matrix() == m.a_matrix());
  EXPECT_TRUE(back.d_prior().probs() == m.d_prior().probs());
  EXPECT_EQ(back.policies(), m.policies());
  EXPECT_EQ(back.horizon(), 4);
  EXPECT_EQ(back.episode_len(), 5);
}

TEST(Serialization, GridSpecRoundTrip) {
  const GridSpec s{4, 2, 1, 6};
  EXPECT_EQ(grid_spec_from_json(reparse(to_json(s))), s);
}

TEST(Serialization, ConfigRoundTrip) {
  ExperimentConfig c;
  c.exp_name = "roundtrip";
  c.num_runs = 3;
  c.pref_type = GoalStrength::kSoft;
  c.shaped = false;
  c.learn_b = true;
  c.base_seed = 99;
  c.eta = 0.25;
  c.kl_direction = KlDirection::kLearnedToTruth;
  c.trace_detail = TraceDetail::kFull;
  c.credit = CreditAssignment::kTerminal;
  c.path_override = std::vector<int>{3, 6, 7, 8};
  const ExperimentConfig b = experiment_config_from_json(reparse(to_json(c)));
  EXPECT_EQ(b.exp_name, c.exp_name);
  EXPECT_EQ(b.num_runs, 3);
  EXPECT_EQ(b.pref_type, GoalStrength::kSoft);
  EXPECT_FALSE(b.shaped);
  EXPECT_TRUE(b.learn_b);
  EXPECT_EQ(b.base_seed, 99U);
  EXPECT_DOUBLE_EQ(b.eta, 0.25);
  EXPECT_EQ(b.kl_direction, KlDirection::kLearnedToTruth);
  EXPECT_EQ(b.trace_detail, TraceDetail::kFull);
  EXPECT_EQ(b.credit, CreditAssignment::kTerminal);
  EXPECT_EQ(b.path_override, c.path_override);
  EXPECT_EQ(to_json(b).dump(), to_json(c).dump());
}

TEST(Serialization, EpisodeSummaryRoundTrip) {
  std::mt19937_64 rng(4);
  EpisodeSummary s;
  s.run_id = 3;
  s.episode_id = 17;
  s.observations = {0, 1, 2, 5, 8};
  s.actions = {0, 0, 1, 1};
  s.success = true;
  for (Eigen::VectorXd* v : {&s.fe_step1, &s.efe_step1, &s.risk_step1, &s.ambiguity_step1, &s.a_novelty_step1,
                             &s.b_novelty_step1, &s.policy_probs_step1, &s.fe_final})
    *v = random_vector(rng, 256);
  for (int t = 0; t < 4; ++t) s.action_marginals.push_back(random_vector(rng, 4));
  s.b_kl = {1.5, 2.5, 3.5, 4.5};
  s.max_fe_increase = 1e-12;
  s.efe_term_residual = 3e-15;
  const EpisodeSummary b = episode_summary_from_json(reparse(to_json(s)));
  EXPECT_EQ(b.run_id, 3);
  EXPECT_EQ(b.episode_id, 17);
  EXPECT_EQ(b.observations, s.observations);
  EXPECT_EQ(b.actions, s.actions);
  EXPECT_TRUE(b.success);
  EXPECT_TRUE(b.fe_step1 == s.fe_step1);
  EXPECT_TRUE(b.efe_step1 == s.efe_step1);
  EXPECT_TRUE(b.b_novelty_step1 == s.b_novelty_step1);
  EXPECT_TRUE(b.policy_probs_step1 == s.policy_probs_step1);
  EXPECT_TRUE(b.fe_final == s.fe_final);
  ASSERT_EQ(b.action_marginals.size(), 4U);
  for (std::size_t t = 0; t < 4; ++t) EXPECT_TRUE(b.action_marginals[t] == s.action_marginals[t]);
  EXPECT_EQ(b.b_kl, s.b_kl);
  EXPECT_EQ(b.max_fe_increase, s.max_fe_increase);
  EXPECT_EQ(b.efe_term_residual, s.efe_term_residual);
}

TEST(Serialization, MetricsRoundTrip) {
  std::mt19937_64 rng(8);
  MetricsBundle m;
  m.num_runs = 2;
  m.num_episodes = 2;
  m.success_curve = {0.5, 1.0};
  m.state_access = random_vector(rng, 9);
  for (int e = 0; e < 2; ++e) {
    m.fe_step1.push_back(random_vector(rng, 256));
    m.fe_step5.push_back(random_vector(rng, 256));
    m.efe_step1.push_back(random_vector(rng, 256));
    m.risk_step1.push_back(random_vector(rng, 256));
    m.ambiguity_step1.push_back(random_vector(rng, 256));
    m.b_novelty_step1.push_back(random_vector(rng, 256));
    m.policy_probs_step1.push_back(random_vector(rng, 256));
    m.action_marginals.push_back({random_vector(rng, 4), random_vector(rng, 4)});
    m.b_kl_curve.push_back({1, 2, 3, 4});
  }
  m.plot_policies = {1, 5, 9};
  const MetricsBundle b = metrics_from_json(reparse(to_json(m)));
  EXPECT_EQ(b.num_runs, 2);
  EXPECT_EQ(b.success_curve, m.success_curve);
  EXPECT_TRUE(b.state_access == m.state_access);
  EXPECT_TRUE(b.efe_step1[1] == m.efe_step1[1]);
  EXPECT_TRUE(b.action_marginals[1][0] == m.action_marginals[1][0]);
  EXPECT_EQ(b.b_kl_curve, m.b_kl_curve);
  EXPECT_EQ(b.plot_policies, m.plot_policies);
}

TEST(Serialization, ScheduleAndTraceCarryTheirContent) {
  const GridSpec spec;
  const auto sched = build_schedule({GoalStrength::kHard, true}, spec, 5, default_goal_path(spec, 5));
  const Json js = reparse(to_json(sched));
  EXPECT_EQ(js.at("pref_type"), "states");
  EXPECT_EQ(js.at("pref_loc"), "all_diff");
  ASSERT_EQ(js.at("per_step").size(), 5U);
  EXPECT_TRUE(vector_from_json(js.at("per_step")[3]) == sched.at(3).probs());
  EfeBreakdown br{1.0, 0.0, 0.0, 0.25};
  const Json jb = to_json(br);
  EXPECT_DOUBLE_EQ(jb.at("risk").get<double>(), 1.0);
  EXPECT_DOUBLE_EQ(jb.at("b_novelty").get<double>(), 0.25);
}
