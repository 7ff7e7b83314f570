#include "aif/gridworld.hpp"
#include "aif/model.hpp"

#include <gtest/gtest.h>

#include <random>
#include <set>

using namespace aif;

namespace {

GenerativeModel grid_model(double b_init = 1.0, int num_policies = 256) {
  LearningConfig lc;
  lc.learn_b = true;
  lc.b_init = b_init;
  return GenerativeModel::for_grid(GridSpec{}, enumerate_policies(4, 4, num_policies), 5, lc, 0);
}

BeliefState delta_beliefs(const GenerativeModel& model, const std::vector<std::vector<int>>& trajectories,
                          const Categorical& q_policy) {
  const auto m = static_cast<std::size_t>(model.num_states());
  BeliefState b = BeliefState::uniform(model.policies().size(), model.episode_len(), m);
  for (std::size_t k = 0; k < trajectories.size(); ++k)
    for (std::size_t t = 0; t < trajectories[k].size(); ++t)
      b.q_states[k][t] = Categorical::one_hot(m, static_cast<std::size_t>(trajectories[k][t]));
  b.q_policy = q_policy;
  return b;
}

double total_mass(const GenerativeModel& m) {
  double s = 0.0;
  for (const auto& c : m.b_counts()) s += c.sum();
  return s;
}

}  // namespace

TEST(EnumeratePolicies, LexicographicLastSlotFastest) {
  const auto ps = enumerate_policies(4, 4, 256);
  ASSERT_EQ(ps.size(), 256U);
  std::set<std::vector<int>> distinct;
  for (std::size_t k = 0; k < ps.size(); ++k) {
    EXPECT_EQ(ps[k].id, static_cast<int>(k));
    distinct.insert(ps[k].actions);
  }
  EXPECT_EQ(distinct.size(), 256U);
  EXPECT_EQ(ps[1].actions, (std::vector<int>{0, 0, 0, 1}));
  EXPECT_EQ(ps[4].actions, (std::vector<int>{0, 0, 1, 0}));
  EXPECT_EQ(ps[255].actions, (std::vector<int>{3, 3, 3, 3}));

  const auto two = enumerate_policies(2, 1, 2);
  ASSERT_EQ(two.size(), 2U);
  EXPECT_EQ(two[0].actions, std::vector<int>{0});
  EXPECT_EQ(two[1].actions, std::vector<int>{1});
}

TEST(EnumeratePolicies, SixHaveTwoRightsAndTwoDowns) {
  int count = 0;
  for (const auto& p : enumerate_policies(4, 4, 256)) {
    int r = 0, d = 0;
    for (int a : p.actions) {
      r += a == 0;
      d += a == 1;
    }
    count += (r == 2 && d == 2);
  }
  EXPECT_EQ(count, 6);
}

TEST(EnumeratePolicies, RejectsTooMany) {
  EXPECT_THROW(enumerate_policies(4, 4, 257), std::invalid_argument);
  EXPECT_NO_THROW(enumerate_policies(4, 4, 10));
}

TEST(GenerativeModel, ValidatesInvariants) {
  const auto ps = enumerate_policies(2, 1, 2);
  const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(2, 2);
  const std::vector<Eigen::MatrixXd> b(2, Eigen::MatrixXd::Ones(2, 2));
  EXPECT_NO_THROW(GenerativeModel(a, b, Categorical::uniform(2), ps, 1, 2));
  Eigen::MatrixXd bad_a = a;
  bad_a(0, 0) = 0.5;
  EXPECT_THROW(GenerativeModel(bad_a, b, Categorical::uniform(2), ps, 1, 2), std::invalid_argument);
  auto bad_b = b;
  bad_b[1](0, 1) = 0.0;
  EXPECT_THROW(GenerativeModel(a, bad_b, Categorical::uniform(2), ps, 1, 2), std::invalid_argument);
  EXPECT_THROW(GenerativeModel(a, b, Categorical::uniform(2), ps, 3, 2), std::invalid_argument);
  EXPECT_THROW(GenerativeModel(a, b, Categorical::uniform(3), ps, 1, 2), std::invalid_argument);
}

TEST(ExpectedB, UniformAndSpotColumn) {
  GenerativeModel m = grid_model(1.0);
  for (int a = 0; a < 4; ++a)
    EXPECT_TRUE(m.expected_b(a).isApprox(Eigen::MatrixXd::Constant(9, 9, 1.0 / 9.0), 1e-14));
  auto counts = m.b_counts();
  counts[0](0, 3) = 9.0;
  m = m.with_b_counts(counts);
  const Eigen::MatrixXd e = m.expected_b(0);
  EXPECT_NEAR(e(0, 3), 9.0 / 17.0, 1e-15);
  EXPECT_NEAR(e(1, 3), 1.0 / 17.0, 1e-15);
}

TEST(ExpectedB, ConcentratesAfterRepeatedUpdates) {
  GenerativeModel m = grid_model(0.1, 1);
  auto counts = m.b_counts();
  for (int i = 0; i < 100; ++i) counts[0](1, 0) += 1.0;
  m = m.with_b_counts(counts);
  EXPECT_GT(m.expected_b(0)(1, 0), 0.95);
}

TEST(ExpectedLogB, SymmetryJensenAndSpotValue) {
  GenerativeModel m = grid_model(1.0, 1);
  const Eigen::MatrixXd el = m.expected_log_b(2);
  for (Eigen::Index j = 0; j < 9; ++j) EXPECT_NEAR(el.col(j).maxCoeff(), el.col(j).minCoeff(), 0.0);

  auto counts = m.b_counts();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.05, 20.0);
  for (auto& c : counts) c = c.unaryExpr([&](double) { return u(rng); });
  m = m.with_b_counts(counts);
  for (int a = 0; a < 4; ++a) {
    const Eigen::MatrixXd diff = m.expected_log_b(a).array() - m.expected_b(a).array().log();
    EXPECT_LE(diff.maxCoeff(), 1e-12);
  }

  const std::vector<Eigen::MatrixXd> small(2, (Eigen::MatrixXd(2, 2) << 2, 2, 3, 3).finished());
  const GenerativeModel two(Eigen::MatrixXd::Identity(2, 2), small, Categorical::uniform(2),
                            enumerate_policies(2, 1, 2), 1, 2);
  EXPECT_NEAR(two.expected_log_b(0)(0, 0), digamma(2.0) - digamma(5.0), 1e-14);
  EXPECT_NEAR(two.expected_log_b(0)(1, 0), digamma(3.0) - digamma(5.0), 1e-14);
}

TEST(UpdateBCounts, DeltaCase) {
  const GenerativeModel m = grid_model(1.0, 1);  // policy 0 = right x4
  const BeliefState b = delta_beliefs(m, {{0, 1, 2, 2, 2}}, Categorical::one_hot(1, 0));
  LearningConfig lc;
  lc.learn_b = true;
  const GenerativeModel u = update_b_counts(m, b, lc);
  EXPECT_DOUBLE_EQ(u.b_counts()[0](1, 0) - m.b_counts()[0](1, 0), 1.0);
  EXPECT_DOUBLE_EQ(u.b_counts()[0](2, 2) - m.b_counts()[0](2, 2), 2.0);
  EXPECT_NEAR(total_mass(u) - total_mass(m), 4.0, 1e-12);
}

TEST(UpdateBCounts, SplitsMassBetweenPolicies) {
  // Policies 0 (right first) and 64 (down first) with equal weight.
  std::vector<Policy> ps = {enumerate_policies(4, 4, 256)[0], enumerate_policies(4, 4, 256)[64]};
  ps[1].id = 1;
  LearningConfig lc;
  lc.learn_b = true;
  const GenerativeModel m = GenerativeModel::for_grid(GridSpec{}, ps, 5, lc, 0);
  const BeliefState b = BeliefState::uniform(2, 5, 9);
  const GenerativeModel u = update_b_counts(m, b, lc);
  EXPECT_NEAR(u.b_counts()[0].sum() - m.b_counts()[0].sum(), 3.5, 1e-12);
  EXPECT_NEAR(u.b_counts()[1].sum() - m.b_counts()[1].sum(), 0.5, 1e-12);
}

TEST(UpdateBCounts, MatchesBruteForceTripleSum) {
  const auto all = enumerate_policies(4, 4, 256);
  const std::vector<Policy> ps = {all[0], all[27], all[200]};
  std::vector<Policy> renum = ps;
  for (int k = 0; k < 3; ++k) renum[static_cast<std::size_t>(k)].id = k;
  LearningConfig lc;
  lc.learn_b = true;
  lc.eta = 0.7;
  const GenerativeModel m = GenerativeModel::for_grid(GridSpec{}, renum, 5, lc, 0);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.01, 1.0);
  auto random_cat = [&](std::size_t n) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = u(rng);
    return Categorical::normalized(v);
  };
  BeliefState b = BeliefState::uniform(3, 5, 9);
  for (auto& row : b.q_states)
    for (auto& q : row) q = random_cat(9);
  b.q_policy = random_cat(3);
  const GenerativeModel updated = update_b_counts(m, b, lc);

  std::vector<Eigen::MatrixXd> expected = m.b_counts();
  for (std::size_t k = 0; k < 3; ++k)
    for (std::size_t t = 1; t < 5; ++t) {
      const int a = renum[k].actions[t - 1];
      for (int i = 0; i < 9; ++i)
        for (int j = 0; j < 9; ++j)
          expected[static_cast<std::size_t>(a)](i, j) += lc.eta * b.q_policy[k] *
                                                          b.q_states[k][t][static_cast<std::size_t>(i)] *
                                                          b.q_states[k][t - 1][static_cast<std::size_t>(j)];
    }
  for (int a = 0; a < 4; ++a)
    EXPECT_TRUE(updated.b_counts()[static_cast<std::size_t>(a)].isApprox(expected[static_cast<std::size_t>(a)], 1e-13));
  EXPECT_NEAR(total_mass(updated) - total_mass(m), lc.eta * 4.0, 1e-12);
}

TEST(UpdateBCounts, PerTransitionWeights) {
  const auto all = enumerate_policies(4, 4, 256);
  std::vector<Policy> ps = {all[0], all[85]};  // all right / all down
  ps[1].id = 1;
  LearningConfig lc;
  lc.learn_b = true;
  const GenerativeModel m = GenerativeModel::for_grid(GridSpec{}, ps, 5, lc, 0);
  const BeliefState b = BeliefState::uniform(2, 5, 9);
  const std::vector<Categorical> w = {Categorical::one_hot(2, 0), Categorical::one_hot(2, 1),
                                      Categorical::one_hot(2, 1), Categorical::one_hot(2, 1)};
  const GenerativeModel u = update_b_counts(m, b, lc, w);
  EXPECT_NEAR(u.b_counts()[0].sum() - m.b_counts()[0].sum(), 1.0, 1e-12);
  EXPECT_NEAR(u.b_counts()[1].sum() - m.b_counts()[1].sum(), 3.0, 1e-12);
  EXPECT_THROW(update_b_counts(m, b, lc, std::vector<Categorical>(3, Categorical::uniform(2))),
               std::invalid_argument);
}

TEST(UpdateBCounts, NoLearningLeavesCountsIdentical) {
  const GenerativeModel m = grid_model(1.0, 4);
  BeliefState b = BeliefState::uniform(4, 5, 9);
  LearningConfig lc;
  lc.learn_b = false;
  const GenerativeModel u = update_b_counts(m, b, lc);
  for (int a = 0; a < 4; ++a)
    EXPECT_TRUE((u.b_counts()[static_cast<std::size_t>(a)].array() == m.b_counts()[static_cast<std::size_t>(a)].array()).all());
}

TEST(ForGrid, JitterIsSeededAndBounded) {
  LearningConfig lc;
  lc.b_init = 0.1;
  lc.b_jitter = 0.1;
  const auto ps = enumerate_policies(4, 4, 8);
  const auto m1 = GenerativeModel::for_grid(GridSpec{}, ps, 5, lc, 7);
  const auto m2 = GenerativeModel::for_grid(GridSpec{}, ps, 5, lc, 7);
  const auto m3 = GenerativeModel::for_grid(GridSpec{}, ps, 5, lc, 8);
  EXPECT_TRUE(m1.b_counts()[2] == m2.b_counts()[2]);
  EXPECT_FALSE(m1.b_counts()[2] == m3.b_counts()[2]);
  for (const auto& c : m1.b_counts()) {
    EXPECT_GE(c.minCoeff(), 0.1);
    EXPECT_LE(c.maxCoeff(), 0.2);
  }
  EXPECT_TRUE(m1.a_matrix().isIdentity());
  EXPECT_EQ(m1.horizon(), 4);
  lc.b_init = 0.0;
  EXPECT_THROW(GenerativeModel::for_grid(GridSpec{}, ps, 5, lc, 0), std::invalid_argument);
}
