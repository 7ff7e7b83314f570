#include "aif/gridworld.hpp"
#include "aif/model.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <unistd.h>

using namespace aif;

namespace {
constexpr int kRight = 0, kDown = 1, kLeft = 2, kUp = 3;
}

TEST(GroundTruth, ColumnsAreOneHot) {
  const GridSpec spec;
  const auto b = ground_truth_transitions(spec);
  ASSERT_EQ(b.size(), kNumGridActions);
  for (const auto& m : b) {
    ASSERT_EQ(m.rows(), 9);
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      EXPECT_DOUBLE_EQ(m.col(j).sum(), 1.0);
      EXPECT_DOUBLE_EQ(m.col(j).maxCoeff(), 1.0);
    }
  }
  EXPECT_EQ(b[kRight](1, 0), 1.0);
  EXPECT_EQ(b[kUp](0, 0), 1.0);
}

TEST(GroundTruth, TwoDownsThenTwoRightsReachGoal) {
  const GridSpec spec;
  EnvState env = reset(spec).state;
  for (int a : {kDown, kDown, kRight, kRight}) env = step(env, a, spec).state;
  EXPECT_EQ(env.current, 8);
  EXPECT_EQ(env.step_count, 4);
}

TEST(Step, ExamplesAndIdentityEmission) {
  const GridSpec spec;
  const auto r = step(EnvState{0, 0}, kRight, spec);
  EXPECT_EQ(r.state.current, 1);
  EXPECT_EQ(r.observation, 1);
  const auto wall = step(EnvState{8, 2}, kDown, spec);
  EXPECT_EQ(wall.state.current, 8);
  EXPECT_EQ(wall.observation, 8);
  EXPECT_EQ(wall.state.step_count, 3);
  for (int s = 0; s < 9; ++s)
    for (int a = 0; a < 4; ++a) {
      const auto o = step(EnvState{s, 0}, a, spec);
      EXPECT_EQ(o.observation, o.state.current);
    }
}

TEST(Step, RejectsUnknownAction) {
  const GridSpec spec;
  EXPECT_THROW(step(EnvState{0, 0}, 4, spec), std::invalid_argument);
  EXPECT_THROW(step(EnvState{0, 0}, -1, spec), std::invalid_argument);
}

TEST(Reset, StartsAtStartTile) {
  const auto r = reset(GridSpec{});
  EXPECT_EQ(r.state.current, 0);
  EXPECT_EQ(r.observation, 0);
  EXPECT_EQ(r.state.step_count, 0);
  const GridSpec centre{3, 3, 4, 8};
  EXPECT_EQ(reset(centre).observation, 4);
  EXPECT_EQ(reset(centre).state.current, reset(centre).state.current);
}

TEST(Grid, InteriorMovesRoundTrip) {
  const GridSpec spec{4, 4, 0, 15};
  for (int s : {5, 6, 9, 10}) {
    EXPECT_EQ(spec.next_state(spec.next_state(s, Action::kRight), Action::kLeft), s);
    EXPECT_EQ(spec.next_state(spec.next_state(s, Action::kDown), Action::kUp), s);
  }
}

TEST(Grid, ExactlySixTaskSolvingPolicies) {
  const GridSpec spec;
  int count = 0;
  for (const Policy& p : enumerate_policies(4, 4, 256)) count += is_task_solving(p, spec) ? 1 : 0;
  EXPECT_EQ(count, 6);
}

TEST(Grid, ValidateRejectsBadSpecs) {
  EXPECT_THROW((GridSpec{0, 3, 0, 0}).validate(), std::invalid_argument);
  EXPECT_THROW((GridSpec{3, 3, 0, 9}).validate(), std::invalid_argument);
  EXPECT_THROW((GridSpec{3, 3, -1, 8}).validate(), std::invalid_argument);
}

TEST(GridEnv, TracksState) {
  GridEnv env{GridSpec{}};
  EXPECT_EQ(env.reset(), 0);
  EXPECT_EQ(env.step(kRight), 1);
  EXPECT_EQ(env.step(kUp), 1);
  EXPECT_EQ(env.state().step_count, 2);
}

TEST(LayoutRegistry, DefaultAndFileLayouts) {
  LayoutRegistry reg;
  EXPECT_EQ(reg.get("gridw9"), (GridSpec{3, 3, 0, 8}));
  EXPECT_THROW(reg.get("nope"), std::out_of_range);

  const auto path = std::filesystem::temp_directory_path() / ("aif_layouts_" + std::to_string(::getpid()) + ".json");
  {
    std::ofstream f(path);
    f << R"({"gridw16": {"width": 4, "height": 4, "start": 0, "goal": 15}})";
  }
  reg.load_file(path);
  std::filesystem::remove(path);
  EXPECT_EQ(reg.get("gridw16"), (GridSpec{4, 4, 0, 15}));
}
