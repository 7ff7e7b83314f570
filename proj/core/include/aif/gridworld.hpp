#pragma once

// Deterministic, fully observable grid world used as the ground-truth process.
// Tiles are indexed row-major from the top-left corner; moving into a wall
// leaves the agent where it is.

#include <Eigen/Dense>

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace aif {

enum class Action : int { kRight = 0, kDown = 1, kLeft = 2, kUp = 3 };

inline constexpr std::size_t kNumGridActions = 4;
inline constexpr std::array<Action, kNumGridActions> kAllActions = {Action::kRight, Action::kDown,
                                                                    Action::kLeft, Action::kUp};

std::string_view action_name(Action a);
/// Throws std::invalid_argument for indices outside [0, 4).
Action action_from_index(int index);

struct GridSpec {
  int width = 3;
  int height = 3;
  int start = 0;
  int goal = 8;

  int num_states() const { return width * height; }
  /// Throws std::invalid_argument when dimensions or tiles are out of range.
  void validate() const;
  int row(int state) const { return state / width; }
  int col(int state) const { return state % width; }
  /// Tile reached from `state` by `action` (wall bumps self-transition).
  int next_state(int state, Action action) const;
  int manhattan(int a, int b) const;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

struct EnvState {
  int current = 0;
  int step_count = 0;
};

struct StepOutcome {
  EnvState state;
  int observation = 0;
};

/// One column-stochastic m x m matrix per action, column = source state.
std::vector<Eigen::MatrixXd> ground_truth_transitions(const GridSpec& spec);

StepOutcome reset(const GridSpec& spec);
StepOutcome step(const EnvState& env, int action, const GridSpec& spec);

/// Thin stateful wrapper used by the agent loop.
class GridEnv {
 public:
  explicit GridEnv(GridSpec spec);

  int reset();
  int step(int action);
  const EnvState& state() const { return state_; }
  const GridSpec& spec() const { return spec_; }

 private:
  GridSpec spec_;
  EnvState state_;
};

/// Named grid layouts. "gridw9" (3x3, top-left to bottom-right) is built in.
class LayoutRegistry {
 public:
  LayoutRegistry();

  /// Throws std::out_of_range listing the known names.
  const GridSpec& get(const std::string& name) const;
  bool contains(const std::string& name) const { return layouts_.count(name) != 0; }
  void add(const std::string& name, const GridSpec& spec);
  /// Reads a JSON object mapping name -> {width, height, start, goal}.
  void load_file(const std::filesystem::path& path);
  std::vector<std::string> names() const;

 private:
  std::map<std::string, GridSpec> layouts_;
};

}  // namespace aif
