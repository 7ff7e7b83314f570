#pragma once

// Preference distributions over states: soft (Manhattan-distance kernel) or
// hard (near-delta) goals, either one fixed distribution for the whole episode
// or one per time step following a waypoint path.

#include "aif/gridworld.hpp"
#include "aif/math.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace aif {

/// Mass left on every non-target state by a hard preference.
inline constexpr double kHardEpsilon = 1e-5;

enum class GoalStrength { kSoft, kHard };

struct PreferenceKind {
  GoalStrength strength = GoalStrength::kHard;
  bool shaped = true;

  friend bool operator==(const PreferenceKind&, const PreferenceKind&) = default;
};

/// "states_manh" / "states" flag values.
GoalStrength parse_pref_type(std::string_view value);
std::string_view pref_type_name(GoalStrength s);
/// "all_diff" (shaped) / "all_goal" (unshaped) flag values.
bool parse_pref_loc(std::string_view value);
std::string_view pref_loc_name(bool shaped);

/// Waypoints for t = 1..T; the first is where the agent should be at the
/// start of the episode, the last is the goal.
struct GoalPath {
  std::vector<int> waypoints;

  /// Throws std::invalid_argument unless the path has length T, ends at the
  /// goal and every consecutive pair is connected by one grid action.
  void validate(const GridSpec& spec, int episode_len) const;
};

/// Horizontal moves first, then vertical, padded with the goal.
GoalPath default_goal_path(const GridSpec& spec, int episode_len);

/// Builds and validates a path from tiles. A list one shorter than the
/// episode is taken to omit the start tile.
GoalPath make_goal_path(std::vector<int> tiles, const GridSpec& spec, int episode_len);

/// Parses "1,2,5,8" style tile lists. A list one shorter than the episode is
/// taken to omit the start tile.
GoalPath parse_goal_path(std::string_view text, const GridSpec& spec, int episode_len);

Categorical soft_preference(int target, const GridSpec& spec, double temperature = 1.0);
Categorical hard_preference(int target, int num_states);

struct PreferenceSchedule {
  std::vector<Categorical> per_step;
  PreferenceKind kind;

  const Categorical& at(int t) const { return per_step.at(static_cast<std::size_t>(t)); }
  int episode_len() const { return static_cast<int>(per_step.size()); }
};

/// Shaped kinds need a path (validated against the grid); unshaped kinds use
/// the goal at every step and ignore `path`.
PreferenceSchedule build_schedule(PreferenceKind kind, const GridSpec& spec, int episode_len,
                                  const std::optional<GoalPath>& path);

}  // namespace aif
