#include "aif/preferences.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace aif {

GoalStrength parse_pref_type(std::string_view value) {
  if (value == "states_manh") return GoalStrength::kSoft;
  if (value == "states") return GoalStrength::kHard;
  throw std::invalid_argument("unknown pref_type '" + std::string(value) + "' (allowed: states, states_manh)");
}

std::string_view pref_type_name(GoalStrength s) { return s == GoalStrength::kSoft ? "states_manh" : "states"; }

bool parse_pref_loc(std::string_view value) {
  if (value == "all_diff") return true;
  if (value == "all_goal") return false;
  throw std::invalid_argument("unknown pref_loc '" + std::string(value) + "' (allowed: all_diff, all_goal)");
}

std::string_view pref_loc_name(bool shaped) { return shaped ? "all_diff" : "all_goal"; }

void GoalPath::validate(const GridSpec& spec, int episode_len) const {
  if (static_cast<int>(waypoints.size()) != episode_len)
    throw std::invalid_argument("goal path must have one waypoint per time step (" + std::to_string(episode_len) +
                                "), got " + std::to_string(waypoints.size()));
  for (int w : waypoints)
    if (w < 0 || w >= spec.num_states()) throw std::invalid_argument("goal path tile out of range");
  if (waypoints.back() != spec.goal) throw std::invalid_argument("goal path must end at the goal tile");
  for (std::size_t i = 1; i < waypoints.size(); ++i) {
    bool reachable = false;
    for (Action a : kAllActions) reachable |= spec.next_state(waypoints[i - 1], a) == waypoints[i];
    if (!reachable)
      throw std::invalid_argument("goal path tiles " + std::to_string(waypoints[i - 1]) + " -> " +
                                  std::to_string(waypoints[i]) + " are not one move apart");
  }
}

GoalPath default_goal_path(const GridSpec& spec, int episode_len) {
  GoalPath path;
  int s = spec.start;
  path.waypoints.push_back(s);
  while (static_cast<int>(path.waypoints.size()) < episode_len) {
    if (spec.col(s) < spec.col(spec.goal)) s = spec.next_state(s, Action::kRight);
    else if (spec.col(s) > spec.col(spec.goal)) s = spec.next_state(s, Action::kLeft);
    else if (spec.row(s) < spec.row(spec.goal)) s = spec.next_state(s, Action::kDown);
    else if (spec.row(s) > spec.row(spec.goal)) s = spec.next_state(s, Action::kUp);
    path.waypoints.push_back(s);
  }
  if (path.waypoints.back() != spec.goal)
    throw std::invalid_argument("goal is farther than the episode length allows");
  return path;
}

GoalPath parse_goal_path(std::string_view text, const GridSpec& spec, int episode_len) {
  GoalPath path;
  while (!text.empty()) {
    const auto comma = text.find(',');
    std::string_view item = text.substr(0, comma);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    int v = 0;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (ec != std::errc() || ptr != item.data() + item.size())
      throw std::invalid_argument("invalid tile '" + std::string(item) + "' in path");
    path.waypoints.push_back(v);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return make_goal_path(std::move(path.waypoints), spec, episode_len);
}

GoalPath make_goal_path(std::vector<int> tiles, const GridSpec& spec, int episode_len) {
  GoalPath path{std::move(tiles)};
  if (static_cast<int>(path.waypoints.size()) == episode_len - 1)
    path.waypoints.insert(path.waypoints.begin(), spec.start);
  path.validate(spec, episode_len);
  return path;
}

Categorical soft_preference(int target, const GridSpec& spec, double temperature) {
  if (target < 0 || target >= spec.num_states()) throw std::invalid_argument("soft_preference: target out of range");
  if (!(temperature > 0.0)) throw std::invalid_argument("soft_preference: temperature must be positive");
  Eigen::VectorXd logits(spec.num_states());
  for (int s = 0; s < spec.num_states(); ++s) logits[s] = -spec.manhattan(s, target) / temperature;
  return softmax(logits);
}

Categorical hard_preference(int target, int num_states) {
  if (num_states <= 0 || target < 0 || target >= num_states)
    throw std::invalid_argument("hard_preference: target out of range");
  Eigen::VectorXd p = Eigen::VectorXd::Constant(num_states, kHardEpsilon);
  p[target] = 1.0 - (num_states - 1) * kHardEpsilon;
  return Categorical(std::move(p));
}

PreferenceSchedule build_schedule(PreferenceKind kind, const GridSpec& spec, int episode_len,
                                  const std::optional<GoalPath>& path) {
  spec.validate();
  if (episode_len <= 0) throw std::invalid_argument("build_schedule: episode length must be positive");
  auto make = [&](int target) {
    return kind.strength == GoalStrength::kSoft ? soft_preference(target, spec)
                                                : hard_preference(target, spec.num_states());
  };
  PreferenceSchedule schedule;
  schedule.kind = kind;
  if (kind.shaped) {
    if (!path) throw std::invalid_argument("build_schedule: shaped preferences need a goal path");
    path->validate(spec, episode_len);
    for (int w : path->waypoints) schedule.per_step.push_back(make(w));
  } else {
    schedule.per_step.assign(static_cast<std::size_t>(episode_len), make(spec.goal));
  }
  return schedule;
}

}  // namespace aif
