#include "aif/gridworld.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <stdexcept>
#include <string>

namespace aif {

std::string_view action_name(Action a) {
  switch (a) {
    case Action::kRight: return "right";
    case Action::kDown: return "down";
    case Action::kLeft: return "left";
    case Action::kUp: return "up";
  }
  return "?";
}

Action action_from_index(int index) {
  if (index < 0 || index >= static_cast<int>(kNumGridActions))
    throw std::invalid_argument("unknown action index " + std::to_string(index));
  return static_cast<Action>(index);
}

void GridSpec::validate() const {
  if (width <= 0 || height <= 0) throw std::invalid_argument("GridSpec: width and height must be positive");
  if (start < 0 || start >= num_states()) throw std::invalid_argument("GridSpec: start tile out of range");
  if (goal < 0 || goal >= num_states()) throw std::invalid_argument("GridSpec: goal tile out of range");
}

int GridSpec::next_state(int state, Action action) const {
  int r = row(state);
  int c = col(state);
  switch (action) {
    case Action::kRight: c = std::min(c + 1, width - 1); break;
    case Action::kDown: r = std::min(r + 1, height - 1); break;
    case Action::kLeft: c = std::max(c - 1, 0); break;
    case Action::kUp: r = std::max(r - 1, 0); break;
  }
  return r * width + c;
}

int GridSpec::manhattan(int a, int b) const {
  return std::abs(row(a) - row(b)) + std::abs(col(a) - col(b));
}

std::vector<Eigen::MatrixXd> ground_truth_transitions(const GridSpec& spec) {
  spec.validate();
  const int m = spec.num_states();
  std::vector<Eigen::MatrixXd> out;
  out.reserve(kNumGridActions);
  for (Action a : kAllActions) {
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(m, m);
    for (int s = 0; s < m; ++s) b(spec.next_state(s, a), s) = 1.0;
    out.push_back(std::move(b));
  }
  return out;
}

StepOutcome reset(const GridSpec& spec) {
  spec.validate();
  return {EnvState{spec.start, 0}, spec.start};
}

StepOutcome step(const EnvState& env, int action, const GridSpec& spec) {
  const Action a = action_from_index(action);
  const int next = spec.next_state(env.current, a);
  return {EnvState{next, env.step_count + 1}, next};
}

GridEnv::GridEnv(GridSpec spec) : spec_(spec) { spec_.validate(); }

int GridEnv::reset() {
  const StepOutcome out = aif::reset(spec_);
  state_ = out.state;
  return out.observation;
}

int GridEnv::step(int action) {
  const StepOutcome out = aif::step(state_, action, spec_);
  state_ = out.state;
  return out.observation;
}

LayoutRegistry::LayoutRegistry() { layouts_.emplace("gridw9", GridSpec{3, 3, 0, 8}); }

const GridSpec& LayoutRegistry::get(const std::string& name) const {
  auto it = layouts_.find(name);
  if (it == layouts_.end()) {
    std::string known;
    for (const auto& [k, v] : layouts_) known += (known.empty() ? "" : ", ") + k;
    throw std::out_of_range("unknown env layout '" + name + "' (known: " + known + ")");
  }
  return it->second;
}

void LayoutRegistry::add(const std::string& name, const GridSpec& spec) {
  spec.validate();
  layouts_[name] = spec;
}

void LayoutRegistry::load_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open layout file " + path.string());
  const nlohmann::json j = nlohmann::json::parse(in);
  for (const auto& [name, v] : j.items()) {
    add(name, GridSpec{v.at("width").get<int>(), v.at("height").get<int>(), v.at("start").get<int>(),
                       v.at("goal").get<int>()});
  }
}

std::vector<std::string> LayoutRegistry::names() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : layouts_) out.push_back(k);
  return out;
}

}  // namespace aif
