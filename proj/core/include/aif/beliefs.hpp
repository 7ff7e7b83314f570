#pragma once

#include "aif/math.hpp"

#include <cstddef>
#include <vector>

namespace aif {

/// Variational beliefs held by the agent within one episode.
///
/// `q_states[k][t]` is Q(S_{t+1} | pi_k) (time is zero-based in storage),
/// `q_policy` is Q(pi), `current_step` is the number of observations received
/// so far (0 before the first observation, T after the last one).
struct BeliefState {
  std::vector<std::vector<Categorical>> q_states;
  Categorical q_policy;
  int current_step = 0;
  std::vector<int> observations;

  /// Uniform beliefs for every policy and time step, no observations.
  static BeliefState uniform(std::size_t num_policies, int episode_len, std::size_t num_states);

  std::size_t num_policies() const { return q_states.size(); }
  int episode_len() const { return q_states.empty() ? 0 : static_cast<int>(q_states.front().size()); }
};

}  // namespace aif
