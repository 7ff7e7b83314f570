#pragma once

// The perception / planning / action loop of an action-unaware agent, plus
// end-of-episode transition learning.

#include "aif/beliefs.hpp"
#include "aif/efe.hpp"
#include "aif/gridworld.hpp"
#include "aif/model.hpp"
#include "aif/preferences.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace aif {

/// Bayesian model average: argmax of the action marginal under Q(pi).
enum class ActionRule { kBma };

/// Which expected free energy acts as the policy prior when the terminal
/// posterior (the one used for learning) is formed at step T.
enum class TerminalPrior {
  /// softmax(-F) only; no planning term is left at the last step.
  kNone,
  /// The G vector computed at the first step of the episode.
  kFirstStep,
  /// The G vector computed at the last planning step (T - 1).
  kLastStep,
};

/// Which policy weighting apportions each observed transition among the
/// candidate action labels when B is learned.
enum class CreditAssignment {
  /// The terminal posterior Q(pi) weights every transition.
  kTerminal,
  /// The transition out of step t is weighted by the Q(pi) the agent acted
  /// on at step t.
  kDecision,
};

CreditAssignment parse_credit_assignment(std::string_view name);
std::string_view credit_assignment_name(CreditAssignment c);

TerminalPrior parse_terminal_prior(std::string_view name);
std::string_view terminal_prior_name(TerminalPrior p);

struct AgentConfig {
  GenerativeModel model;
  PreferenceSchedule schedule;
  LearningConfig learning;
  int inf_steps = 10;
  /// Multiplier on G inside the policy posterior; 1 gives softmax(-G - F).
  double policy_precision = 1.0;
  ActionRule action_rule = ActionRule::kBma;
  TerminalPrior terminal_prior = TerminalPrior::kFirstStep;
  CreditAssignment credit = CreditAssignment::kDecision;
  std::uint64_t rng_seed = 0;
  /// Goal tile used for the success flag.
  int goal_state = 0;
  /// Track F across VMP sweeps (costs one extra F evaluation per sweep).
  bool monitor_fe = false;
};

struct StepRecord {
  int step = 0;
  int observation = 0;
  Categorical action_marginals;
  int chosen_action = 0;
  Categorical q_policy;
  Eigen::VectorXd fe;
  Eigen::VectorXd efe;
  /// [policy][future step] breakdown of efe.
  std::vector<std::vector<EfeBreakdown>> efe_breakdowns;
};

struct EpisodeTrace {
  int run_id = 0;
  int episode_id = 0;
  std::vector<int> observations;
  std::vector<int> actions;
  bool success = false;
  std::vector<StepRecord> steps;
  /// F of every policy after the final VMP pass with all T observations.
  Eigen::VectorXd final_fe;
  Categorical final_q_policy;
  /// Per-action sum over columns of KL(ground truth || learned), after this
  /// episode's update. Filled in by the harness.
  std::vector<double> b_kl;
  double max_fe_increase = 0.0;
};

/// Sum of Q(pi_k) over the policies whose action at `step` (1-based) is a.
Categorical action_marginals(const std::vector<Policy>& policies, const Categorical& q_policy, int step,
                             int num_actions);

class Agent {
 public:
  explicit Agent(AgentConfig config);

  /// Records the observation for step tau, infers states, scores every
  /// policy, updates Q(pi) and picks the next action. Throws InvalidState
  /// once T - 1 observations have been consumed (use end_episode).
  StepRecord act_step(int observation);

  /// Consumes o_T, runs the final VMP pass, learns B if enabled and resets
  /// the beliefs for the next episode. Throws InvalidState unless exactly
  /// T - 1 observations preceded it.
  EpisodeTrace end_episode(int final_observation);

  /// reset, T - 1 act/step exchanges, end_episode.
  EpisodeTrace run_episode(GridEnv& env);

  const GenerativeModel& model() const { return config_.model; }
  const BeliefState& beliefs() const { return beliefs_; }
  const AgentConfig& config() const { return config_; }
  int current_step() const { return beliefs_.current_step; }

 private:
  void record_observation(int observation);
  void reset_beliefs();

  AgentConfig config_;
  ModelTables tables_;
  BeliefState beliefs_;
  std::vector<StepRecord> pending_;
  std::optional<Eigen::VectorXd> terminal_efe_;
  double max_fe_increase_ = 0.0;
};

}  // namespace aif
