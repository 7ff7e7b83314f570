#include "aif/agent.hpp"

#include "aif/errors.hpp"
#include "aif/inference.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace aif {

CreditAssignment parse_credit_assignment(std::string_view name) {
  if (name == "terminal") return CreditAssignment::kTerminal;
  if (name == "decision") return CreditAssignment::kDecision;
  throw std::invalid_argument("unknown credit assignment '" + std::string(name) + "' (allowed: terminal, decision)");
}

std::string_view credit_assignment_name(CreditAssignment c) {
  return c == CreditAssignment::kTerminal ? "terminal" : "decision";
}

TerminalPrior parse_terminal_prior(std::string_view name) {
  if (name == "none") return TerminalPrior::kNone;
  if (name == "first") return TerminalPrior::kFirstStep;
  if (name == "last") return TerminalPrior::kLastStep;
  throw std::invalid_argument("unknown terminal prior '" + std::string(name) + "' (allowed: none, first, last)");
}

std::string_view terminal_prior_name(TerminalPrior p) {
  switch (p) {
    case TerminalPrior::kNone: return "none";
    case TerminalPrior::kFirstStep: return "first";
    case TerminalPrior::kLastStep: return "last";
  }
  return "?";
}

Categorical action_marginals(const std::vector<Policy>& policies, const Categorical& q_policy, int step,
                             int num_actions) {
  if (q_policy.size() != policies.size()) throw std::invalid_argument("action_marginals: size mismatch");
  Eigen::VectorXd mass = Eigen::VectorXd::Zero(num_actions);
  for (std::size_t k = 0; k < policies.size(); ++k)
    mass[policies[k].actions.at(static_cast<std::size_t>(step - 1))] += q_policy[k];
  return Categorical::normalized(mass);
}

Agent::Agent(AgentConfig config) : config_(std::move(config)), tables_(config_.model) {
  if (config_.inf_steps < 1) throw std::invalid_argument("AgentConfig: inf_steps must be at least 1");
  if (!(config_.policy_precision > 0.0)) throw std::invalid_argument("AgentConfig: policy_precision must be positive");
  if (config_.schedule.episode_len() != config_.model.episode_len())
    throw std::invalid_argument("AgentConfig: schedule length differs from the episode length");
  config_.learning.validate();
  reset_beliefs();
}

void Agent::reset_beliefs() {
  beliefs_ = BeliefState::uniform(config_.model.policies().size(), config_.model.episode_len(),
                                  static_cast<std::size_t>(config_.model.num_states()));
  pending_.clear();
  terminal_efe_.reset();
  max_fe_increase_ = 0.0;
}

void Agent::record_observation(int observation) {
  if (observation < 0 || observation >= config_.model.num_observations())
    throw std::invalid_argument("observation index out of range");
  beliefs_.observations.push_back(observation);
  beliefs_.current_step += 1;
}

StepRecord Agent::act_step(int observation) {
  const int T = config_.model.episode_len();
  if (beliefs_.current_step >= T - 1)
    throw InvalidState("act_step called after the last action of the episode; call end_episode");
  record_observation(observation);
  const int tau = beliefs_.current_step;
  const auto& policies = config_.model.policies();

  const VmpResult vmp = vmp_update_states(config_.model, tables_, beliefs_, config_.inf_steps, config_.monitor_fe);
  max_fe_increase_ = std::max(max_fe_increase_, vmp.max_fe_increase);

  StepRecord rec;
  rec.step = tau;
  rec.observation = observation;
  rec.fe = vmp.fe;
  rec.efe.resize(static_cast<Eigen::Index>(policies.size()));
  rec.efe_breakdowns.reserve(policies.size());
  for (std::size_t k = 0; k < policies.size(); ++k) {
    PolicyEfe g = total_efe(config_.model, tables_, config_.schedule, beliefs_, k, tau);
    rec.efe[static_cast<Eigen::Index>(k)] = g.total;
    rec.efe_breakdowns.push_back(std::move(g.steps));
  }
  beliefs_.q_policy = update_policy_posterior(rec.fe, config_.policy_precision * rec.efe);
  rec.q_policy = beliefs_.q_policy;
  rec.action_marginals = action_marginals(policies, rec.q_policy, tau, config_.model.num_actions());
  rec.chosen_action = static_cast<int>(rec.action_marginals.argmax());

  if (config_.terminal_prior == TerminalPrior::kLastStep || !terminal_efe_) terminal_efe_ = rec.efe;
  pending_.push_back(rec);
  return rec;
}

EpisodeTrace Agent::end_episode(int final_observation) {
  const int T = config_.model.episode_len();
  if (beliefs_.current_step != T - 1)
    throw InvalidState("end_episode requires exactly T - 1 prior observations, got " +
                       std::to_string(beliefs_.current_step));
  record_observation(final_observation);

  const VmpResult vmp = vmp_update_states(config_.model, tables_, beliefs_, config_.inf_steps, config_.monitor_fe);
  max_fe_increase_ = std::max(max_fe_increase_, vmp.max_fe_increase);
  Eigen::VectorXd prior = Eigen::VectorXd::Zero(vmp.fe.size());
  if (config_.terminal_prior != TerminalPrior::kNone && terminal_efe_) prior = config_.policy_precision * *terminal_efe_;
  beliefs_.q_policy = update_policy_posterior(vmp.fe, prior);

  EpisodeTrace trace;
  trace.observations = beliefs_.observations;
  for (const auto& s : pending_) trace.actions.push_back(s.chosen_action);
  trace.success = final_observation == config_.goal_state;
  trace.steps = std::move(pending_);
  trace.final_fe = vmp.fe;
  trace.final_q_policy = beliefs_.q_policy;
  trace.max_fe_increase = max_fe_increase_;

  if (config_.learning.learn_b) {
    if (config_.credit == CreditAssignment::kDecision) {
      std::vector<Categorical> weights;
      for (const auto& s : trace.steps) weights.push_back(s.q_policy);
      config_.model = update_b_counts(config_.model, beliefs_, config_.learning, weights);
    } else {
      config_.model = update_b_counts(config_.model, beliefs_, config_.learning);
    }
    tables_ = ModelTables(config_.model);
  }
  reset_beliefs();
  return trace;
}

EpisodeTrace Agent::run_episode(GridEnv& env) {
  if (beliefs_.current_step != 0) throw InvalidState("run_episode called mid-episode");
  int obs = env.reset();
  const int T = config_.model.episode_len();
  for (int t = 1; t < T; ++t) {
    const StepRecord rec = act_step(obs);
    obs = env.step(rec.chosen_action);
  }
  return end_episode(obs);
}

}  // namespace aif
