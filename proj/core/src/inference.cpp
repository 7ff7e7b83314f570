#include "aif/inference.hpp"

#include "aif/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace aif {
namespace {

void check_shape(const GenerativeModel& model, const BeliefState& beliefs) {
  const int T = model.episode_len();
  if (beliefs.current_step < 0 || beliefs.current_step > T)
    throw InvalidState("beliefs are at step " + std::to_string(beliefs.current_step) + " of a " +
                       std::to_string(T) + "-step episode");
  if (static_cast<int>(beliefs.observations.size()) != beliefs.current_step)
    throw InvalidState("observation count does not match the current step");
  if (beliefs.num_policies() != model.policies().size() || beliefs.episode_len() != T)
    throw std::invalid_argument("belief state shape does not match the model");
  for (int o : beliefs.observations)
    if (o < 0 || o >= model.num_observations()) throw std::invalid_argument("observation index out of range");
}

// Action dictated by the policy for the transition t -> t + 1 (zero-based t).
int transition_action(const Policy& p, int t) { return p.actions[static_cast<std::size_t>(t)]; }

double neg_entropy(const Eigen::VectorXd& q) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < q.size(); ++i)
    if (q[i] > 0.0) s += q[i] * std::log(q[i]);
  return s;
}

// Free energy of one policy's trajectory given plain probability vectors.
double trajectory_fe(const ModelTables& tables, const Policy& policy, const std::vector<Eigen::VectorXd>& q,
                     const std::vector<int>& observations) {
  const int T = static_cast<int>(q.size());
  const int tau = static_cast<int>(observations.size());
  double f = 0.0;
  for (int t = 0; t < T; ++t) {
    const Eigen::VectorXd& qt = q[static_cast<std::size_t>(t)];
    f += neg_entropy(qt);
    if (t < tau) f -= qt.dot(tables.log_a.row(observations[static_cast<std::size_t>(t)]).transpose());
    if (t == 0) f -= qt.dot(tables.log_d);
    if (t >= 1) {
      const auto& elog = tables.expected_log_b[static_cast<std::size_t>(transition_action(policy, t - 1))];
      f -= qt.dot(elog * q[static_cast<std::size_t>(t - 1)]);
    }
  }
  return f;
}

}  // namespace

VmpResult vmp_update_states(const GenerativeModel& model, BeliefState& beliefs, int num_sweeps, bool monitor_fe) {
  return vmp_update_states(model, ModelTables(model), beliefs, num_sweeps, monitor_fe);
}

VmpResult vmp_update_states(const GenerativeModel& model, const ModelTables& tables, BeliefState& beliefs,
                            int num_sweeps, bool monitor_fe) {
  check_shape(model, beliefs);
  if (num_sweeps < 1) throw std::invalid_argument("vmp_update_states: need at least one sweep");
  const int T = model.episode_len();
  const int tau = beliefs.current_step;
  const int m = model.num_states();
  const auto& policies = model.policies();

  VmpResult result;
  result.fe.resize(static_cast<Eigen::Index>(policies.size()));
  std::vector<Eigen::VectorXd> q(static_cast<std::size_t>(T));
  Eigen::VectorXd logit(m);

  for (std::size_t k = 0; k < policies.size(); ++k) {
    const Policy& policy = policies[k];
    for (int t = 0; t < T; ++t) q[static_cast<std::size_t>(t)] = beliefs.q_states[k][static_cast<std::size_t>(t)].probs();
    double previous_fe = monitor_fe ? trajectory_fe(tables, policy, q, beliefs.observations) : 0.0;

    for (int sweep = 0; sweep < num_sweeps; ++sweep) {
      for (int t = 0; t < T; ++t) {
        logit.setZero();
        if (t < tau) logit += tables.log_a.row(beliefs.observations[static_cast<std::size_t>(t)]).transpose();
        if (t == 0) logit += tables.log_d;
        if (t >= 1)
          logit.noalias() += tables.expected_log_b[static_cast<std::size_t>(transition_action(policy, t - 1))] *
                             q[static_cast<std::size_t>(t - 1)];
        if (t + 1 < T)
          logit.noalias() +=
              tables.expected_log_b[static_cast<std::size_t>(transition_action(policy, t))].transpose() *
              q[static_cast<std::size_t>(t + 1)];
        Eigen::VectorXd& qt = q[static_cast<std::size_t>(t)];
        qt = (logit.array() - logit.maxCoeff()).exp();
        qt /= qt.sum();
      }
      if (monitor_fe) {
        const double fe = trajectory_fe(tables, policy, q, beliefs.observations);
        result.max_fe_increase = std::max(result.max_fe_increase, fe - previous_fe);
        previous_fe = fe;
      }
    }

    for (int t = 0; t < T; ++t)
      beliefs.q_states[k][static_cast<std::size_t>(t)] = Categorical(q[static_cast<std::size_t>(t)]);
    result.fe[static_cast<Eigen::Index>(k)] = trajectory_fe(tables, policy, q, beliefs.observations);
  }
  return result;
}

double policy_conditioned_fe(const GenerativeModel& model, const BeliefState& beliefs, std::size_t k) {
  return policy_conditioned_fe(model, ModelTables(model), beliefs, k);
}

double policy_conditioned_fe(const GenerativeModel& model, const ModelTables& tables, const BeliefState& beliefs,
                             std::size_t k) {
  check_shape(model, beliefs);
  std::vector<Eigen::VectorXd> q;
  for (const auto& c : beliefs.q_states.at(k)) q.push_back(c.probs());
  return trajectory_fe(tables, model.policies()[k], q, beliefs.observations);
}

Categorical update_policy_posterior(const Eigen::VectorXd& fe, const Eigen::VectorXd& efe) {
  if (fe.size() != efe.size()) throw std::invalid_argument("update_policy_posterior: length mismatch");
  return softmax(-efe - fe);
}

std::vector<Categorical> predict_states(const GenerativeModel& model, const BeliefState& beliefs, std::size_t k,
                                        int from_step) {
  return predict_states(model, ModelTables(model), beliefs, k, from_step);
}

std::vector<Categorical> predict_states(const GenerativeModel& model, const ModelTables& tables,
                                        const BeliefState& beliefs, std::size_t k, int from_step) {
  const int T = model.episode_len();
  if (from_step < 1 || from_step > T) throw InvalidState("predict_states: step outside the episode");
  const Policy& policy = model.policies().at(k);
  std::vector<Categorical> out;
  Eigen::VectorXd current = beliefs.q_states.at(k).at(static_cast<std::size_t>(from_step - 1)).probs();
  for (int t = from_step; t < T; ++t) {
    // Zero-based slot t receives the transition out of slot t - 1.
    current = tables.expected_b[static_cast<std::size_t>(transition_action(policy, t - 1))] * current;
    out.push_back(Categorical::normalized(current));
    current = out.back().probs();
  }
  return out;
}

}  // namespace aif
