#include "aif/efe.hpp"

#include "aif/errors.hpp"
#include "aif/inference.hpp"

#include <algorithm>
#include <stdexcept>

namespace aif {

double risk(const Categorical& q_pred, const Categorical& preference) { return kl_divergence(q_pred, preference); }

double ambiguity(const Categorical& q_pred, const Eigen::MatrixXd& a_matrix) {
  if (static_cast<Eigen::Index>(q_pred.size()) != a_matrix.cols())
    throw std::invalid_argument("ambiguity: state count mismatch");
  double h = 0.0;
  for (Eigen::Index j = 0; j < a_matrix.cols(); ++j) {
    const double w = q_pred[static_cast<std::size_t>(j)];
    if (w == 0.0) continue;
    h += w * entropy(Categorical::normalized(a_matrix.col(j)));
  }
  return h;
}

double b_novelty(const GenerativeModel& model, const Categorical& q_pred, const Categorical& q_prev, int action) {
  if (action < 0 || action >= model.num_actions()) throw std::invalid_argument("b_novelty: action out of range");
  const Eigen::MatrixXd& counts = model.b_counts()[static_cast<std::size_t>(action)];
  double total = 0.0;
  for (Eigen::Index j = 0; j < counts.cols(); ++j) {
    const double wj = q_prev[static_cast<std::size_t>(j)];
    if (wj == 0.0) continue;
    const DirichletVector prior(counts.col(j));
    for (Eigen::Index i = 0; i < counts.rows(); ++i) {
      const double wi = q_pred[static_cast<std::size_t>(i)];
      if (wi == 0.0) continue;
      Eigen::VectorXd post = counts.col(j);
      post[i] += 1.0;
      total += wi * wj * dirichlet_kl(DirichletVector(std::move(post)), prior);
    }
  }
  return total;
}

PolicyEfe total_efe(const GenerativeModel& model, const PreferenceSchedule& schedule, const BeliefState& beliefs,
                    std::size_t k, int tau) {
  return total_efe(model, ModelTables(model), schedule, beliefs, k, tau);
}

PolicyEfe total_efe(const GenerativeModel& model, const ModelTables& tables, const PreferenceSchedule& schedule,
                    const BeliefState& beliefs, std::size_t k, int tau) {
  const int T = model.episode_len();
  if (tau < 1 || tau > T) throw InvalidState("total_efe: step outside the episode");
  if (schedule.episode_len() != T) throw std::invalid_argument("total_efe: schedule length differs from T");
  const Policy& policy = model.policies().at(k);
  const int last = std::min(tau + model.horizon(), T);

  PolicyEfe out;
  Eigen::VectorXd prev = beliefs.q_states.at(k).at(static_cast<std::size_t>(tau - 1)).probs();
  // Zero-based slot t is step t + 1; the transition into it uses action t - 1.
  for (int t = tau; t < last; ++t) {
    const int a = policy.actions[static_cast<std::size_t>(t - 1)];
    const Eigen::VectorXd pred = tables.expected_b[static_cast<std::size_t>(a)] * prev;
    const Categorical q = Categorical::normalized(pred);
    EfeBreakdown step;
    step.risk = risk(q, schedule.at(t));
    step.ambiguity = q.probs().dot(tables.a_entropy);
    step.a_novelty = 0.0;
    step.b_novelty = q.probs().dot(tables.info_gain[static_cast<std::size_t>(a)] * prev);
    out.total += step.total();
    out.steps.push_back(step);
    prev = q.probs();
  }
  return out;
}

}  // namespace aif
