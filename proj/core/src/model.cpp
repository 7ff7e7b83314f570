#include "aif/model.hpp"

#include "aif/gridworld.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>
#include <string>

namespace aif {

BeliefState BeliefState::uniform(std::size_t num_policies, int episode_len, std::size_t num_states) {
  BeliefState b;
  const Categorical u = Categorical::uniform(num_states);
  b.q_states.assign(num_policies, std::vector<Categorical>(static_cast<std::size_t>(episode_len), u));
  b.q_policy = Categorical::uniform(num_policies);
  return b;
}

void LearningConfig::validate() const {
  if (!(eta > 0.0)) throw std::invalid_argument("LearningConfig: eta must be positive");
  if (!(b_init > 0.0)) throw std::invalid_argument("LearningConfig: b_init must be positive");
  if (b_jitter < 0.0) throw std::invalid_argument("LearningConfig: b_jitter must be non-negative");
}

std::vector<Policy> enumerate_policies(int num_actions, int horizon, int limit) {
  if (num_actions <= 0 || horizon <= 0 || limit <= 0)
    throw std::invalid_argument("enumerate_policies: arguments must be positive");
  long long total = 1;
  for (int i = 0; i < horizon; ++i) {
    total *= num_actions;
    if (total > (1LL << 40)) break;
  }
  if (limit > total)
    throw std::invalid_argument("enumerate_policies: limit " + std::to_string(limit) + " exceeds " +
                                std::to_string(total) + " possible sequences");
  std::vector<Policy> out;
  out.reserve(static_cast<std::size_t>(limit));
  for (int k = 0; k < limit; ++k) {
    Policy p{k, std::vector<int>(static_cast<std::size_t>(horizon))};
    int rest = k;
    for (int slot = horizon - 1; slot >= 0; --slot) {
      p.actions[static_cast<std::size_t>(slot)] = rest % num_actions;
      rest /= num_actions;
    }
    out.push_back(std::move(p));
  }
  return out;
}

bool is_task_solving(const Policy& policy, const GridSpec& spec) {
  int s = spec.start;
  for (int a : policy.actions) s = spec.next_state(s, action_from_index(a));
  return s == spec.goal;
}

GenerativeModel::GenerativeModel(Eigen::MatrixXd a_matrix, std::vector<Eigen::MatrixXd> b_counts,
                                 Categorical d_prior, std::vector<Policy> policies, int horizon,
                                 int episode_len)
    : a_matrix_(std::move(a_matrix)),
      b_counts_(std::move(b_counts)),
      d_prior_(std::move(d_prior)),
      policies_(std::move(policies)),
      horizon_(horizon),
      episode_len_(episode_len) {
  validate();
}

void GenerativeModel::validate() const {
  if (b_counts_.empty()) throw std::invalid_argument("GenerativeModel: no actions");
  const Eigen::Index m = b_counts_.front().rows();
  if (a_matrix_.cols() != m) throw std::invalid_argument("GenerativeModel: A has wrong number of columns");
  for (Eigen::Index j = 0; j < a_matrix_.cols(); ++j) {
    if ((a_matrix_.col(j).array() < 0.0).any() || std::abs(a_matrix_.col(j).sum() - 1.0) > kNormTolerance)
      throw std::invalid_argument("GenerativeModel: A columns must be categorical");
  }
  for (const auto& b : b_counts_) {
    if (b.rows() != m || b.cols() != m) throw std::invalid_argument("GenerativeModel: B must be m x m per action");
    if (!(b.array() > 0.0).all() || !b.allFinite())
      throw std::invalid_argument("GenerativeModel: B counts must be positive");
  }
  if (static_cast<Eigen::Index>(d_prior_.size()) != m)
    throw std::invalid_argument("GenerativeModel: d_prior has wrong size");
  if (episode_len_ <= 0 || horizon_ <= 0) throw std::invalid_argument("GenerativeModel: H and T must be positive");
  if (horizon_ > episode_len_ || horizon_ < episode_len_ - 1)
    throw std::invalid_argument("GenerativeModel: horizon must be T-1 or T");
  if (policies_.empty()) throw std::invalid_argument("GenerativeModel: empty policy set");
  double bound = 1.0;
  for (int i = 0; i < horizon_; ++i) bound *= static_cast<double>(b_counts_.size());
  if (static_cast<double>(policies_.size()) > bound)
    throw std::invalid_argument("GenerativeModel: more policies than |A|^H");
  for (const auto& p : policies_) {
    if (static_cast<int>(p.actions.size()) != horizon_)
      throw std::invalid_argument("GenerativeModel: policy length differs from horizon");
    for (int a : p.actions)
      if (a < 0 || a >= num_actions()) throw std::invalid_argument("GenerativeModel: policy action out of range");
  }
}

GenerativeModel GenerativeModel::for_grid(const GridSpec& spec, std::vector<Policy> policies, int episode_len,
                                          const LearningConfig& learning, std::uint64_t seed) {
  learning.validate();
  const int m = spec.num_states();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(0.0, 1.0);
  std::vector<Eigen::MatrixXd> counts;
  for (std::size_t a = 0; a < kNumGridActions; ++a) {
    Eigen::MatrixXd b = Eigen::MatrixXd::Constant(m, m, learning.b_init);
    if (learning.b_jitter > 0.0) {
      for (Eigen::Index j = 0; j < b.cols(); ++j)
        for (Eigen::Index i = 0; i < b.rows(); ++i) b(i, j) += learning.b_jitter * jitter(rng);
    }
    counts.push_back(std::move(b));
  }
  const int horizon = policies.empty() ? episode_len - 1 : static_cast<int>(policies.front().actions.size());
  return GenerativeModel(Eigen::MatrixXd::Identity(m, m), std::move(counts),
                         Categorical::uniform(static_cast<std::size_t>(m)), std::move(policies), horizon,
                         episode_len);
}

Eigen::MatrixXd GenerativeModel::expected_b(int action) const {
  const Eigen::MatrixXd& c = b_counts_.at(static_cast<std::size_t>(action));
  return c.array().rowwise() / c.colwise().sum().array();
}

Eigen::MatrixXd GenerativeModel::expected_log_b(int action) const {
  const Eigen::MatrixXd& c = b_counts_.at(static_cast<std::size_t>(action));
  Eigen::MatrixXd out(c.rows(), c.cols());
  for (Eigen::Index j = 0; j < c.cols(); ++j) {
    const double psi_total = digamma(c.col(j).sum());
    for (Eigen::Index i = 0; i < c.rows(); ++i) out(i, j) = digamma(c(i, j)) - psi_total;
  }
  return out;
}

GenerativeModel GenerativeModel::with_b_counts(std::vector<Eigen::MatrixXd> counts) const {
  return GenerativeModel(a_matrix_, std::move(counts), d_prior_, policies_, horizon_, episode_len_);
}

ModelTables::ModelTables(const GenerativeModel& model) {
  const int m = model.num_states();
  for (int a = 0; a < model.num_actions(); ++a) {
    expected_b.push_back(model.expected_b(a));
    expected_log_b.push_back(model.expected_log_b(a));
    const Eigen::MatrixXd& c = model.b_counts()[static_cast<std::size_t>(a)];
    Eigen::MatrixXd gain(m, m);
    for (Eigen::Index j = 0; j < m; ++j) gain.col(j) = one_count_information_gain(c.col(j));
    info_gain.push_back(std::move(gain));
  }
  const Eigen::MatrixXd& a_mat = model.a_matrix();
  log_a = a_mat.unaryExpr([](double p) { return safe_log(p); });
  a_entropy.resize(a_mat.cols());
  for (Eigen::Index j = 0; j < a_mat.cols(); ++j) {
    double h = 0.0;
    for (Eigen::Index i = 0; i < a_mat.rows(); ++i)
      if (a_mat(i, j) > 0.0) h -= a_mat(i, j) * std::log(a_mat(i, j));
    a_entropy[j] = h;
  }
  log_d = model.d_prior().probs().unaryExpr([](double p) { return safe_log(p); });
}

GenerativeModel update_b_counts(const GenerativeModel& model, const BeliefState& beliefs,
                                const LearningConfig& cfg) {
  const std::vector<Categorical> weights(static_cast<std::size_t>(std::max(model.episode_len() - 1, 0)),
                                         beliefs.q_policy);
  return update_b_counts(model, beliefs, cfg, weights);
}

GenerativeModel update_b_counts(const GenerativeModel& model, const BeliefState& beliefs, const LearningConfig& cfg,
                                const std::vector<Categorical>& transition_weights) {
  cfg.validate();
  if (!cfg.learn_b) return model;
  const auto& policies = model.policies();
  const int T = model.episode_len();
  if (beliefs.num_policies() != policies.size() || beliefs.episode_len() != T)
    throw std::invalid_argument("update_b_counts: belief shape does not match the model");
  if (static_cast<int>(transition_weights.size()) != T - 1)
    throw std::invalid_argument("update_b_counts: need one policy weighting per transition");
  std::vector<Eigen::MatrixXd> counts = model.b_counts();
  for (int t = 1; t < T; ++t) {
    const Categorical& w = transition_weights[static_cast<std::size_t>(t - 1)];
    if (w.size() != policies.size()) throw std::invalid_argument("update_b_counts: weighting has wrong size");
    for (std::size_t k = 0; k < policies.size(); ++k) {
      const double scale = cfg.eta * w[k];
      if (scale == 0.0) continue;
      const auto& qs = beliefs.q_states[k];
      const int a = policies[k].actions[static_cast<std::size_t>(t - 1)];
      counts[static_cast<std::size_t>(a)].noalias() +=
          scale * qs[static_cast<std::size_t>(t)].probs() * qs[static_cast<std::size_t>(t - 1)].probs().transpose();
    }
  }
  return model.with_b_counts(std::move(counts));
}

}  // namespace aif
