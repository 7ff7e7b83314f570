#pragma once

// The agent's generative model: known emission matrix A, Dirichlet counts over
// the per-action transition matrices B, the initial-state prior, and the
// enumerated set of candidate policies.

#include "aif/beliefs.hpp"
#include "aif/math.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace aif {

struct GridSpec;

struct Policy {
  int id = 0;
  std::vector<int> actions;

  friend bool operator==(const Policy&, const Policy&) = default;
};

struct LearningConfig {
  bool learn_b = false;
  /// Dirichlet mass added per unit of posterior responsibility.
  double eta = 1.0;
  /// Initial concentration of every transition count.
  double b_init = 1.0;
  /// Width of the seeded uniform perturbation added to the initial counts.
  /// Zero gives exactly symmetric counts across actions.
  double b_jitter = 0.0;

  void validate() const;
};

/// Lexicographic enumeration with the last slot varying fastest.
/// Throws std::invalid_argument if limit exceeds num_actions^horizon.
std::vector<Policy> enumerate_policies(int num_actions, int horizon, int limit);

/// True when the action sequence moves `spec.start` to `spec.goal`.
bool is_task_solving(const Policy& policy, const GridSpec& spec);

class GenerativeModel {
 public:
  GenerativeModel() = default;
  GenerativeModel(Eigen::MatrixXd a_matrix, std::vector<Eigen::MatrixXd> b_counts, Categorical d_prior,
                  std::vector<Policy> policies, int horizon, int episode_len);

  /// Identity A, uniform initial-state prior, counts b_init (+ seeded jitter).
  static GenerativeModel for_grid(const GridSpec& spec, std::vector<Policy> policies, int episode_len,
                                  const LearningConfig& learning, std::uint64_t seed);

  const Eigen::MatrixXd& a_matrix() const { return a_matrix_; }
  const std::vector<Eigen::MatrixXd>& b_counts() const { return b_counts_; }
  const Categorical& d_prior() const { return d_prior_; }
  const std::vector<Policy>& policies() const { return policies_; }
  int horizon() const { return horizon_; }
  int episode_len() const { return episode_len_; }
  int num_states() const { return static_cast<int>(b_counts_.empty() ? 0 : b_counts_.front().rows()); }
  int num_observations() const { return static_cast<int>(a_matrix_.rows()); }
  int num_actions() const { return static_cast<int>(b_counts_.size()); }

  /// Column j is the Dirichlet mean of count column j of `action`.
  Eigen::MatrixXd expected_b(int action) const;
  /// Column j is the Dirichlet expected log of count column j of `action`.
  Eigen::MatrixXd expected_log_b(int action) const;

  GenerativeModel with_b_counts(std::vector<Eigen::MatrixXd> counts) const;

 private:
  void validate() const;

  Eigen::MatrixXd a_matrix_;
  std::vector<Eigen::MatrixXd> b_counts_;
  Categorical d_prior_;
  std::vector<Policy> policies_;
  int horizon_ = 0;
  int episode_len_ = 0;
};

/// Derived quantities that stay fixed while the counts do, computed once so
/// the per-policy loops only do matrix-vector work.
struct ModelTables {
  explicit ModelTables(const GenerativeModel& model);

  std::vector<Eigen::MatrixXd> expected_b;
  std::vector<Eigen::MatrixXd> expected_log_b;
  /// info_gain[a](i, j) = D_KL[Dir(col_j + e_i) || Dir(col_j)] for action a.
  std::vector<Eigen::MatrixXd> info_gain;
  /// Floored ln A, observations by states.
  Eigen::MatrixXd log_a;
  /// Entropy of each column of A.
  Eigen::VectorXd a_entropy;
  Eigen::VectorXd log_d;
};

/// Policy-marginalized transition learning: for every policy k and step
/// t >= 2, counts[a_k(t-1)] += eta * Q(pi_k) * Q(S_t|pi_k) Q(S_{t-1}|pi_k)^T.
GenerativeModel update_b_counts(const GenerativeModel& model, const BeliefState& beliefs,
                                const LearningConfig& cfg);

/// Same rule with a separate policy weighting per transition:
/// `transition_weights[t]` replaces Q(pi) for the transition from step t + 1
/// to step t + 2 (zero-based t, T - 1 entries).
GenerativeModel update_b_counts(const GenerativeModel& model, const BeliefState& beliefs, const LearningConfig& cfg,
                                const std::vector<Categorical>& transition_weights);

}  // namespace aif
