#pragma once

// Perceptual inference over policy-conditioned state trajectories by
// variational message passing, and the policy posterior update.

#include "aif/beliefs.hpp"
#include "aif/model.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace aif {

struct VmpResult {
  /// Policy-conditioned free energy of every policy at the final beliefs.
  Eigen::VectorXd fe;
  /// Largest increase of any F_pi between consecutive sweeps (0 when F only
  /// decreased). Only populated when monitoring is requested.
  double max_fe_increase = 0.0;
};

/// Runs `num_sweeps` forward sweeps of coordinate updates over t = 1..T for
/// every policy, using the observations recorded in `beliefs` up to
/// `beliefs.current_step`. Each update combines the observation likelihood
/// (t <= tau), the initial-state prior (t = 1), the forward message from
/// t - 1 and the backward message from t + 1, with transition log-likelihoods
/// taken as Dirichlet expected logs.
///
/// Throws InvalidState if current_step exceeds the episode length, and
/// std::invalid_argument if num_sweeps < 1 or the beliefs do not match the
/// model's shape.
VmpResult vmp_update_states(const GenerativeModel& model, BeliefState& beliefs, int num_sweeps,
                            bool monitor_fe = false);
VmpResult vmp_update_states(const GenerativeModel& model, const ModelTables& tables, BeliefState& beliefs,
                            int num_sweeps, bool monitor_fe = false);

double policy_conditioned_fe(const GenerativeModel& model, const BeliefState& beliefs, std::size_t k);
double policy_conditioned_fe(const GenerativeModel& model, const ModelTables& tables, const BeliefState& beliefs,
                             std::size_t k);

/// softmax(-efe - fe).
Categorical update_policy_posterior(const Eigen::VectorXd& fe, const Eigen::VectorXd& efe);

/// Rolls Q(S_tau | pi_k) forward through the expected transition means;
/// returns predictions for steps tau + 1 .. T.
std::vector<Categorical> predict_states(const GenerativeModel& model, const BeliefState& beliefs, std::size_t k,
                                        int from_step);
std::vector<Categorical> predict_states(const GenerativeModel& model, const ModelTables& tables,
                                        const BeliefState& beliefs, std::size_t k, int from_step);

}  // namespace aif
