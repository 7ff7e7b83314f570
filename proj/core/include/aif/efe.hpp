#pragma once

// Expected free energy of each policy: per future step risk, ambiguity and
// the two novelty terms, summed over the remaining planning horizon.

#include "aif/beliefs.hpp"
#include "aif/model.hpp"
#include "aif/preferences.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace aif {

struct EfeBreakdown {
  double risk = 0.0;
  double ambiguity = 0.0;
  double a_novelty = 0.0;
  double b_novelty = 0.0;

  /// Contribution of this step to G: ambiguity + risk - novelties.
  double total() const { return ambiguity + risk - a_novelty - b_novelty; }
};

struct PolicyEfe {
  double total = 0.0;
  /// One entry per future step tau + 1 .. min(tau + H, T).
  std::vector<EfeBreakdown> steps;
};

struct FreeEnergyReport {
  Eigen::VectorXd per_policy_fe;
  Eigen::VectorXd per_policy_efe;
  std::vector<std::vector<EfeBreakdown>> efe_terms;
};

double risk(const Categorical& q_pred, const Categorical& preference);
double ambiguity(const Categorical& q_pred, const Eigen::MatrixXd& a_matrix);
/// Expected information gain about the transition counts of `action` from
/// observing the pair (s_{t-1} ~ q_prev, s_t ~ q_pred) once.
double b_novelty(const GenerativeModel& model, const Categorical& q_pred, const Categorical& q_prev, int action);

/// G_H(pi_k) from the current posterior Q(S_tau | pi_k). The A matrix is
/// known, so the A-novelty term is identically zero.
PolicyEfe total_efe(const GenerativeModel& model, const PreferenceSchedule& schedule, const BeliefState& beliefs,
                    std::size_t k, int tau);
PolicyEfe total_efe(const GenerativeModel& model, const ModelTables& tables, const PreferenceSchedule& schedule,
                    const BeliefState& beliefs, std::size_t k, int tau);

}  // namespace aif
