#pragma once

// Multi-run experiments: configuration, per-episode summaries, aggregated
// metrics and the on-disk layout of an experiment directory.

#include "aif/agent.hpp"
#include "aif/gridworld.hpp"
#include "aif/model.hpp"
#include "aif/preferences.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace aif {

enum class KlDirection {
  /// KL(ground truth || learned), learned distribution floored.
  kTruthToLearned,
  /// KL(learned || ground truth), ground truth floored.
  kLearnedToTruth,
};

KlDirection parse_kl_direction(std::string_view name);
std::string_view kl_direction_name(KlDirection d);

enum class TraceDetail {
  /// One line per episode with the step-1 / step-5 per-policy vectors.
  kSummary,
  /// Additionally every step's F, G, Q(pi) and per-step G terms.
  kFull,
};

TraceDetail parse_trace_detail(std::string_view name);
std::string_view trace_detail_name(TraceDetail d);

struct ExperimentConfig {
  std::string exp_name;
  std::string gym_id = "gridworld-v1";
  std::string env_layout = "gridw9";
  int num_runs = 10;
  int num_episodes = 200;
  int num_steps = 5;
  int inf_steps = 10;
  int num_policies = 256;
  std::string action_selection = "kd";
  GoalStrength pref_type = GoalStrength::kHard;
  bool shaped = true;
  bool learn_b = false;
  std::uint64_t base_seed = 0;
  std::optional<std::vector<int>> path_override;

  double eta = 1.0;
  double b_init = 0.1;
  double b_jitter = 0.1;
  double policy_precision = 128.0;
  CreditAssignment credit = CreditAssignment::kDecision;
  TerminalPrior terminal_prior = TerminalPrior::kFirstStep;
  KlDirection kl_direction = KlDirection::kTruthToLearned;
  TraceDetail trace_detail = TraceDetail::kSummary;
  /// Parent directory of `<exp_name>/`. Empty disables persistence.
  std::filesystem::path output_dir = ".";
  bool persist = true;
  std::optional<std::filesystem::path> layouts_file;
  /// Worker threads; 0 picks the hardware concurrency.
  int threads = 0;
  /// Track F across VMP sweeps and record the largest increase per episode.
  bool monitor_fe = false;

  /// Throws ConfigError for any inconsistency (unknown layout, bad bounds,
  /// infeasible path, unsupported action rule).
  void validate() const;

  GridSpec grid() const;
  PreferenceKind preference_kind() const { return {pref_type, shaped}; }
  LearningConfig learning() const;
  PreferenceSchedule schedule() const;
  std::filesystem::path experiment_dir() const { return output_dir / exp_name; }
};

/// Compact record of one episode; what the harness keeps in memory and what
/// a summary-detail trace line holds.
struct EpisodeSummary {
  int run_id = 0;
  int episode_id = 0;
  std::vector<int> observations;
  std::vector<int> actions;
  bool success = false;
  /// Per policy, at the first planning step.
  Eigen::VectorXd fe_step1;
  Eigen::VectorXd efe_step1;
  Eigen::VectorXd risk_step1;
  Eigen::VectorXd ambiguity_step1;
  Eigen::VectorXd a_novelty_step1;
  Eigen::VectorXd b_novelty_step1;
  Eigen::VectorXd policy_probs_step1;
  /// Per policy, after the final observation.
  Eigen::VectorXd fe_final;
  /// [step][action]
  std::vector<Eigen::VectorXd> action_marginals;
  /// Per action, after this episode's update.
  std::vector<double> b_kl;
  double max_fe_increase = 0.0;
  /// Largest |G - sum of its per-step terms| over all steps and policies.
  double efe_term_residual = 0.0;
};

EpisodeSummary summarize(const EpisodeTrace& trace);

struct MetricsBundle {
  int num_runs = 0;
  int num_episodes = 0;
  std::vector<double> success_curve;
  Eigen::VectorXd state_access;
  /// [episode] -> per-policy mean over runs.
  std::vector<Eigen::VectorXd> fe_step1;
  std::vector<Eigen::VectorXd> fe_step5;
  std::vector<Eigen::VectorXd> efe_step1;
  std::vector<Eigen::VectorXd> risk_step1;
  std::vector<Eigen::VectorXd> ambiguity_step1;
  std::vector<Eigen::VectorXd> b_novelty_step1;
  std::vector<Eigen::VectorXd> policy_probs_step1;
  /// [episode][step] -> per-action mean over runs.
  std::vector<std::vector<Eigen::VectorXd>> action_marginals;
  /// [episode] -> per-action mean over runs.
  std::vector<std::vector<double>> b_kl_curve;
  std::vector<int> plot_policies;
};

struct ExperimentResult {
  ExperimentConfig config;
  /// [run][episode]
  std::vector<std::vector<EpisodeSummary>> runs;
  std::vector<GenerativeModel> final_models;
  MetricsBundle metrics;
};

/// Per action: sum over source states of the KL between the ground-truth
/// column and the learned expected column, in the requested direction.
std::vector<double> b_kl_to_ground_truth(const GenerativeModel& model, const GridSpec& spec,
                                         KlDirection direction = KlDirection::kTruthToLearned);

/// Normalized visit counts of every observed tile.
Eigen::VectorXd state_access_frequency(const std::vector<std::vector<EpisodeSummary>>& runs, int num_states);

/// The task-solving ids plus the task-failing ids with the highest mean
/// step-1 posterior, `count` in total, sorted by id.
std::vector<int> select_plot_policies(const std::vector<Policy>& policies, const GridSpec& spec,
                                      const std::vector<Eigen::VectorXd>& policy_probs_step1, std::size_t count = 16);

MetricsBundle aggregate(const std::vector<std::vector<EpisodeSummary>>& runs, const std::vector<Policy>& policies,
                        const GridSpec& spec);

/// Builds an agent for run r (seed base_seed + r) with the configured model.
AgentConfig make_agent_config(const ExperimentConfig& cfg, int run);

/// Validates, runs every run (in parallel), persists traces and models as
/// they complete, then aggregates and writes metrics.json.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Reads `<dir>/run_*/episodes.jsonl` back into summaries, ordered by run.
std::vector<std::vector<EpisodeSummary>> load_runs(const std::filesystem::path& exp_dir);

/// Reads `<dir>/metrics.json`.
MetricsBundle load_metrics(const std::filesystem::path& exp_dir);

/// CSV files derived from a metrics bundle.
struct ExportOptions {
  /// Empty means every curve.
  std::vector<std::string> selectors;
  /// Per-policy curves restricted to the plot policies unless set.
  bool all_policies = false;
};

inline const std::vector<std::string>& export_curve_names() {
  static const std::vector<std::string> names = {
      "success",         "fe_step1",           "fe_step5",         "efe_step1",       "risk_step1",
      "b_novelty_step1", "policy_probs_step1", "action_marginals", "state_access",    "b_kl"};
  return names;
}

/// Writes the selected CSVs into `out_dir` and returns their paths.
std::vector<std::filesystem::path> export_csv(const MetricsBundle& metrics, const std::filesystem::path& out_dir,
                                              const ExportOptions& options);

}  // namespace aif
