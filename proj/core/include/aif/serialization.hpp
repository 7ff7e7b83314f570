#pragma once

// JSON encodings of models, schedules, traces, configs and metrics.

#include "aif/agent.hpp"
#include "aif/harness.hpp"
#include "aif/model.hpp"
#include "aif/preferences.hpp"

#include <nlohmann/json.hpp>

namespace aif {

using Json = nlohmann::json;

Json to_json(const Eigen::VectorXd& v);
Eigen::VectorXd vector_from_json(const Json& j);
/// Row-major nested arrays.
Json to_json(const Eigen::MatrixXd& m);
Eigen::MatrixXd matrix_from_json(const Json& j);

Json to_json(const GridSpec& spec);
GridSpec grid_spec_from_json(const Json& j);

/// b_counts, a_matrix, d_prior, horizon, episode length and policies.
Json to_json(const GenerativeModel& model);
GenerativeModel model_from_json(const Json& j);

Json to_json(const PreferenceSchedule& schedule);

Json to_json(const EfeBreakdown& b);
Json to_json(const StepRecord& rec);
/// Full detail line: every step record.
Json to_json(const EpisodeTrace& trace);

Json to_json(const EpisodeSummary& s);
EpisodeSummary episode_summary_from_json(const Json& j);

Json to_json(const ExperimentConfig& cfg);
ExperimentConfig experiment_config_from_json(const Json& j);

Json to_json(const MetricsBundle& m);
MetricsBundle metrics_from_json(const Json& j);

}  // namespace aif
