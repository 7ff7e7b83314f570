#include "aif/serialization.hpp"

#include <stdexcept>
#include <string>

namespace aif {

Json to_json(const Eigen::VectorXd& v) {
  Json j = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(v[i]);
  return j;
}

Eigen::VectorXd vector_from_json(const Json& j) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  return v;
}

Json to_json(const Eigen::MatrixXd& m) {
  Json j = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) j.push_back(to_json(Eigen::VectorXd(m.row(r).transpose())));
  return j;
}

Eigen::MatrixXd matrix_from_json(const Json& j) {
  if (j.empty()) return {};
  Eigen::MatrixXd m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(j[0].size()));
  for (std::size_t r = 0; r < j.size(); ++r) {
    if (j[r].size() != static_cast<std::size_t>(m.cols())) throw std::invalid_argument("ragged matrix in JSON");
    for (std::size_t c = 0; c < j[r].size(); ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = j[r][c].get<double>();
  }
  return m;
}

Json to_json(const GridSpec& spec) {
  return {{"width", spec.width}, {"height", spec.height}, {"start", spec.start}, {"goal", spec.goal}};
}

GridSpec grid_spec_from_json(const Json& j) {
  return {j.at("width").get<int>(), j.at("height").get<int>(), j.at("start").get<int>(), j.at("goal").get<int>()};
}

Json to_json(const GenerativeModel& model) {
  Json b = Json::array();
  for (const auto& counts : model.b_counts()) b.push_back(to_json(counts));
  Json pols = Json::array();
  for (const auto& p : model.policies()) pols.push_back(p.actions);
  return {{"a_matrix", to_json(model.a_matrix())},
          {"b_counts", b},
          {"d_prior", to_json(model.d_prior().probs())},
          {"horizon", model.horizon()},
          {"episode_len", model.episode_len()},
          {"policies", pols}};
}

GenerativeModel model_from_json(const Json& j) {
  std::vector<Eigen::MatrixXd> counts;
  for (const auto& b : j.at("b_counts")) counts.push_back(matrix_from_json(b));
  std::vector<Policy> policies;
  int id = 0;
  for (const auto& p : j.at("policies")) policies.push_back(Policy{id++, p.get<std::vector<int>>()});
  return GenerativeModel(matrix_from_json(j.at("a_matrix")), std::move(counts),
                         Categorical(vector_from_json(j.at("d_prior"))), std::move(policies),
                         j.at("horizon").get<int>(), j.at("episode_len").get<int>());
}

Json to_json(const PreferenceSchedule& schedule) {
  Json steps = Json::array();
  for (const auto& c : schedule.per_step) steps.push_back(to_json(c.probs()));
  return {{"pref_type", pref_type_name(schedule.kind.strength)},
          {"pref_loc", pref_loc_name(schedule.kind.shaped)},
          {"per_step", steps}};
}

Json to_json(const EfeBreakdown& b) {
  return {{"risk", b.risk}, {"ambiguity", b.ambiguity}, {"a_novelty", b.a_novelty}, {"b_novelty", b.b_novelty}};
}

Json to_json(const StepRecord& rec) {
  Json terms = Json::array();
  for (const auto& per_policy : rec.efe_breakdowns) {
    Json row = Json::array();
    for (const auto& b : per_policy) row.push_back(to_json(b));
    terms.push_back(row);
  }
  return {{"step", rec.step},
          {"observation", rec.observation},
          {"action_marginals", to_json(rec.action_marginals.probs())},
          {"chosen_action", rec.chosen_action},
          {"q_policy", to_json(rec.q_policy.probs())},
          {"fe", to_json(rec.fe)},
          {"efe", to_json(rec.efe)},
          {"efe_terms", terms}};
}

Json to_json(const EpisodeTrace& trace) {
  Json steps = Json::array();
  for (const auto& s : trace.steps) steps.push_back(to_json(s));
  return {{"run_id", trace.run_id},
          {"episode_id", trace.episode_id},
          {"observations", trace.observations},
          {"actions", trace.actions},
          {"success", trace.success},
          {"final_fe", to_json(trace.final_fe)},
          {"final_q_policy", to_json(trace.final_q_policy.probs())},
          {"b_kl", trace.b_kl},
          {"max_fe_increase", trace.max_fe_increase},
          {"steps", steps}};
}

Json to_json(const EpisodeSummary& s) {
  Json marg = Json::array();
  for (const auto& m : s.action_marginals) marg.push_back(to_json(m));
  return {{"run_id", s.run_id},
          {"episode_id", s.episode_id},
          {"observations", s.observations},
          {"actions", s.actions},
          {"success", s.success},
          {"fe_step1", to_json(s.fe_step1)},
          {"efe_step1", to_json(s.efe_step1)},
          {"risk_step1", to_json(s.risk_step1)},
          {"ambiguity_step1", to_json(s.ambiguity_step1)},
          {"a_novelty_step1", to_json(s.a_novelty_step1)},
          {"b_novelty_step1", to_json(s.b_novelty_step1)},
          {"policy_probs_step1", to_json(s.policy_probs_step1)},
          {"fe_final", to_json(s.fe_final)},
          {"action_marginals", marg},
          {"b_kl", s.b_kl},
          {"max_fe_increase", s.max_fe_increase},
          {"efe_term_residual", s.efe_term_residual}};
}

EpisodeSummary episode_summary_from_json(const Json& j) {
  EpisodeSummary s;
  s.run_id = j.at("run_id").get<int>();
  s.episode_id = j.at("episode_id").get<int>();
  s.observations = j.at("observations").get<std::vector<int>>();
  s.actions = j.at("actions").get<std::vector<int>>();
  s.success = j.at("success").get<bool>();
  s.fe_step1 = vector_from_json(j.at("fe_step1"));
  s.efe_step1 = vector_from_json(j.at("efe_step1"));
  s.risk_step1 = vector_from_json(j.at("risk_step1"));
  s.ambiguity_step1 = vector_from_json(j.at("ambiguity_step1"));
  s.a_novelty_step1 = vector_from_json(j.at("a_novelty_step1"));
  s.b_novelty_step1 = vector_from_json(j.at("b_novelty_step1"));
  s.policy_probs_step1 = vector_from_json(j.at("policy_probs_step1"));
  s.fe_final = vector_from_json(j.at("fe_final"));
  for (const auto& m : j.at("action_marginals")) s.action_marginals.push_back(vector_from_json(m));
  s.b_kl = j.at("b_kl").get<std::vector<double>>();
  s.max_fe_increase = j.at("max_fe_increase").get<double>();
  s.efe_term_residual = j.at("efe_term_residual").get<double>();
  return s;
}

Json to_json(const ExperimentConfig& cfg) {
  Json j = {{"exp_name", cfg.exp_name},
            {"gym_id", cfg.gym_id},
            {"env_layout", cfg.env_layout},
            {"num_runs", cfg.num_runs},
            {"num_episodes", cfg.num_episodes},
            {"num_steps", cfg.num_steps},
            {"inf_steps", cfg.inf_steps},
            {"num_policies", cfg.num_policies},
            {"action_selection", cfg.action_selection},
            {"pref_type", pref_type_name(cfg.pref_type)},
            {"pref_loc", pref_loc_name(cfg.shaped)},
            {"learn_b", cfg.learn_b},
            {"seed", cfg.base_seed},
            {"eta", cfg.eta},
            {"b_init", cfg.b_init},
            {"b_jitter", cfg.b_jitter},
            {"policy_precision", cfg.policy_precision},
            {"credit", credit_assignment_name(cfg.credit)},
            {"terminal_prior", terminal_prior_name(cfg.terminal_prior)},
            {"kl_direction", kl_direction_name(cfg.kl_direction)},
            {"trace_detail", trace_detail_name(cfg.trace_detail)},
            {"path", nullptr},
            {"layouts_file", nullptr}};
  if (cfg.path_override) j["path"] = *cfg.path_override;
  if (cfg.layouts_file) j["layouts_file"] = cfg.layouts_file->string();
  return j;
}

ExperimentConfig experiment_config_from_json(const Json& j) {
  ExperimentConfig cfg;
  cfg.exp_name = j.at("exp_name").get<std::string>();
  cfg.gym_id = j.value("gym_id", cfg.gym_id);
  cfg.env_layout = j.value("env_layout", cfg.env_layout);
  cfg.num_runs = j.at("num_runs").get<int>();
  cfg.num_episodes = j.at("num_episodes").get<int>();
  cfg.num_steps = j.at("num_steps").get<int>();
  cfg.inf_steps = j.at("inf_steps").get<int>();
  cfg.num_policies = j.at("num_policies").get<int>();
  cfg.action_selection = j.value("action_selection", cfg.action_selection);
  cfg.pref_type = parse_pref_type(j.at("pref_type").get<std::string>());
  cfg.shaped = parse_pref_loc(j.at("pref_loc").get<std::string>());
  cfg.learn_b = j.at("learn_b").get<bool>();
  cfg.base_seed = j.value("seed", cfg.base_seed);
  cfg.eta = j.value("eta", cfg.eta);
  cfg.b_init = j.value("b_init", cfg.b_init);
  cfg.b_jitter = j.value("b_jitter", cfg.b_jitter);
  cfg.policy_precision = j.value("policy_precision", cfg.policy_precision);
  if (j.contains("credit")) cfg.credit = parse_credit_assignment(j["credit"].get<std::string>());
  if (j.contains("terminal_prior")) cfg.terminal_prior = parse_terminal_prior(j["terminal_prior"].get<std::string>());
  if (j.contains("kl_direction")) cfg.kl_direction = parse_kl_direction(j["kl_direction"].get<std::string>());
  if (j.contains("trace_detail")) cfg.trace_detail = parse_trace_detail(j["trace_detail"].get<std::string>());
  if (j.contains("path") && !j["path"].is_null()) cfg.path_override = j["path"].get<std::vector<int>>();
  if (j.contains("layouts_file") && !j["layouts_file"].is_null())
    cfg.layouts_file = j["layouts_file"].get<std::string>();
  return cfg;
}

namespace {

Json vectors_to_json(const std::vector<Eigen::VectorXd>& vs) {
  Json j = Json::array();
  for (const auto& v : vs) j.push_back(to_json(v));
  return j;
}

std::vector<Eigen::VectorXd> vectors_from_json(const Json& j) {
  std::vector<Eigen::VectorXd> out;
  for (const auto& v : j) out.push_back(vector_from_json(v));
  return out;
}

}  // namespace

Json to_json(const MetricsBundle& m) {
  Json marg = Json::array();
  for (const auto& ep : m.action_marginals) marg.push_back(vectors_to_json(ep));
  return {{"num_runs", m.num_runs},
          {"num_episodes", m.num_episodes},
          {"success_curve", m.success_curve},
          {"state_access", to_json(m.state_access)},
          {"fe_step1", vectors_to_json(m.fe_step1)},
          {"fe_step5", vectors_to_json(m.fe_step5)},
          {"efe_step1", vectors_to_json(m.efe_step1)},
          {"risk_step1", vectors_to_json(m.risk_step1)},
          {"ambiguity_step1", vectors_to_json(m.ambiguity_step1)},
          {"b_novelty_step1", vectors_to_json(m.b_novelty_step1)},
          {"policy_probs_step1", vectors_to_json(m.policy_probs_step1)},
          {"action_marginals", marg},
          {"b_kl_curve", m.b_kl_curve},
          {"plot_policies", m.plot_policies}};
}

MetricsBundle metrics_from_json(const Json& j) {
  MetricsBundle m;
  m.num_runs = j.at("num_runs").get<int>();
  m.num_episodes = j.at("num_episodes").get<int>();
  m.success_curve = j.at("success_curve").get<std::vector<double>>();
  m.state_access = vector_from_json(j.at("state_access"));
  m.fe_step1 = vectors_from_json(j.at("fe_step1"));
  m.fe_step5 = vectors_from_json(j.at("fe_step5"));
  m.efe_step1 = vectors_from_json(j.at("efe_step1"));
  m.risk_step1 = vectors_from_json(j.at("risk_step1"));
  m.ambiguity_step1 = vectors_from_json(j.at("ambiguity_step1"));
  m.b_novelty_step1 = vectors_from_json(j.at("b_novelty_step1"));
  m.policy_probs_step1 = vectors_from_json(j.at("policy_probs_step1"));
  for (const auto& ep : j.at("action_marginals")) m.action_marginals.push_back(vectors_from_json(ep));
  m.b_kl_curve = j.at("b_kl_curve").get<std::vector<std::vector<double>>>();
  m.plot_policies = j.at("plot_policies").get<std::vector<int>>();
  return m;
}

}  // namespace aif
