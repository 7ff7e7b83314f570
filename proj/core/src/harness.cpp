#include "aif/harness.hpp"

#include "aif/errors.hpp"
#include "aif/serialization.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace aif {

namespace fs = std::filesystem;

KlDirection parse_kl_direction(std::string_view name) {
  if (name == "truth_learned") return KlDirection::kTruthToLearned;
  if (name == "learned_truth") return KlDirection::kLearnedToTruth;
  throw std::invalid_argument("unknown KL direction '" + std::string(name) +
                              "' (allowed: truth_learned, learned_truth)");
}

std::string_view kl_direction_name(KlDirection d) {
  return d == KlDirection::kTruthToLearned ? "truth_learned" : "learned_truth";
}

TraceDetail parse_trace_detail(std::string_view name) {
  if (name == "summary") return TraceDetail::kSummary;
  if (name == "full") return TraceDetail::kFull;
  throw std::invalid_argument("unknown trace detail '" + std::string(name) + "' (allowed: summary, full)");
}

std::string_view trace_detail_name(TraceDetail d) { return d == TraceDetail::kSummary ? "summary" : "full"; }

namespace {

LayoutRegistry registry_for(const ExperimentConfig& cfg) {
  LayoutRegistry reg;
  if (cfg.layouts_file) reg.load_file(*cfg.layouts_file);
  return reg;
}

}  // namespace

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& msg) { throw ConfigError(msg); };
  if (exp_name.empty()) fail("exp_name must not be empty");
  if (gym_id != "gridworld-v1") fail("unsupported gym_id '" + gym_id + "' (allowed: gridworld-v1)");
  if (action_selection != "kd") fail("unsupported action_selection '" + action_selection + "' (allowed: kd)");
  if (num_runs < 1) fail("num_runs must be at least 1");
  if (num_episodes < 1) fail("num_episodes must be at least 1");
  if (num_steps < 2) fail("num_steps must be at least 2");
  if (inf_steps < 1) fail("inf_steps must be at least 1");
  if (num_policies < 1) fail("num_policies must be at least 1");
  double bound = 1.0;
  for (int i = 0; i < num_steps - 1; ++i) bound *= static_cast<double>(kNumGridActions);
  if (static_cast<double>(num_policies) > bound)
    fail("num_policies " + std::to_string(num_policies) + " exceeds 4^(num_steps-1) = " +
         std::to_string(static_cast<long long>(bound)));
  if (!(eta > 0.0)) fail("eta must be positive");
  if (!(b_init > 0.0)) fail("b_init must be positive");
  if (b_jitter < 0.0) fail("b_jitter must be non-negative");
  if (!(policy_precision > 0.0)) fail("policy_precision must be positive");
  if (threads < 0) fail("threads must be non-negative");
  try {
    const LayoutRegistry reg = registry_for(*this);
    if (!reg.contains(env_layout)) {
      std::string known;
      for (const auto& n : reg.names()) known += (known.empty() ? "" : ", ") + n;
      fail("unknown env_layout '" + env_layout + "' (known: " + known + ")");
    }
    const GridSpec spec = reg.get(env_layout);
    spec.validate();
    if (path_override) {
      if (!shaped) fail("a waypoint path only applies to pref_loc all_diff");
      make_goal_path(*path_override, spec, num_steps);
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    fail(e.what());
  }
}

GridSpec ExperimentConfig::grid() const { return registry_for(*this).get(env_layout); }

LearningConfig ExperimentConfig::learning() const { return {learn_b, eta, b_init, b_jitter}; }

PreferenceSchedule ExperimentConfig::schedule() const {
  const GridSpec spec = grid();
  std::optional<GoalPath> path;
  if (shaped) path = path_override ? make_goal_path(*path_override, spec, num_steps) : default_goal_path(spec, num_steps);
  return build_schedule(preference_kind(), spec, num_steps, path);
}

EpisodeSummary summarize(const EpisodeTrace& trace) {
  EpisodeSummary s;
  s.run_id = trace.run_id;
  s.episode_id = trace.episode_id;
  s.observations = trace.observations;
  s.actions = trace.actions;
  s.success = trace.success;
  s.fe_final = trace.final_fe;
  s.b_kl = trace.b_kl;
  s.max_fe_increase = trace.max_fe_increase;
  for (const auto& rec : trace.steps) {
    s.action_marginals.push_back(rec.action_marginals.probs());
    for (std::size_t k = 0; k < rec.efe_breakdowns.size(); ++k) {
      double sum = 0.0;
      for (const auto& b : rec.efe_breakdowns[k]) sum += b.total();
      s.efe_term_residual = std::max(s.efe_term_residual, std::abs(sum - rec.efe[static_cast<Eigen::Index>(k)]));
    }
  }
  if (trace.steps.empty()) return s;
  const StepRecord& first = trace.steps.front();
  const auto n = static_cast<Eigen::Index>(first.efe_breakdowns.size());
  s.fe_step1 = first.fe;
  s.efe_step1 = first.efe;
  s.policy_probs_step1 = first.q_policy.probs();
  s.risk_step1 = Eigen::VectorXd::Zero(n);
  s.ambiguity_step1 = Eigen::VectorXd::Zero(n);
  s.a_novelty_step1 = Eigen::VectorXd::Zero(n);
  s.b_novelty_step1 = Eigen::VectorXd::Zero(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    for (const auto& b : first.efe_breakdowns[static_cast<std::size_t>(k)]) {
      s.risk_step1[k] += b.risk;
      s.ambiguity_step1[k] += b.ambiguity;
      s.a_novelty_step1[k] += b.a_novelty;
      s.b_novelty_step1[k] += b.b_novelty;
    }
  }
  return s;
}

std::vector<double> b_kl_to_ground_truth(const GenerativeModel& model, const GridSpec& spec, KlDirection direction) {
  const auto truth = ground_truth_transitions(spec);
  if (static_cast<std::size_t>(model.num_actions()) != truth.size() || model.num_states() != spec.num_states())
    throw std::invalid_argument("b_kl_to_ground_truth: model does not match the grid");
  std::vector<double> out;
  for (int a = 0; a < model.num_actions(); ++a) {
    const Eigen::MatrixXd learned = model.expected_b(a);
    double total = 0.0;
    for (Eigen::Index j = 0; j < learned.cols(); ++j) {
      const Categorical p_true(truth[static_cast<std::size_t>(a)].col(j));
      const Categorical p_learned = Categorical::normalized(learned.col(j));
      total += direction == KlDirection::kTruthToLearned ? kl_divergence(p_true, p_learned)
                                                         : kl_divergence(p_learned, p_true);
    }
    out.push_back(total);
  }
  return out;
}

Eigen::VectorXd state_access_frequency(const std::vector<std::vector<EpisodeSummary>>& runs, int num_states) {
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(num_states);
  for (const auto& run : runs)
    for (const auto& ep : run)
      for (int o : ep.observations) counts[o] += 1.0;
  if (counts.sum() == 0.0) throw std::invalid_argument("state_access_frequency: no observations");
  return counts / counts.sum();
}

std::vector<int> select_plot_policies(const std::vector<Policy>& policies, const GridSpec& spec,
                                      const std::vector<Eigen::VectorXd>& policy_probs_step1, std::size_t count) {
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(policies.size()));
  for (const auto& p : policy_probs_step1) mean += p;
  std::vector<int> chosen;
  std::vector<int> failing;
  for (const auto& p : policies) (is_task_solving(p, spec) ? chosen : failing).push_back(p.id);
  std::stable_sort(failing.begin(), failing.end(), [&](int a, int b) { return mean[a] > mean[b]; });
  for (int id : failing) {
    if (chosen.size() >= count) break;
    chosen.push_back(id);
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

MetricsBundle aggregate(const std::vector<std::vector<EpisodeSummary>>& runs, const std::vector<Policy>& policies,
                        const GridSpec& spec) {
  if (runs.empty() || runs.front().empty()) throw std::invalid_argument("aggregate: no episodes");
  MetricsBundle m;
  m.num_runs = static_cast<int>(runs.size());
  m.num_episodes = static_cast<int>(runs.front().size());
  for (const auto& r : runs)
    if (static_cast<int>(r.size()) != m.num_episodes) throw std::invalid_argument("aggregate: ragged runs");
  const double inv = 1.0 / m.num_runs;
  auto mean_of = [&](int e, auto member) {
    Eigen::VectorXd acc = runs.front()[static_cast<std::size_t>(e)].*member;
    for (std::size_t r = 1; r < runs.size(); ++r) acc += runs[r][static_cast<std::size_t>(e)].*member;
    return Eigen::VectorXd(acc * inv);
  };
  for (int e = 0; e < m.num_episodes; ++e) {
    const auto ei = static_cast<std::size_t>(e);
    double succ = 0.0;
    for (const auto& r : runs) succ += r[ei].success ? 1.0 : 0.0;
    m.success_curve.push_back(succ * inv);
    m.fe_step1.push_back(mean_of(e, &EpisodeSummary::fe_step1));
    m.fe_step5.push_back(mean_of(e, &EpisodeSummary::fe_final));
    m.efe_step1.push_back(mean_of(e, &EpisodeSummary::efe_step1));
    m.risk_step1.push_back(mean_of(e, &EpisodeSummary::risk_step1));
    m.ambiguity_step1.push_back(mean_of(e, &EpisodeSummary::ambiguity_step1));
    m.b_novelty_step1.push_back(mean_of(e, &EpisodeSummary::b_novelty_step1));
    m.policy_probs_step1.push_back(mean_of(e, &EpisodeSummary::policy_probs_step1));

    std::vector<Eigen::VectorXd> marg = runs.front()[ei].action_marginals;
    std::vector<double> kl = runs.front()[ei].b_kl;
    for (std::size_t r = 1; r < runs.size(); ++r) {
      for (std::size_t t = 0; t < marg.size(); ++t) marg[t] += runs[r][ei].action_marginals.at(t);
      for (std::size_t a = 0; a < kl.size(); ++a) kl[a] += runs[r][ei].b_kl.at(a);
    }
    for (auto& v : marg) v *= inv;
    for (auto& v : kl) v *= inv;
    m.action_marginals.push_back(std::move(marg));
    m.b_kl_curve.push_back(std::move(kl));
  }
  m.state_access = state_access_frequency(runs, spec.num_states());
  m.plot_policies = select_plot_policies(policies, spec, m.policy_probs_step1);
  return m;
}

AgentConfig make_agent_config(const ExperimentConfig& cfg, int run) {
  const GridSpec spec = cfg.grid();
  const LearningConfig learning = cfg.learning();
  AgentConfig ac{GenerativeModel::for_grid(spec, enumerate_policies(static_cast<int>(kNumGridActions),
                                                                    cfg.num_steps - 1, cfg.num_policies),
                                           cfg.num_steps, learning, cfg.base_seed + static_cast<std::uint64_t>(run)),
                 cfg.schedule(), learning};
  ac.inf_steps = cfg.inf_steps;
  ac.policy_precision = cfg.policy_precision;
  ac.terminal_prior = cfg.terminal_prior;
  ac.credit = cfg.credit;
  ac.rng_seed = cfg.base_seed + static_cast<std::uint64_t>(run);
  ac.goal_state = spec.goal;
  ac.monitor_fe = cfg.monitor_fe;
  return ac;
}

namespace {

void write_json_file(const fs::path& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump() << '\n';
}

Json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return Json::parse(in);
}

struct RunOutput {
  std::vector<EpisodeSummary> episodes;
  std::optional<GenerativeModel> model;
};

RunOutput execute_run(const ExperimentConfig& cfg, int run, const GridSpec& spec, const fs::path& exp_dir) {
  Agent agent(make_agent_config(cfg, run));
  GridEnv env(spec);
  std::ofstream lines;
  if (cfg.persist) {
    const fs::path run_dir = exp_dir / ("run_" + std::to_string(run));
    fs::create_directories(run_dir);
    lines.open(run_dir / "episodes.jsonl");
    if (!lines) throw std::runtime_error("cannot write traces under " + run_dir.string());
  }
  RunOutput out;
  out.episodes.reserve(static_cast<std::size_t>(cfg.num_episodes));
  for (int e = 0; e < cfg.num_episodes; ++e) {
    EpisodeTrace trace = agent.run_episode(env);
    trace.run_id = run;
    trace.episode_id = e;
    trace.b_kl = b_kl_to_ground_truth(agent.model(), spec, cfg.kl_direction);
    EpisodeSummary summary = summarize(trace);
    if (cfg.persist) {
      Json line = to_json(summary);
      if (cfg.trace_detail == TraceDetail::kFull) line["steps"] = to_json(trace)["steps"];
      lines << line.dump() << '\n';
    }
    out.episodes.push_back(std::move(summary));
  }
  if (cfg.persist) write_json_file(exp_dir / ("model_final_run" + std::to_string(run) + ".json"), to_json(agent.model()));
  out.model = agent.model();
  return out;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const GridSpec spec = cfg.grid();
  const fs::path exp_dir = cfg.experiment_dir();
  if (cfg.persist) {
    fs::create_directories(exp_dir);
    write_json_file(exp_dir / "config.json", to_json(cfg));
    write_json_file(exp_dir / "schedule.json", to_json(cfg.schedule()));
  }

  std::vector<RunOutput> outputs(static_cast<std::size_t>(cfg.num_runs));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(cfg.num_runs));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int r = next++; r < cfg.num_runs; r = next++) {
      try {
        outputs[static_cast<std::size_t>(r)] = execute_run(cfg, r, spec, exp_dir);
      } catch (...) {
        errors[static_cast<std::size_t>(r)] = std::current_exception();
      }
    }
  };
  int workers = cfg.threads > 0 ? cfg.threads : static_cast<int>(std::max(1U, std::thread::hardware_concurrency()));
  workers = std::min(workers, cfg.num_runs);
  std::vector<std::thread> pool;
  for (int i = 1; i < workers; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& err : errors)
    if (err) std::rethrow_exception(err);

  ExperimentResult result;
  result.config = cfg;
  for (auto& o : outputs) {
    result.runs.push_back(std::move(o.episodes));
    result.final_models.push_back(std::move(*o.model));
  }
  const auto policies =
      enumerate_policies(static_cast<int>(kNumGridActions), cfg.num_steps - 1, cfg.num_policies);
  result.metrics = aggregate(result.runs, policies, spec);
  if (cfg.persist) write_json_file(exp_dir / "metrics.json", to_json(result.metrics));
  return result;
}

std::vector<std::vector<EpisodeSummary>> load_runs(const fs::path& exp_dir) {
  if (!fs::is_directory(exp_dir)) throw std::runtime_error("experiment directory not found: " + exp_dir.string());
  std::vector<std::vector<EpisodeSummary>> runs;
  for (int r = 0;; ++r) {
    const fs::path file = exp_dir / ("run_" + std::to_string(r)) / "episodes.jsonl";
    if (!fs::exists(file)) break;
    std::ifstream in(file);
    std::vector<EpisodeSummary> eps;
    std::string line;
    while (std::getline(in, line))
      if (!line.empty()) eps.push_back(episode_summary_from_json(Json::parse(line)));
    runs.push_back(std::move(eps));
  }
  return runs;
}

MetricsBundle load_metrics(const fs::path& exp_dir) {
  const fs::path file = exp_dir / "metrics.json";
  if (!fs::exists(file)) throw std::runtime_error("metrics not found: " + file.string());
  return metrics_from_json(read_json_file(file));
}

namespace {

class CsvWriter {
 public:
  explicit CsvWriter(const fs::path& path) : out_(path) {
    if (!out_) throw std::runtime_error("cannot write " + path.string());
    out_ << std::setprecision(12);
  }
  void header(const std::vector<std::string>& cols) {
    for (std::size_t i = 0; i < cols.size(); ++i) out_ << (i ? "," : "") << cols[i];
    out_ << '\n';
  }
  void row(int index, const std::vector<double>& values) {
    out_ << index;
    for (double v : values) out_ << ',' << v;
    out_ << '\n';
  }

 private:
  std::ofstream out_;
};

std::vector<std::string> action_columns(const char* first) {
  std::vector<std::string> cols{first};
  for (Action a : kAllActions) cols.emplace_back(action_name(a));
  return cols;
}

}  // namespace

std::vector<fs::path> export_csv(const MetricsBundle& metrics, const fs::path& out_dir, const ExportOptions& options) {
  const auto& known = export_curve_names();
  for (const auto& s : options.selectors)
    if (std::find(known.begin(), known.end(), s) == known.end())
      throw std::invalid_argument("unknown curve '" + s + "'");
  auto wanted = [&](const std::string& name) {
    return options.selectors.empty() ||
           std::find(options.selectors.begin(), options.selectors.end(), name) != options.selectors.end();
  };
  fs::create_directories(out_dir);
  std::vector<fs::path> written;

  std::vector<int> ids = metrics.plot_policies;
  if (options.all_policies && !metrics.policy_probs_step1.empty()) {
    ids.resize(static_cast<std::size_t>(metrics.policy_probs_step1.front().size()));
    std::iota(ids.begin(), ids.end(), 0);
  }
  std::vector<std::string> policy_cols{"episode"};
  for (int id : ids) policy_cols.push_back("pi_" + std::to_string(id));

  if (wanted("success")) {
    written.push_back(out_dir / "success.csv");
    CsvWriter w(written.back());
    w.header({"episode", "success_fraction"});
    for (std::size_t e = 0; e < metrics.success_curve.size(); ++e)
      w.row(static_cast<int>(e), {metrics.success_curve[e]});
  }
  const std::pair<const char*, const std::vector<Eigen::VectorXd>*> per_policy[] = {
      {"fe_step1", &metrics.fe_step1},     {"fe_step5", &metrics.fe_step5},
      {"efe_step1", &metrics.efe_step1},   {"risk_step1", &metrics.risk_step1},
      {"b_novelty_step1", &metrics.b_novelty_step1}, {"policy_probs_step1", &metrics.policy_probs_step1}};
  for (const auto& [name, curve] : per_policy) {
    if (!wanted(name)) continue;
    written.push_back(out_dir / (std::string(name) + ".csv"));
    CsvWriter w(written.back());
    w.header(policy_cols);
    for (std::size_t e = 0; e < curve->size(); ++e) {
      std::vector<double> vals;
      for (int id : ids) vals.push_back((*curve)[e][id]);
      w.row(static_cast<int>(e), vals);
    }
  }
  if (wanted("action_marginals") && !metrics.action_marginals.empty()) {
    const std::size_t steps = metrics.action_marginals.front().size();
    for (std::size_t t = 0; t < steps; ++t) {
      written.push_back(out_dir / ("action_probs_step" + std::to_string(t + 1) + ".csv"));
      CsvWriter w(written.back());
      w.header(action_columns("episode"));
      for (std::size_t e = 0; e < metrics.action_marginals.size(); ++e) {
        const Eigen::VectorXd& v = metrics.action_marginals[e][t];
        w.row(static_cast<int>(e), std::vector<double>(v.data(), v.data() + v.size()));
      }
    }
  }
  if (wanted("state_access")) {
    written.push_back(out_dir / "state_access.csv");
    CsvWriter w(written.back());
    w.header({"state", "frequency"});
    for (Eigen::Index s = 0; s < metrics.state_access.size(); ++s)
      w.row(static_cast<int>(s), {metrics.state_access[s]});
  }
  if (wanted("b_kl")) {
    written.push_back(out_dir / "b_kl.csv");
    CsvWriter w(written.back());
    w.header(action_columns("episode"));
    for (std::size_t e = 0; e < metrics.b_kl_curve.size(); ++e) w.row(static_cast<int>(e), metrics.b_kl_curve[e]);
  }
  return written;
}

}  // namespace aif
