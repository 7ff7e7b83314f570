#include "aif_cli/cli.hpp"

#include "aif/errors.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <iomanip>
#include <ostream>

namespace aif::cli {

namespace {

struct TrainFlags {
  ExperimentConfig cfg;
  std::string pref_type = "states";
  std::string pref_loc = "all_diff";
  std::string path;
  std::string kl_direction = "truth_learned";
  std::string credit = "decision";
  std::string terminal_prior = "first";
  std::string trace_detail = "summary";
  std::string layouts_file;
};

void add_train_options(CLI::App& app, TrainFlags& f) {
  ExperimentConfig& c = f.cfg;
  app.add_option("--exp_name", c.exp_name, "Experiment name; outputs go to <output_dir>/<exp_name>")->required();
  app.add_option("--gym_id", c.gym_id, "Environment id")->capture_default_str()->check(CLI::IsMember({"gridworld-v1"}));
  app.add_option("--env_layout", c.env_layout, "Grid layout name")->capture_default_str();
  app.add_option("--num_runs", c.num_runs, "Independent agents")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--num_episodes", c.num_episodes, "Episodes per agent")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--num_steps", c.num_steps, "Observations per episode (T)")->capture_default_str()->check(CLI::Range(2, 64));
  app.add_option("--inf_steps", c.inf_steps, "Message-passing sweeps per step")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--action_selection", c.action_selection, "Action rule")->capture_default_str()->check(CLI::IsMember({"kd"}));
  app.add_flag("--learn_b", c.learn_b, "Learn the transition counts (also -lB)")->capture_default_str();
  app.add_option("--num_policies", c.num_policies, "Policies, at most 4^(num_steps-1)")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--pref_type", f.pref_type, "states (hard) or states_manh (soft)")->capture_default_str()->check(CLI::IsMember({"states", "states_manh"}));
  app.add_option("--pref_loc", f.pref_loc, "all_diff (shaped) or all_goal (unshaped)")->capture_default_str()->check(CLI::IsMember({"all_diff", "all_goal"}));
  app.add_option("--seed", c.base_seed, "Base seed; run r uses seed + r")->capture_default_str();
  app.add_option("--path", f.path, "Waypoint tiles for shaped preferences, e.g. 1,2,5,8 (default: horizontal moves first)");
  app.add_option("--kl_direction", f.kl_direction, "Transition KL metric direction")->capture_default_str()->check(CLI::IsMember({"truth_learned", "learned_truth"}));
  app.add_option("--eta", c.eta, "Dirichlet increment per update")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--b_init", c.b_init, "Initial transition concentration")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--b_jitter", c.b_jitter, "Width of the seeded perturbation of initial counts")->capture_default_str()->check(CLI::NonNegativeNumber);
  app.add_option("--policy_precision", c.policy_precision, "Multiplier on G in the policy posterior")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--credit", f.credit, "Policy weighting of transitions in learning")->capture_default_str()->check(CLI::IsMember({"decision", "terminal"}));
  app.add_option("--terminal_prior", f.terminal_prior, "G used as prior in the end-of-episode posterior")->capture_default_str()->check(CLI::IsMember({"none", "first", "last"}));
  app.add_option("--trace_detail", f.trace_detail, "Per-episode trace content")->capture_default_str()->check(CLI::IsMember({"summary", "full"}));
  app.add_option("--layouts_file", f.layouts_file, "JSON file with extra layouts");
  app.add_option("--output_dir", c.output_dir, "Parent directory of the experiment directory")->capture_default_str();
  app.add_option("--threads", c.threads, "Worker threads (0 = hardware concurrency)")->capture_default_str()->check(CLI::NonNegativeNumber);
  app.add_flag("--monitor_fe", c.monitor_fe, "Record the largest F increase across message-passing sweeps")->capture_default_str();
}

std::vector<int> parse_tiles(const std::string& text) {
  std::vector<int> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    const std::string item = text.substr(pos, comma - pos);
    int v = 0;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || ec != std::errc() || ptr != item.data() + item.size())
      throw UsageError("--path: invalid tile '" + item + "'");
    out.push_back(v);
    pos = comma + 1;
  }
  return out;
}

ExperimentConfig finish(TrainFlags& f) {
  ExperimentConfig& c = f.cfg;
  c.pref_type = parse_pref_type(f.pref_type);
  c.shaped = parse_pref_loc(f.pref_loc);
  c.kl_direction = parse_kl_direction(f.kl_direction);
  c.credit = parse_credit_assignment(f.credit);
  c.terminal_prior = parse_terminal_prior(f.terminal_prior);
  c.trace_detail = parse_trace_detail(f.trace_detail);
  if (!f.path.empty()) c.path_override = parse_tiles(f.path);
  if (!f.layouts_file.empty()) c.layouts_file = f.layouts_file;
  try {
    c.validate();
  } catch (const ConfigError& e) {
    throw UsageError(e.what());
  }
  return c;
}

/// CLI11 only knows single-character short flags.
std::vector<std::string> normalize(std::vector<std::string> args) {
  for (auto& a : args)
    if (a == "-lB") a = "--learn_b";
  return args;
}

void parse_into(CLI::App& app, const std::vector<std::string>& args) {
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }
}

void add_export_options(CLI::App& app, ExportRequest& r, std::vector<std::string>& curves, std::string& out_dir) {
  app.add_option("--exp_dir", r.exp_dir, "Experiment directory written by train")->required();
  app.add_option("--out", out_dir, "Output directory (default: <exp_dir>/csv)");
  app.add_option("--curves", curves, "Comma-separated subset of curves (default: all)")
      ->delimiter(',')
      ->check(CLI::IsMember(export_curve_names()));
  app.add_flag("--all_policies", r.options.all_policies, "Write every policy instead of the 16 plot policies")
      ->capture_default_str();
}

bool wants_help(const std::vector<std::string>& args) {
  return std::any_of(args.begin(), args.end(), [](const std::string& a) { return a == "-h" || a == "--help"; });
}

}  // namespace

ExperimentConfig parse_train_args(const std::vector<std::string>& args) {
  CLI::App app{"Train active inference agents"};
  TrainFlags flags;
  add_train_options(app, flags);
  parse_into(app, normalize(args));
  return finish(flags);
}

ExportRequest parse_export_args(const std::vector<std::string>& args) {
  CLI::App app{"Export experiment curves as CSV"};
  ExportRequest r;
  std::vector<std::string> curves;
  std::string out_dir;
  add_export_options(app, r, curves, out_dir);
  parse_into(app, args);
  r.options.selectors = curves;
  r.out_dir = out_dir.empty() ? r.exp_dir / "csv" : std::filesystem::path(out_dir);
  return r;
}

std::vector<std::filesystem::path> export_metrics(const ExportRequest& request) {
  if (!std::filesystem::is_directory(request.exp_dir))
    throw std::runtime_error("experiment directory not found: " + request.exp_dir.string());
  return export_csv(load_metrics(request.exp_dir), request.out_dir, request.options);
}

int run_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::string command = "train";
  std::vector<std::string> rest = args;
  if (!rest.empty() && (rest.front() == "train" || rest.front() == "export")) {
    command = rest.front();
    rest.erase(rest.begin());
  } else if (rest.empty() || (rest.front() == "-h" || rest.front() == "--help")) {
    out << "usage: aif_au [train] --exp_name NAME [options]\n"
           "       aif_au export --exp_dir DIR [options]\n"
           "run `aif_au train --help` or `aif_au export --help` for the options\n";
    return rest.empty() ? kExitUsage : kExitOk;
  } else if (rest.front().rfind('-', 0) != 0) {
    err << "unknown subcommand '" << rest.front() << "' (allowed: train, export)\n";
    return kExitUsage;
  }

  if (wants_help(rest)) {
    CLI::App app{command == "train" ? "Train active inference agents" : "Export experiment curves as CSV",
                 "aif_au " + command};
    TrainFlags flags;
    ExportRequest req;
    std::vector<std::string> curves;
    std::string out_dir;
    if (command == "train") add_train_options(app, flags);
    else add_export_options(app, req, curves, out_dir);
    out << app.help();
    return kExitOk;
  }

  try {
    if (command == "train") {
      const ExperimentConfig cfg = parse_train_args(rest);
      const ExperimentResult result = run_experiment(cfg);
      const auto& m = result.metrics;
      out << "experiment " << cfg.experiment_dir().string() << ": " << m.num_runs << " runs x " << m.num_episodes
          << " episodes\n"
          << std::fixed << std::setprecision(3) << "final success fraction " << m.success_curve.back()
          << ", goal-tile access frequency " << m.state_access[cfg.grid().goal] << '\n';
    } else {
      const ExportRequest req = parse_export_args(rest);
      for (const auto& p : export_metrics(req)) out << p.string() << '\n';
    }
    return kExitOk;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace aif::cli
