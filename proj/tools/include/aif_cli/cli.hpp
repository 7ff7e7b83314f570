#pragma once

// Argument handling for the aif_au tool: `train` runs an experiment, `export`
// turns a finished experiment directory into CSV files.

#include "aif/harness.hpp"

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace aif::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Maps training flags (without the program name) to a validated config.
/// Throws UsageError on unknown flags, bad enum values or bounds violations.
ExperimentConfig parse_train_args(const std::vector<std::string>& args);

struct ExportRequest {
  std::filesystem::path exp_dir;
  std::filesystem::path out_dir;
  ExportOptions options;
};

ExportRequest parse_export_args(const std::vector<std::string>& args);

/// Writes the CSVs of an experiment directory; throws std::runtime_error if
/// the directory or its metrics are missing.
std::vector<std::filesystem::path> export_metrics(const ExportRequest& request);

/// Full entry point. A leading flag (no subcommand) means `train`.
int run_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace aif::cli
