#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gwlab/laws.hpp"

namespace gwlab {

/// Everything a subcommand needs. Validated before any computation.
struct RunConfig {
  std::string subcommand;
  std::optional<std::string> model_path;
  std::optional<int> case_number;
  std::vector<long> n_list{100, 300, 1000};
  long reps = 20000;
  std::vector<double> grid{0.25, 0.5, 1.0};
  std::uint64_t seed = 1;
  std::string out_dir = ".";
  long k = 100;            ///< horizon for simulate / moments
  long paths = 10;         ///< limit: number of limit paths
  long limit_paths = 100000;
  long N = 256;            ///< stationary: pmf support size
  long M = 4096;           ///< stationary: transform points
  std::optional<int> coordinate;  ///< stationary: coordinate of a two-type model
  double T = 1.0;
  double dt = 1e-3;
  SamplingMode sampling = SamplingMode::Aggregate;
  int threads = 0;  ///< not echoed: results never depend on it

  void validate() const;
  /// Verbatim echo written into every output; omits `threads` and `out_dir` so that
  /// outputs compare equal across thread counts and directories.
  nlohmann::json echo() const;
};

struct OutputFile {
  std::string name;
  std::string content;
};

struct CommandResult {
  std::vector<OutputFile> files;
  std::string summary;  ///< one-line human summary for stdout
  int exit_code = 0;
};

/// "gwlab <version>".
std::string tool_version();

/// Runs simulate, moments, stationary, limit or experiment. Throws ValidationError on
/// bad input.
CommandResult run_command(const RunConfig& cfg);

/// Writes the files into `dir` (created if missing). Refuses to overwrite: if any
/// target exists nothing is written and ValidationError is thrown.
void write_outputs(const std::string& dir, const std::vector<OutputFile>& files);

/// printf("%.17g").
std::string format_double(double x);

}  // namespace gwlab
