#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace qbat::cli {

inline constexpr const char* kToolName = "qbat";
inline constexpr const char* kToolVersion = "0.1.0";

enum ExitCode : int {
  kSuccess = 0,
  kInternalError = 1,
  kConfigError = 2,
  kResourceError = 3,
  kValidationFailure = 4,
};

/// Flag values that override fields of the loaded config.
struct Overrides {
  std::string output_dir;
  long dense_cap = -1;
  double t_max = -1.0;
  long n_steps = -1;
};

/// Executes one command config; writes artifacts plus manifest.json into the
/// output directory. Returns an ExitCode.
int run_config(const nlohmann::json& config, const Overrides& overrides, std::ostream& out,
               std::ostream& err);

/// Full command-line entry point: `qbat <command> --config file.json [flags]`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qbat::cli
