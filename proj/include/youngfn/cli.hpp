#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "youngfn/verify.hpp"
#include "youngfn/young.hpp"

namespace youngfn {

enum ExitCode : int { kExitOk = 0, kExitVerifyFailed = 1, kExitInput = 2, kExitInternal = 3 };

/// Batch configuration. Relative paths are resolved against the config file's directory.
struct Config {
  std::optional<double> p;  // defaults to the measures document's p
  ThetaSpec theta = ThetaSpec::sqrt();
  std::optional<double> epsilon;
  std::string measures;
  int horizon = kDefaultHorizon;
  VerifyOptions verify;
  std::optional<std::string> artifact_out;
  std::optional<std::string> report_out;
};

/// Strict schema: unknown keys and out-of-range values raise ValidationError.
Config parse_config(const std::string& json_text, const std::string& base_dir = ".");
Config load_config(const std::string& path);

/// Family named by the config, with the config's p applied.
MeasureFamily config_family(const Config& cfg);

/// Whole CLI; returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace youngfn
