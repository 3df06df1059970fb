#pragma once

#include <filesystem>
#include <json.hpp>
#include <string>
#include <vector>

#include "meixner/config.hpp"
#include "meixner/spectral.hpp"

namespace meixner {

enum ExitCode : int {
  kExitOk = 0,
  kExitInvalidInput = 1,
  kExitDegenerate = 2,
  kExitVerificationFailed = 3,
};

struct CommandResult {
  int exit_code = kExitOk;
  std::string message;
  std::vector<std::filesystem::path> outputs;
};

struct CheckResult {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string detail;  ///< error text when the check threw, otherwise the cutoff used
};

struct VerifyReport {
  std::vector<CheckResult> checks;

  bool all_pass() const;
  const CheckResult* find(const std::string& name) const;
  /// {name: {"residual", "tolerance", "pass", "detail"}}
  nlohmann::json to_json() const;
};

/// Runs every consistency check on (p, sd). sd may be deliberately
/// perturbed; nothing is rebuilt from p except where a check says so.
VerifyReport run_verification(const RunConfig& cfg, const ModelParams& p, const SpectralData& sd);

/// Each command writes into cfg.output_dir (created if missing) and never
/// throws: failures come back as an exit code and a message.
CommandResult cmd_spectrum(const RunConfig& cfg);
CommandResult cmd_table(const RunConfig& cfg);
CommandResult cmd_verify(const RunConfig& cfg);
CommandResult cmd_verify(const RunConfig& cfg, const SpectralData& sd);
CommandResult cmd_simulate(const RunConfig& cfg);

}  // namespace meixner
