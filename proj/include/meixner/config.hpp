#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "meixner/model.hpp"

namespace meixner {

struct Limits {
  int S = 30;  ///< lattice cutoff for tables, operators and Chapman-Kolmogorov
  int max_deg = 3;  ///< largest |m| in tables and checks
  int M = 15;  ///< spectral truncation |m| <= M
  int D = kDefaultSeriesCap;
  static constexpr int kDefaultSeriesCap = 8;
};

struct Tolerances {
  double eps_orth = 1e-6;
  double eps_eigen = 1e-8;
  double eps_ck = 1e-5;
};

struct SimSettings {
  std::uint64_t seed = 42;
  long n_traj = 200000;
  double t = 1.0;
  std::vector<int> x0;  ///< empty means the origin
};

/// Everything one CLI invocation needs:
/// {"beta":1.5,"c":[0.2,0.3],"limits":{...},"tolerances":{...},"sim":{...},"output_dir":"out"}
struct RunConfig {
  double beta = 1.0;
  std::vector<double> c;
  Limits limits;
  Tolerances tolerances;
  SimSettings sim;
  std::filesystem::path output_dir = "out";

  /// validate_params on (beta, c); throws the model's error codes.
  ModelParams model() const;
  MultiIndex start_state() const;
};

/// Parses and range-checks a config document. Syntax errors report the
/// line and column; type and range errors name the offending field. Both
/// raise Error(ConfigError). Model parameters are only validated by model().
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

}  // namespace meixner
