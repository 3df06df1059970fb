#include <CLI11.hpp>
#include <iostream>
#include <optional>

#include "meixner/commands.hpp"
#include "meixner/error.hpp"
#include "meixner/io.hpp"

namespace {

struct Overrides {
  std::optional<double> beta;
  std::vector<double> c;
  std::optional<int> S, max_deg, M, D;
  std::optional<std::uint64_t> seed;
  std::optional<long> n_traj;
  std::optional<double> t;
  std::optional<std::string> output_dir;

  void attach(CLI::App& app) {
    app.add_option("--beta", beta, "override beta");
    app.add_option("--c", c, "override the rate parameters")->expected(1, -1);
    app.add_option("--S", S, "override limits.S");
    app.add_option("--max-deg", max_deg, "override limits.max_deg");
    app.add_option("--M", M, "override limits.M");
    app.add_option("--D", D, "override limits.D");
    app.add_option("--seed", seed, "override sim.seed");
    app.add_option("--n-traj", n_traj, "override sim.n_traj");
    app.add_option("--t", t, "override sim.t");
    app.add_option("--output-dir", output_dir, "override output_dir");
  }

  void apply(meixner::RunConfig& cfg) const {
    if (beta) cfg.beta = *beta;
    if (!c.empty()) cfg.c = c;
    if (S) cfg.limits.S = *S;
    if (max_deg) cfg.limits.max_deg = *max_deg;
    if (M) cfg.limits.M = *M;
    if (D) cfg.limits.D = *D;
    if (seed) cfg.sim.seed = *seed;
    if (n_traj) cfg.sim.n_traj = *n_traj;
    if (t) cfg.sim.t = *t;
    if (output_dir) cfg.output_dir = *output_dir;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multivariate Meixner polynomials and their birth-death process"};
  app.require_subcommand(1, 1);
  std::string config_path;
  Overrides ov;
  app.add_option("--config", config_path, "JSON run configuration")->required();
  ov.attach(app);
  auto* spectrum = app.add_subcommand("spectrum", "write spectrum.json");
  auto* table = app.add_subcommand("table", "write poly_table.csv");
  auto* verify = app.add_subcommand("verify", "run every check and write verify_report.json");
  auto* simulate = app.add_subcommand("simulate", "simulate and compare with the spectral transition probability");
  for (auto* sub : {spectrum, table, verify, simulate}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : meixner::kExitInvalidInput;
  }

  meixner::RunConfig cfg;
  try {
    cfg = meixner::load_config(config_path);
    ov.apply(cfg);
  } catch (const meixner::Error& e) {
    std::cerr << e.what() << '\n';
    return meixner::kExitInvalidInput;
  }

  meixner::CommandResult res;
  if (spectrum->parsed()) res = meixner::cmd_spectrum(cfg);
  else if (table->parsed()) res = meixner::cmd_table(cfg);
  else if (verify->parsed()) res = meixner::cmd_verify(cfg);
  else res = meixner::cmd_simulate(cfg);

  for (const auto& path : res.outputs) meixner::log(meixner::LogLevel::Info, "wrote " + path.string());
  if (!res.message.empty()) {
    if (res.exit_code == meixner::kExitOk) meixner::log(meixner::LogLevel::Info, res.message);
    else std::cerr << res.message << '\n';
  }
  return res.exit_code;
}
