#include "meixner/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>

#include "meixner/bd_process.hpp"
#include "meixner/error.hpp"
#include "meixner/io.hpp"
#include "meixner/operators.hpp"
#include "meixner/polynomials.hpp"
#include "meixner/rng.hpp"

namespace meixner {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

const char* const kDistinctDiagnostic =
    "the rate parameters c_j must be distinct for the hypergeometric formula; "
    "it does not apply to coincident c, so only the spectrum is reported";

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::DegenerateParameters:
      return kExitDegenerate;
    case ErrorCode::ConstraintViolation:
      return kExitVerificationFailed;
    default:
      return kExitInvalidInput;
  }
}

CommandResult guarded(const std::function<CommandResult()>& body) {
  try {
    return body();
  } catch (const Error& e) {
    return {exit_code_for(e.code()), e.what(), {}};
  } catch (const std::exception& e) {
    return {kExitInvalidInput, e.what(), {}};
  }
}

fs::path prepare_output(const RunConfig& cfg, const std::string& name) {
  fs::create_directories(cfg.output_dir);
  return cfg.output_dir / name;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorCode::ConfigError, "cannot write " + path.string());
  return os;
}

void add(VerifyReport& rep, const std::string& name, double tolerance, const std::function<double(std::string&)>& fn) {
  CheckResult r;
  r.name = name;
  r.tolerance = tolerance;
  const auto start = std::chrono::steady_clock::now();
  try {
    r.residual = fn(r.detail);
    r.pass = r.residual <= tolerance;
  } catch (const std::exception& e) {
    r.residual = kInf;
    r.pass = false;
    r.detail = name + ": " + e.what();
  }
  const std::chrono::duration<double> took = std::chrono::steady_clock::now() - start;
  log(LogLevel::Debug, "check " + name + " residual=" + format_double(r.residual) + (r.pass ? " pass" : " FAIL") +
                           " (" + std::to_string(took.count()) + " s)");
  rep.checks.push_back(std::move(r));
}

/// Smallest S >= S0 whose second-moment tail is negligible next to 1e-10.
int moment_cutoff(const ModelParams& p, int S0) {
  int S = S0;
  const double om = 1.0 - p.c_mass();
  while (tail_bound(p, S) * std::pow((S + 1.0) / om + p.beta, 2) > 1e-10) S += 5;
  return S;
}

}  // namespace

bool VerifyReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

const CheckResult* VerifyReport::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

json VerifyReport::to_json() const {
  json out = json::object();
  for (const auto& c : checks) {
    json entry{{"residual", std::isfinite(c.residual) ? json(c.residual) : json(nullptr)},
               {"tolerance", c.tolerance},
               {"pass", c.pass}};
    if (!c.detail.empty()) entry["detail"] = c.detail;
    out[c.name] = std::move(entry);
  }
  return out;
}

VerifyReport run_verification(const RunConfig& cfg, const ModelParams& p, const SpectralData& sd) {
  VerifyReport rep;
  const int n = p.n();
  const auto& lim = cfg.limits;
  const auto& tol = cfg.tolerances;

  add(rep, "constraints", 1e-10, [&](std::string&) { return constraint_residuals(p, sd.lambda, sd.u).max(); });

  add(rep, "dual_parameters", 1.0 - 1e-15, [&](std::string& detail) {
    if (sd.cbar.minCoeff() <= 0.0) {
      detail = "non-positive cbar";
      return kInf;
    }
    return sd.cbar.sum();
  });

  add(rep, "dense_spectrum", 1e-10, [&](std::string&) {
    const auto dense = dense_spectrum(p);
    double r = 0.0;
    for (int j = 0; j < n; ++j) {
      r = std::max(r, std::abs(sd.lambda[j] - dense[static_cast<std::size_t>(j)]) / std::max(1.0, sd.lambda[j]));
    }
    return r;
  });

  add(rep, "orthogonality", tol.eps_orth, [&](std::string& detail) {
    const int S = orthogonality_cutoff(p, sd, lim.max_deg, 1e-2 * tol.eps_orth, lim.S);
    const auto o = orthogonality_check(p, sd, lim.max_deg, S, 1e-2 * tol.eps_orth);
    detail = "S=" + std::to_string(S);
    return std::max(o.max_offdiag, o.max_diag_rel);
  });

  add(rep, "moments", 1e-8, [&](std::string& detail) {
    const int S = moment_cutoff(p, lim.S);
    const auto m = moment_check(p, S);
    detail = "S=" + std::to_string(S);
    return std::max(m.mean_residual, m.second_residual);
  });

  add(rep, "eigen", tol.eps_eigen, [&](std::string&) {
    const auto sample = enumerate_lattice(n, 10);
    double r = 0.0;
    for (const auto& m : enumerate_lattice(n, lim.max_deg)) r = std::max(r, eigen_check(p, sd, m, sample));
    return r;
  });

  const int S_op = std::min(lim.S, 10);
  add(rep, "factorization", 1e-12, [&](std::string& detail) {
    const auto f = factorization_check(p, S_op);
    detail = "S=" + std::to_string(S_op);
    return std::max(f.factorization, f.zero_mode_A);
  });

  add(rep, "h_symmetry", 0.0, [&](std::string&) {
    const Eigen::MatrixXd H = build_H(p, S_op).to_dense();
    return (H - H.transpose()).cwiseAbs().maxCoeff();
  });

  add(rep, "zero_mode", 1e-10, [&](std::string&) { return zero_mode_residual(p, S_op); });

  add(rep, "interior_spectrum", 1e-8, [&](std::string&) { return std::max(0.0, -min_interior_eigenvalue(p, S_op)); });

  add(rep, "detailed_balance", 1e-12, [&](std::string&) {
    double r = 0.0;
    for (const auto& x : enumerate_lattice(n, lim.S - 1)) {
      const double wx = weight(p, x);
      for (int j = 0; j < n; ++j) {
        const MultiIndex y = x.plus(j);
        const double a = wx * birth_rate(p, x, j);
        const double b = weight(p, y) * death_rate(p, y, j);
        r = std::max(r, std::abs(a - b) / std::max(a, b));
      }
    }
    return r;
  });

  const auto points = genfun_sample_points(p, sd, 20, cfg.sim.seed);

  add(rep, "genfun_identity", 1e-7, [&](std::string&) {
    double r = 0.0;
    for (const auto& [x, t] : points) r = std::max(r, genfun_identity_check(p, sd, x, t, 1e-5).residual);
    return r;
  });

  add(rep, "genfun_fd_order", 0.2, [&](std::string& detail) {
    double worst = 0.0;
    int measured = 0;
    for (const auto& [x, t] : points) {
      const double order = genfun_fd_order(p, sd, x, t, 1e-2);
      if (std::isnan(order)) continue;
      ++measured;
      worst = std::max(worst, std::abs(order - 2.0));
    }
    detail = std::to_string(measured) + " points above the noise floor";
    return worst;
  });

  add(rep, "oracle_equivalence", 1e-9, [&](std::string&) {
    double r = 0.0;
    const int D = std::min(lim.max_deg, lim.D);
    for (const auto& m : enumerate_lattice(n, D)) {
      for (const auto& x : enumerate_lattice(n, 6)) {
        const double a = meixner_eval(p, sd, m, x);
        const double g = genfun_eval(p, sd, m, x, lim.D);
        r = std::max(r, std::abs(a - g) / std::max(1.0, std::abs(a)));
      }
    }
    return r;
  });

  add(rep, "chapman_kolmogorov", tol.eps_ck, [&](std::string& detail) {
    const MultiIndex x(n);
    const MultiIndex y = MultiIndex::unit(n, 0);
    const auto ck = chapman_kolmogorov_check(p, sd, x, y, 0.3, 0.3, lim.S, lim.M);
    detail = "truncation_estimate=" + format_double(ck.truncation_estimate);
    return ck.residual;
  });

  if (n == 1) {
    add(rep, "single_variable_polynomials", 1e-12, [&](std::string&) {
      double r = 0.0;
      for (int m = 0; m <= 10; ++m) {
        for (int x = 0; x <= 10; ++x) {
          const double a = meixner_eval(p, sd, MultiIndex{m}, MultiIndex{x});
          const double b = meixner_1d(p.beta, p.c[0], m, x);
          r = std::max(r, std::abs(a - b) / std::max(1.0, std::abs(b)));
        }
      }
      return r;
    });
    add(rep, "single_variable_eigenvalue", 1e-14, [&](std::string&) {
      const double c = p.c[0];
      return std::abs(sd.lambda[0] - (1.0 - c) / c) / std::max(1.0, (1.0 - c) / c);
    });
  }
  return rep;
}

CommandResult cmd_spectrum(const RunConfig& cfg) {
  return guarded([&] {
    const ModelParams p = cfg.model();
    const fs::path out = prepare_output(cfg, "spectrum.json");
    json doc{{"beta", p.beta}, {"c", p.c}};
    CommandResult res;
    if (p.degenerate) {
      doc["degenerate"] = true;
      doc["roots"] = to_json(degenerate_spectrum(p));
      doc["diagnostic"] = kDistinctDiagnostic;
      res.exit_code = kExitDegenerate;
      res.message = std::string("DegenerateParameters: ") + kDistinctDiagnostic;
    } else {
      const SpectralData sd = build_spectral(p);
      doc["degenerate"] = false;
      doc.update(to_json(sd));
      const double worst = sd.residuals.max();
      doc["tolerance"] = 1e-10;
      res.exit_code = worst <= 1e-10 ? kExitOk : kExitVerificationFailed;
      res.message = "max constraint residual " + format_double(worst);
    }
    open_output(out) << doc.dump(2) << '\n';
    res.outputs.push_back(out);
    return res;
  });
}

CommandResult cmd_table(const RunConfig& cfg) {
  return guarded([&] {
    const ModelParams p = cfg.model();
    const SpectralData sd = build_spectral(p);
    const fs::path out = prepare_output(cfg, "poly_table.csv");
    auto os = open_output(out);
    write_csv(poly_table(p, sd, cfg.limits.max_deg, cfg.limits.S), os);
    return CommandResult{kExitOk, "wrote " + out.string(), {out}};
  });
}

CommandResult cmd_verify(const RunConfig& cfg, const SpectralData& sd) {
  return guarded([&] {
    const ModelParams p = cfg.model();
    const VerifyReport rep = run_verification(cfg, p, sd);
    const fs::path out = prepare_output(cfg, "verify_report.json");
    open_output(out) << rep.to_json().dump(2) << '\n';
    CommandResult res{rep.all_pass() ? kExitOk : kExitVerificationFailed, {}, {out}};
    int failed = 0;
    for (const auto& c : rep.checks) {
      if (!c.pass) {
        ++failed;
        res.message += (res.message.empty() ? "failed: " : ", ") + c.name;
      }
    }
    if (failed == 0) res.message = "all " + std::to_string(rep.checks.size()) + " checks pass";
    return res;
  });
}

CommandResult cmd_verify(const RunConfig& cfg) {
  return guarded([&] {
    const ModelParams p = cfg.model();
    return cmd_verify(cfg, build_spectral(p));
  });
}

CommandResult cmd_simulate(const RunConfig& cfg) {
  return guarded([&] {
    const ModelParams p = cfg.model();
    const SpectralData sd = build_spectral(p);
    if (!(cfg.sim.t > 0.0)) throw Error(ErrorCode::NegativeTime, "simulate needs sim.t > 0");
    const EmpiricalDistribution emp = simulate(p, cfg.start_state(), cfg.sim.t, cfg.sim.seed, cfg.sim.n_traj);
    const SimulationComparison cmp = compare_with_spectral(p, sd, emp);

    const fs::path out = prepare_output(cfg, "sim_vs_spectral.csv");
    const fs::path emp_out = cfg.output_dir / "empirical.csv";
    {
      auto os = open_output(out);
      write_comparison_csv(cmp, emp, os);
      auto es = open_output(emp_out);
      write_empirical_csv(emp, es);
    }
    const bool ok = cmp.p_value > 1e-3 && cmp.max_abs_z <= 4.0 && emp.cap_hits == 0;
    return CommandResult{ok ? kExitOk : kExitVerificationFailed, comparison_summary(cmp, emp), {out, emp_out}};
  });
}

}  // namespace meixner
