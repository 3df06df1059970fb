#include "meixner/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string_view>

namespace meixner {

using nlohmann::json;

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json to_json(const ConstraintResiduals& r) {
  return json{{"secular", r.secular},         {"u_linear", r.u_linear},       {"u_quadratic", r.u_quadratic},
              {"b_linear", r.b_linear},       {"b_quadratic", r.b_quadratic}, {"max", r.max()}};
}

json to_json(const SpectralData& sd) {
  const int n = sd.n();
  json lambda = json::array();
  json cbar = json::array();
  json u = json::array();
  for (int j = 0; j < n; ++j) {
    lambda.push_back(sd.lambda[j]);
    cbar.push_back(sd.cbar[j]);
  }
  for (int i = 0; i < n; ++i) {
    json row = json::array();
    for (int j = 0; j < n; ++j) row.push_back(sd.u(i, j));
    u.push_back(std::move(row));
  }
  return json{{"lambda", lambda}, {"u", u}, {"cbar", cbar}, {"residuals", to_json(sd.residuals)}};
}

json to_json(const std::vector<SpectrumRoot>& roots) {
  json out = json::array();
  for (const auto& r : roots) out.push_back({{"value", r.value}, {"multiplicity", r.multiplicity}});
  return out;
}

void write_empirical_csv(const EmpiricalDistribution& emp, std::ostream& os) {
  os << "state,count,frequency,stderr\n";
  for (const auto& [y, count] : emp.counts) {
    os << y.to_string() << ',' << count << ',' << format_double(emp.frequency(y)) << ','
       << format_double(emp.stderr_of(y)) << '\n';
  }
}

std::string comparison_summary(const SimulationComparison& cmp, const EmpiricalDistribution& emp) {
  return "# chi2=" + format_double(cmp.chi2) + ",dof=" + std::to_string(cmp.dof) +
         ",p_value=" + format_double(cmp.p_value) + ",max_abs_z=" + format_double(cmp.max_abs_z) +
         ",n_traj=" + std::to_string(emp.n_traj) + ",cap_hits=" + std::to_string(emp.cap_hits) +
         ",seed=" + std::to_string(emp.seed);
}

void write_comparison_csv(const SimulationComparison& cmp, const EmpiricalDistribution& emp, std::ostream& os) {
  os << "state,count,frequency,stderr,spectral,z\n";
  for (const auto& r : cmp.rows) {
    os << r.state.to_string() << ',' << r.count << ',' << format_double(r.frequency) << ','
       << format_double(r.stderr_value) << ',' << format_double(r.spectral) << ',' << format_double(r.z) << '\n';
  }
  os << comparison_summary(cmp, emp) << '\n';
}

LogLevel log_level() {
  static const LogLevel level = [] {
    const char* env = std::getenv("MEIXNER_LOG");
    if (env == nullptr) return LogLevel::Info;
    const std::string_view v(env);
    if (v == "quiet" || v == "0") return LogLevel::Quiet;
    if (v == "debug" || v == "2") return LogLevel::Debug;
    return LogLevel::Info;
  }();
  return level;
}

void log(LogLevel level, const std::string& msg) {
  if (static_cast<int>(level) <= static_cast<int>(log_level())) std::cerr << msg << '\n';
}

}  // namespace meixner
