#pragma once

#include <iosfwd>
#include <json.hpp>
#include <string>
#include <vector>

#include "meixner/bd_process.hpp"
#include "meixner/spectral.hpp"

namespace meixner {

/// Shortest text that reads back to the same double (17 significant digits).
std::string format_double(double v);

nlohmann::json to_json(const ConstraintResiduals& r);
/// {"lambda":[...], "u":[[...]], "cbar":[...], "residuals":{...}}
nlohmann::json to_json(const SpectralData& sd);
nlohmann::json to_json(const std::vector<SpectrumRoot>& roots);

/// state,count,frequency,stderr
void write_empirical_csv(const EmpiricalDistribution& emp, std::ostream& os);

/// state,count,frequency,stderr,spectral,z followed by one "# chi2=..." line.
void write_comparison_csv(const SimulationComparison& cmp, const EmpiricalDistribution& emp, std::ostream& os);
std::string comparison_summary(const SimulationComparison& cmp, const EmpiricalDistribution& emp);

enum class LogLevel { Quiet = 0, Info = 1, Debug = 2 };

/// Read once from MEIXNER_LOG (quiet | info | debug); info when unset.
LogLevel log_level();
void log(LogLevel level, const std::string& msg);

}  // namespace meixner
