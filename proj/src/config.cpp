#include "meixner/config.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "meixner/error.hpp"

namespace meixner {

namespace {

using nlohmann::json;

[[noreturn]] void field_error(const std::string& field, const std::string& what) {
  throw Error(ErrorCode::ConfigError, "field '" + field + "': " + what);
}

template <class T>
T get_field(const json& obj, const std::string& key, const std::string& path, T fallback, bool required = false) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    if (required) field_error(path, "missing");
    return fallback;
  }
  try {
    return it->get<T>();
  } catch (const json::exception& e) {
    field_error(path, std::string("wrong type (") + it->type_name() + ")");
  }
}

void require_positive(double v, const std::string& path) {
  if (!(v > 0.0)) field_error(path, "must be positive");
}

void require_unit_interval(double v, const std::string& path) {
  if (!(v > 0.0 && v < 1.0)) field_error(path, "must lie in (0, 1)");
}

std::string locate(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace

ModelParams RunConfig::model() const { return validate_params(beta, c); }

MultiIndex RunConfig::start_state() const {
  if (sim.x0.empty()) return MultiIndex(static_cast<int>(c.size()));
  return MultiIndex(sim.x0);
}

RunConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ConfigError, "syntax error at " + locate(text, e.byte > 0 ? e.byte - 1 : 0));
  }
  if (!doc.is_object()) throw Error(ErrorCode::ConfigError, "top level must be a JSON object");

  RunConfig cfg;
  cfg.beta = get_field<double>(doc, "beta", "beta", 0.0, true);
  cfg.c = get_field<std::vector<double>>(doc, "c", "c", {}, true);
  if (cfg.c.empty()) field_error("c", "needs at least one entry");

  if (auto it = doc.find("limits"); it != doc.end()) {
    if (!it->is_object()) field_error("limits", "must be an object");
    auto& L = cfg.limits;
    L.S = get_field<int>(*it, "S", "limits.S", L.S);
    L.max_deg = get_field<int>(*it, "max_deg", "limits.max_deg", L.max_deg);
    L.M = get_field<int>(*it, "M", "limits.M", L.M);
    L.D = get_field<int>(*it, "D", "limits.D", L.D);
  }
  require_positive(cfg.limits.S, "limits.S");
  require_positive(cfg.limits.max_deg, "limits.max_deg");
  require_positive(cfg.limits.M, "limits.M");
  require_positive(cfg.limits.D, "limits.D");

  if (auto it = doc.find("tolerances"); it != doc.end()) {
    if (!it->is_object()) field_error("tolerances", "must be an object");
    auto& T = cfg.tolerances;
    T.eps_orth = get_field<double>(*it, "eps_orth", "tolerances.eps_orth", T.eps_orth);
    T.eps_eigen = get_field<double>(*it, "eps_eigen", "tolerances.eps_eigen", T.eps_eigen);
    T.eps_ck = get_field<double>(*it, "eps_ck", "tolerances.eps_ck", T.eps_ck);
  }
  require_unit_interval(cfg.tolerances.eps_orth, "tolerances.eps_orth");
  require_unit_interval(cfg.tolerances.eps_eigen, "tolerances.eps_eigen");
  require_unit_interval(cfg.tolerances.eps_ck, "tolerances.eps_ck");

  if (auto it = doc.find("sim"); it != doc.end()) {
    if (!it->is_object()) field_error("sim", "must be an object");
    auto& s = cfg.sim;
    s.seed = get_field<std::uint64_t>(*it, "seed", "sim.seed", s.seed);
    s.n_traj = get_field<long>(*it, "n_traj", "sim.n_traj", s.n_traj);
    s.t = get_field<double>(*it, "t", "sim.t", s.t);
    s.x0 = get_field<std::vector<int>>(*it, "x0", "sim.x0", s.x0);
  }
  require_positive(static_cast<double>(cfg.sim.n_traj), "sim.n_traj");
  if (!(cfg.sim.t >= 0.0)) field_error("sim.t", "must be nonnegative");
  if (!cfg.sim.x0.empty()) {
    if (cfg.sim.x0.size() != cfg.c.size()) field_error("sim.x0", "must have one entry per c_j");
    for (int v : cfg.sim.x0) {
      if (v < 0) field_error("sim.x0", "entries must be nonnegative");
    }
  }

  cfg.output_dir = get_field<std::string>(doc, "output_dir", "output_dir", cfg.output_dir.string());
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace meixner
