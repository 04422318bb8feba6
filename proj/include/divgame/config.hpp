#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "divgame/game.hpp"
#include "divgame/oracle.hpp"

namespace divgame {

/// Magnitude cap on every numeric config value. Keeps the library's fixed
/// absolute tolerances (1e-12 money units) meaningful.
inline constexpr double kMaxMagnitude = 1e9;

/// Validation failure with the offending field path, e.g. "params.alpha".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& message)
      : std::runtime_error(path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

struct SweepSpec {
  std::string parameter;  // one of L, F, V, W, alpha, k, beta, rate
  double start = 0.0;
  double stop = 0.0;
  int steps = 2;
};

struct ScenarioConfig {
  GameParams params;
  BreachModel model;
  OracleConfig oracle;  // defaults when the document omits the section
  std::optional<SweepSpec> sweep;
};

namespace detail {

using nlohmann::json;

inline void expect_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
}

inline void reject_unknown_keys(const json& j, const std::string& path,
                                std::initializer_list<const char*> allowed) {
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* key : allowed) known = known || item.key() == key;
    if (!known) throw ConfigError(path.empty() ? item.key() : path + "." + item.key(), "unknown field");
  }
}

inline double get_number(const json& j, const std::string& path, const char* field) {
  if (!j.contains(field)) throw ConfigError(path + "." + field, "missing required field");
  const json& v = j.at(field);
  if (!v.is_number()) throw ConfigError(path + "." + field, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x) || std::abs(x) > kMaxMagnitude)
    throw ConfigError(path + "." + field, "magnitude must be finite and at most 1e9");
  return x;
}

inline double get_number_or(const json& j, const std::string& path, const char* field,
                            double fallback) {
  return j.contains(field) ? get_number(j, path, field) : fallback;
}

inline std::int64_t get_integer(const json& j, const std::string& path, const char* field) {
  if (!j.contains(field)) throw ConfigError(path + "." + field, "missing required field");
  const json& v = j.at(field);
  if (!v.is_number_integer() && !v.is_number_unsigned())
    throw ConfigError(path + "." + field, "expected an integer");
  const auto x = v.get<std::int64_t>();
  if (std::abs(static_cast<double>(x)) > kMaxMagnitude)
    throw ConfigError(path + "." + field, "magnitude must be at most 1e9");
  return x;
}

inline GameParams parse_params(const json& j) {
  expect_object(j, "params");
  reject_unknown_keys(j, "params",
                      {"k", "S", "F", "V", "W", "L", "alpha", "revenue_high", "revenue_low"});
  GameParams p;
  p.k = get_integer(j, "params", "k");
  p.S = get_number(j, "params", "S");
  p.F = get_number(j, "params", "F");
  p.V = get_number(j, "params", "V");
  p.W = get_number(j, "params", "W");
  p.L = get_number(j, "params", "L");
  p.alpha = get_number(j, "params", "alpha");
  p.revenue_high = get_number(j, "params", "revenue_high");
  p.revenue_low = get_number(j, "params", "revenue_low");
  if (p.k < 1) throw ConfigError("params.k", "must be at least 1");
  auto nonneg = [](const char* name, double x) {
    if (x < 0.0) throw ConfigError(std::string("params.") + name, "must be non-negative");
  };
  nonneg("S", p.S);
  nonneg("F", p.F);
  nonneg("V", p.V);
  nonneg("W", p.W);
  nonneg("L", p.L);
  if (!(p.alpha > 0.0 && p.alpha < 1.0))
    throw ConfigError("params.alpha", "must lie in the open interval (0, 1)");
  return p;
}

inline BreachModel parse_model(const json& j) {
  expect_object(j, "model");
  reject_unknown_keys(j, "model", {"family", "beta", "rate", "scale"});
  if (!j.contains("family")) throw ConfigError("model.family", "missing required field");
  if (!j.at("family").is_string()) throw ConfigError("model.family", "expected a string");
  const std::string family = j.at("family").get<std::string>();
  BreachModel m;
  if (family == "exponential") {
    m.family = BreachFamily::Exponential;
  } else if (family == "power_law") {
    m.family = BreachFamily::PowerLaw;
  } else {
    throw ConfigError("model.family", "must be \"exponential\" or \"power_law\"");
  }
  m.beta = get_number(j, "model", "beta");
  m.rate = get_number(j, "model", "rate");
  if (m.family == BreachFamily::PowerLaw) {
    m.scale = get_number(j, "model", "scale");
  } else {
    m.scale = get_number_or(j, "model", "scale", 1.0);
  }
  if (!(m.beta > 0.0 && m.beta <= 1.0)) throw ConfigError("model.beta", "must lie in (0, 1]");
  if (!(m.rate > 0.0)) throw ConfigError("model.rate", "must be positive");
  if (!(m.scale > 0.0)) throw ConfigError("model.scale", "must be positive");
  return m;
}

inline OracleConfig parse_oracle(const json& j) {
  expect_object(j, "oracle");
  reject_unknown_keys(j, "oracle",
                      {"I_max", "grid_points", "refine_rounds", "tol_objective", "tol_decision"});
  OracleConfig cfg;
  cfg.I_max = get_number_or(j, "oracle", "I_max", cfg.I_max);
  if (j.contains("grid_points"))
    cfg.grid_points = static_cast<int>(get_integer(j, "oracle", "grid_points"));
  if (j.contains("refine_rounds"))
    cfg.refine_rounds = static_cast<int>(get_integer(j, "oracle", "refine_rounds"));
  cfg.tol_objective = get_number_or(j, "oracle", "tol_objective", cfg.tol_objective);
  cfg.tol_decision = get_number_or(j, "oracle", "tol_decision", cfg.tol_decision);
  if (!(cfg.I_max > 0.0)) throw ConfigError("oracle.I_max", "must be positive");
  if (cfg.grid_points < 16) throw ConfigError("oracle.grid_points", "must be at least 16");
  if (cfg.refine_rounds < 0) throw ConfigError("oracle.refine_rounds", "must be non-negative");
  if (!(cfg.tol_objective > 0.0)) throw ConfigError("oracle.tol_objective", "must be positive");
  if (!(cfg.tol_decision > 0.0)) throw ConfigError("oracle.tol_decision", "must be positive");
  return cfg;
}

/// Domain check for one value of the swept parameter. The sweep is linear, so
/// valid endpoints keep every interior grid value valid too.
inline void check_sweep_value(const std::string& parameter, double value, const char* which) {
  const std::string path = std::string("sweep.") + which;
  if (parameter == "alpha") {
    if (!(value > 0.0 && value < 1.0)) throw ConfigError(path, "alpha values must lie in (0, 1)");
  } else if (parameter == "beta") {
    if (!(value > 0.0 && value <= 1.0)) throw ConfigError(path, "beta values must lie in (0, 1]");
  } else if (parameter == "rate") {
    if (!(value > 0.0)) throw ConfigError(path, "rate values must be positive");
  } else if (parameter == "k") {
    if (!(value >= 1.0)) throw ConfigError(path, "k values must be at least 1");
  } else {
    if (!(value >= 0.0)) throw ConfigError(path, "values must be non-negative");
  }
}

inline SweepSpec parse_sweep(const json& j) {
  expect_object(j, "sweep");
  reject_unknown_keys(j, "sweep", {"parameter", "start", "stop", "steps"});
  if (!j.contains("parameter")) throw ConfigError("sweep.parameter", "missing required field");
  if (!j.at("parameter").is_string()) throw ConfigError("sweep.parameter", "expected a string");
  SweepSpec s;
  s.parameter = j.at("parameter").get<std::string>();
  static constexpr const char* kAllowed[] = {"L", "F", "V", "W", "alpha", "k", "beta", "rate"};
  bool known = false;
  for (const char* name : kAllowed) known = known || s.parameter == name;
  if (!known)
    throw ConfigError("sweep.parameter", "must be one of L, F, V, W, alpha, k, beta, rate");
  s.start = get_number(j, "sweep", "start");
  s.stop = get_number(j, "sweep", "stop");
  s.steps = static_cast<int>(get_integer(j, "sweep", "steps"));
  if (s.steps < 2) throw ConfigError("sweep.steps", "must be at least 2");
  check_sweep_value(s.parameter, s.start, "start");
  check_sweep_value(s.parameter, s.stop, "stop");
  return s;
}

}  // namespace detail

/// Parse and validate a scenario document. Every invariant of the nested
/// types is enforced here with a field-path error message; unknown fields are
/// rejected.
inline ScenarioConfig parse_config(const nlohmann::json& doc) {
  detail::expect_object(doc, "<document>");
  detail::reject_unknown_keys(doc, "", {"params", "model", "oracle", "sweep"});
  if (!doc.contains("params")) throw ConfigError("params", "missing required section");
  if (!doc.contains("model")) throw ConfigError("model", "missing required section");
  ScenarioConfig cfg;
  cfg.params = detail::parse_params(doc.at("params"));
  cfg.model = detail::parse_model(doc.at("model"));
  if (doc.contains("oracle")) cfg.oracle = detail::parse_oracle(doc.at("oracle"));
  if (doc.contains("sweep")) cfg.sweep = detail::parse_sweep(doc.at("sweep"));
  return cfg;
}

inline ScenarioConfig parse_config_text(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("<document>", std::string("malformed JSON: ") + e.what());
  }
  return parse_config(doc);
}

inline ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<document>", "cannot open config file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

}  // namespace divgame
