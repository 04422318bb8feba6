#pragma once

#include <charconv>
#include <string>
#include <vector>

#include <json.hpp>

#include "divgame/config.hpp"
#include "divgame/oracle.hpp"
#include "divgame/solver.hpp"

namespace divgame {

inline const char* to_string(SharingLevel level) {
  return level == SharingLevel::High ? "high" : "low";
}

inline const char* to_string(BreachFamily family) {
  return family == BreachFamily::Exponential ? "exponential" : "power_law";
}

inline const char* to_string(Regime regime) {
  switch (regime) {
    case Regime::PayDividend: return "pay_dividend";
    case Regime::InvestToBoundary: return "invest_to_boundary";
    case Regime::InvestUnconstrained: return "invest_unconstrained";
    case Regime::NoInvestPay: return "no_invest_pay";
    case Regime::NoInvestNoPay: return "no_invest_no_pay";
  }
  return "unknown";
}

/// Shortest decimal that round-trips to the same double. Keeps CSV output
/// bit-stable across runs.
inline std::string format_number(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

/// RFC-4180-style field quoting: only fields containing commas, quotes or
/// newlines are wrapped, with embedded quotes doubled.
inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string quoted = "\"";
  for (const char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

inline nlohmann::json params_json(const GameParams& p) {
  return {{"k", p.k},       {"S", p.S},
          {"F", p.F},       {"V", p.V},
          {"W", p.W},       {"L", p.L},
          {"alpha", p.alpha}, {"revenue_high", p.revenue_high},
          {"revenue_low", p.revenue_low}};
}

inline nlohmann::json model_json(const BreachModel& m) {
  return {{"family", to_string(m.family)}, {"beta", m.beta}, {"rate", m.rate}, {"scale", m.scale}};
}

inline nlohmann::json decision_json(const PlatformDecision& d) {
  return {{"I", d.I}, {"p0", d.p0}, {"p1", d.p1}};
}

inline nlohmann::json case_solution_json(const CaseSolution& s) {
  nlohmann::json j = {{"level", to_string(s.level)}, {"feasible", s.feasible}};
  if (s.feasible) {
    j["regime"] = to_string(s.regime);
    j["decision"] = decision_json(*s.decision);
    j["platform_utility"] = *s.platform_utility;
    j["user_utility"] = *s.user_utility;
  }
  return j;
}

inline nlohmann::json equilibrium_json(const Equilibrium& eq) {
  return {{"chosen", case_solution_json(eq.chosen)},
          {"case1", case_solution_json(eq.case1)},
          {"case2", case_solution_json(eq.case2)},
          {"tie_broken", eq.tie_broken}};
}

inline nlohmann::json oracle_result_json(const OracleResult& r) {
  return {{"decision", decision_json(r.decision)},
          {"level", to_string(r.level)},
          {"platform_utility", r.platform_utility},
          {"near_ceiling", r.near_ceiling}};
}

inline nlohmann::json verification_json(const VerificationReport& r) {
  nlohmann::json deltas = {{"utility_rel", r.utility_delta_rel}};
  deltas["I"] = r.I_delta ? nlohmann::json(*r.I_delta) : nlohmann::json();
  deltas["p0"] = r.p0_delta ? nlohmann::json(*r.p0_delta) : nlohmann::json();
  deltas["p1"] = r.p1_delta ? nlohmann::json(*r.p1_delta) : nlohmann::json();
  return {{"instance", {{"params", params_json(r.params)}, {"model", model_json(r.model)}}},
          {"closed_form", equilibrium_json(r.closed_form)},
          {"oracle", oracle_result_json(r.oracle)},
          {"deltas", deltas},
          {"levels_agree", r.levels_agree},
          {"pass", r.pass},
          {"notes", r.notes}};
}

/// Solve one instance and emit the full structured report: the equilibrium,
/// both case reports, regime labels, and warnings.
inline nlohmann::json run_solve(const ScenarioConfig& cfg) {
  const Equilibrium eq = solve_equilibrium(cfg.params, cfg.model);
  std::vector<std::string> warnings;
  if (*eq.chosen.platform_utility < 0.0)
    warnings.push_back("platform utility is negative at the equilibrium");
  if (eq.chosen.decision->I >= 0.99 * cfg.oracle.I_max)
    warnings.push_back("optimal investment is within 1% of the oracle search ceiling I_max");
  return {{"config", {{"params", params_json(cfg.params)}, {"model", model_json(cfg.model)}}},
          {"equilibrium", equilibrium_json(eq)},
          {"warnings", warnings}};
}

/// One-row CSV flavor of the solve report (chosen solution only).
inline std::string run_solve_csv(const ScenarioConfig& cfg) {
  const Equilibrium eq = solve_equilibrium(cfg.params, cfg.model);
  const CaseSolution& s = eq.chosen;
  const PlatformDecision& d = *s.decision;
  std::string out =
      "I_star,p0_star,p1_star,level,regime,platform_utility,user_utility,effective_valuation\n";
  out += format_number(d.I) + "," + format_number(d.p0) + "," + format_number(d.p1) + ",";
  out += std::string(to_string(s.level)) + "," + to_string(s.regime) + ",";
  out += format_number(*s.platform_utility) + "," + format_number(*s.user_utility) + ",";
  out += format_number(effective_valuation(cfg.params, cfg.model, d.I));
  out += "\n";
  return out;
}

}  // namespace divgame
