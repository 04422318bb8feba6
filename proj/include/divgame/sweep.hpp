#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "divgame/report.hpp"

namespace divgame {

/// One solved point of a parameter sweep. The thresholds are the no-dividend
/// boundaries of the chosen case, -vbar / B(I1) and -vbar / B(I3) (I4 / I5
/// when the chosen level is low); absent when the candidate investment is.
struct SweepRow {
  double swept_value = 0.0;
  double I_star = 0.0;
  double p0_star = 0.0;
  double p1_star = 0.0;
  SharingLevel level = SharingLevel::High;
  Regime regime = Regime::NoInvestNoPay;
  double platform_utility = 0.0;
  double user_utility = 0.0;
  double effective_valuation = 0.0;
  std::optional<double> threshold_pay;
  std::optional<double> threshold_no_pay;
  bool regime_transition = false;  // regime or level changed from the previous row
};

namespace detail {

inline void apply_sweep_value(ScenarioConfig& cfg, const std::string& parameter, double value) {
  if (parameter == "L") {
    cfg.params.L = value;
  } else if (parameter == "F") {
    cfg.params.F = value;
  } else if (parameter == "V") {
    cfg.params.V = value;
  } else if (parameter == "W") {
    cfg.params.W = value;
  } else if (parameter == "alpha") {
    cfg.params.alpha = value;
  } else if (parameter == "k") {
    cfg.params.k = std::llround(value);  // grid values are rounded to the nearest user count
  } else if (parameter == "beta") {
    cfg.model.beta = value;
  } else if (parameter == "rate") {
    cfg.model.rate = value;
  } else {
    throw std::invalid_argument("sweep: unknown parameter " + parameter);
  }
}

}  // namespace detail

/// Solve the scenario at one sweep value and flatten the chosen solution into
/// a row.
inline SweepRow sweep_row_at(const ScenarioConfig& base, double value) {
  ScenarioConfig cfg = base;
  detail::apply_sweep_value(cfg, base.sweep ? base.sweep->parameter : "L", value);
  cfg.params.validate();
  cfg.model.validate();

  const Equilibrium eq = solve_equilibrium(cfg.params, cfg.model);
  const CaseSolution& s = eq.chosen;
  const PlatformDecision& d = *s.decision;

  SweepRow row;
  row.swept_value = value;
  row.I_star = d.I;
  row.p0_star = d.p0;
  row.p1_star = d.p1;
  row.level = s.level;
  row.regime = s.regime;
  row.platform_utility = *s.platform_utility;
  row.user_utility = *s.user_utility;
  row.effective_valuation = effective_valuation(cfg.params, cfg.model, d.I);

  const CandidateInvestments cands = candidate_investments(cfg.params, cfg.model);
  const auto& stat_pay = s.level == SharingLevel::High ? cands.I1 : cands.I4;
  const auto& stat_nopay = s.level == SharingLevel::High ? cands.I3 : cands.I5;
  const double vbar = cfg.params.vbar();
  if (stat_pay) row.threshold_pay = -vbar / cfg.model.probability(*stat_pay);
  if (stat_nopay) row.threshold_no_pay = -vbar / cfg.model.probability(*stat_nopay);
  return row;
}

/// Run the configured sweep: one row per linearly spaced step, in order.
/// Solver failures abort with the failing value in the message.
inline std::vector<SweepRow> run_sweep(const ScenarioConfig& cfg) {
  if (!cfg.sweep) throw ConfigError("sweep", "missing required section for the sweep command");
  const SweepSpec& spec = *cfg.sweep;
  std::vector<SweepRow> rows;
  rows.reserve(spec.steps);
  for (int i = 0; i < spec.steps; ++i) {
    const double value =
        i + 1 == spec.steps
            ? spec.stop
            : spec.start + (spec.stop - spec.start) * static_cast<double>(i) / (spec.steps - 1);
    try {
      rows.push_back(sweep_row_at(cfg, value));
    } catch (const std::exception& e) {
      throw std::runtime_error("sweep failed at " + spec.parameter + " = " +
                               format_number(value) + ": " + e.what());
    }
    if (i > 0) {
      const auto& prev = rows[i - 1];
      auto& cur = rows[i];
      cur.regime_transition = cur.regime != prev.regime || cur.level != prev.level;
    }
  }
  return rows;
}

inline std::string sweep_csv_header() {
  return "swept_value,I_star,p0_star,p1_star,level,regime,platform_utility,user_utility,"
         "effective_valuation,threshold_pay,threshold_no_pay,regime_transition";
}

inline std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = sweep_csv_header() + "\n";
  for (const SweepRow& r : rows) {
    out += format_number(r.swept_value) + ",";
    out += format_number(r.I_star) + ",";
    out += format_number(r.p0_star) + ",";
    out += format_number(r.p1_star) + ",";
    out += std::string(to_string(r.level)) + ",";
    out += std::string(to_string(r.regime)) + ",";
    out += format_number(r.platform_utility) + ",";
    out += format_number(r.user_utility) + ",";
    out += format_number(r.effective_valuation) + ",";
    out += (r.threshold_pay ? format_number(*r.threshold_pay) : "") + ",";
    out += (r.threshold_no_pay ? format_number(*r.threshold_no_pay) : "") + ",";
    out += r.regime_transition ? "1" : "0";
    out += "\n";
  }
  return out;
}

inline nlohmann::json sweep_json(const ScenarioConfig& cfg, const std::vector<SweepRow>& rows) {
  nlohmann::json jrows = nlohmann::json::array();
  for (const SweepRow& r : rows) {
    nlohmann::json j = {{"swept_value", r.swept_value},
                        {"I_star", r.I_star},
                        {"p0_star", r.p0_star},
                        {"p1_star", r.p1_star},
                        {"level", to_string(r.level)},
                        {"regime", to_string(r.regime)},
                        {"platform_utility", r.platform_utility},
                        {"user_utility", r.user_utility},
                        {"effective_valuation", r.effective_valuation},
                        {"regime_transition", r.regime_transition}};
    j["threshold_pay"] = r.threshold_pay ? nlohmann::json(*r.threshold_pay) : nlohmann::json();
    j["threshold_no_pay"] =
        r.threshold_no_pay ? nlohmann::json(*r.threshold_no_pay) : nlohmann::json();
    jrows.push_back(std::move(j));
  }
  return {{"parameter", cfg.sweep ? cfg.sweep->parameter : ""},
          {"config", {{"params", params_json(cfg.params)}, {"model", model_json(cfg.model)}}},
          {"rows", jrows}};
}

}  // namespace divgame
