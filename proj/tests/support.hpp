#pragma once

// Shared helpers for the solver tests and the acceptance suite: relative
// comparisons and an independent evaluation of the closed-form solution
// table, reconstructing (I*, dividend) from a regime label and the candidate
// investments.

#include <algorithm>
#include <cmath>
#include <optional>

#include "divgame/solver.hpp"

namespace divtest {

using namespace divgame;

inline bool rel_close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

struct TableRefs {
  std::optional<double> stat_pay;    // I1 (case 1) or I4 (case 2)
  std::optional<double> stat_nopay;  // I3 (case 1) or I5 (case 2)
  std::optional<double> boundary;    // I2
  double pay_factor;                 // dividend = factor * valuation at I*
  double nopay_factor;
};

inline TableRefs table_refs(const GameParams& p, const BreachModel& m, SharingLevel level) {
  const CandidateInvestments c = candidate_investments(p, m);
  if (level == SharingLevel::High) return {c.I1, c.I3, c.I2, 1.0, 0.0};
  return {c.I4, c.I5, c.I2, p.alpha, p.alpha - 1.0};
}

struct TableDecision {
  double I = 0.0;
  double dividend = 0.0;
  bool defined = false;
};

/// The (I*, dividend) a regime's table row prescribes for this instance, or
/// undefined when the row's candidate investment does not exist.
inline TableDecision table_decision(const GameParams& p, const BreachModel& m, SharingLevel level,
                                    Regime regime) {
  const TableRefs r = table_refs(p, m, level);
  auto at = [&](std::optional<double> I, double factor) -> TableDecision {
    if (!I) return {};
    return {*I, std::max(0.0, factor * effective_valuation(p, m, *I)), true};
  };
  switch (regime) {
    case Regime::PayDividend: return at(r.stat_pay, r.pay_factor);
    case Regime::InvestToBoundary:
      return r.boundary ? TableDecision{*r.boundary, 0.0, true} : TableDecision{};
    case Regime::InvestUnconstrained: return at(r.stat_nopay, r.nopay_factor);
    case Regime::NoInvestPay: return at(0.0, r.pay_factor);
    case Regime::NoInvestNoPay: return at(0.0, r.nopay_factor);
  }
  return {};
}

/// Dividend actually carried by a case solution (p1 for High, p0 for Low).
inline double solution_dividend(const CaseSolution& s) {
  return s.level == SharingLevel::High ? s.decision->p1 : s.decision->p0;
}

}  // namespace divtest
