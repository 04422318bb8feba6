#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "divgame/breach_model.hpp"

namespace divgame {

/// Absolute tolerance, in money units, for utility indifference tests.
/// Closed-form dividends create exact ties by construction (e.g. p1 = V), so
/// strict equality would be float-fragile.
inline constexpr double kIndifferenceTol = 1e-12;

enum class SharingLevel { Low, High };

/// All scalar parameters of the platform-users game. Homogeneous users
/// collapse the revenue function U(k, b) to its two reachable values:
/// revenue_high = U(k, 0) (everyone shares high) and revenue_low = U(k, k).
struct GameParams {
  std::int64_t k = 1;        // number of users, >= 1
  double S = 0.0;            // fixed service cost, >= 0
  double F = 0.0;            // platform loss on breach, >= 0
  double V = 0.0;            // user's valuation of own data, >= 0
  double W = 0.0;            // user's valuation of free services, >= 0
  double L = 0.0;            // user's loss on breach, >= 0
  double alpha = 0.5;        // low-sharing scale factor, in (0, 1)
  double revenue_high = 0.0; // U(k, 0)
  double revenue_low = 0.0;  // U(k, k)

  /// Net data valuation V - W; negative when free services outweigh the data.
  double vbar() const { return V - W; }

  double users() const { return static_cast<double>(k); }

  void validate() const {
    if (k < 1) throw std::invalid_argument("game params: k must be at least 1");
    auto nonneg = [](double x) { return std::isfinite(x) && x >= 0.0; };
    if (!nonneg(S)) throw std::invalid_argument("game params: S must be finite and non-negative");
    if (!nonneg(F)) throw std::invalid_argument("game params: F must be finite and non-negative");
    if (!nonneg(V)) throw std::invalid_argument("game params: V must be finite and non-negative");
    if (!nonneg(W)) throw std::invalid_argument("game params: W must be finite and non-negative");
    if (!nonneg(L)) throw std::invalid_argument("game params: L must be finite and non-negative");
    if (!(std::isfinite(alpha) && alpha > 0.0 && alpha < 1.0))
      throw std::invalid_argument("game params: alpha must lie in (0, 1)");
    if (!std::isfinite(revenue_high) || !std::isfinite(revenue_low))
      throw std::invalid_argument("game params: revenues must be finite");
  }
};

/// The platform's Stackelberg move: protection investment plus the two
/// dividend prices (p0 for low sharing, p1 for high sharing).
struct PlatformDecision {
  double I = 0.0;
  double p0 = 0.0;
  double p1 = 0.0;

  void validate() const {
    auto ok = [](double x) { return std::isfinite(x) && x >= 0.0; };
    if (!ok(I) || !ok(p0) || !ok(p1))
      throw std::invalid_argument("platform decision: I, p0, p1 must be finite and non-negative");
  }
};

/// Effective valuation of full sharing: (V - W) + B(I) * L. A user's net
/// perceived cost of sharing at the high level; may have either sign.
inline double effective_valuation(const GameParams& params, const BreachModel& model,
                                  double investment) {
  return params.vbar() + model.probability(investment) * params.L;
}

/// Platform's expected utility when every user ends up at `induced`:
/// U - B(I) F - I - S - p0 b - p1 (k - b), with b = k for low sharing, 0 for high.
inline double platform_utility(const GameParams& params, const BreachModel& model,
                               const PlatformDecision& d, SharingLevel induced) {
  const double users = params.users();
  const double low_sharers = induced == SharingLevel::Low ? users : 0.0;
  const double revenue = induced == SharingLevel::Low ? params.revenue_low : params.revenue_high;
  return revenue - model.probability(d.I) * params.F - d.I - params.S
         - d.p0 * low_sharers - d.p1 * (users - low_sharers);
}

/// One user's expected utility under `choice`: p1 - V when sharing high,
/// p0 - alpha V when sharing low.
inline double user_utility(const GameParams& params, const BreachModel& model,
                           const PlatformDecision& d, SharingLevel choice) {
  const double valuation = effective_valuation(params, model, d.I);
  return choice == SharingLevel::High ? d.p1 - valuation : d.p0 - params.alpha * valuation;
}

struct BestResponse {
  SharingLevel choice;  // utility-maximizing level; High when tied
  bool tied;            // both levels within kIndifferenceTol; callers resolve in the platform's favor
  bool participates;    // maximized utility is non-negative (within tolerance)
};

/// The users' best response to a posted decision. All users are homogeneous,
/// so one answer covers them all.
inline BestResponse user_best_response(const GameParams& params, const BreachModel& model,
                                       const PlatformDecision& d) {
  const double u_high = user_utility(params, model, d, SharingLevel::High);
  const double u_low = user_utility(params, model, d, SharingLevel::Low);
  BestResponse r;
  r.tied = std::abs(u_high - u_low) <= kIndifferenceTol;
  r.choice = u_high >= u_low ? SharingLevel::High : SharingLevel::Low;
  r.participates = std::max(u_high, u_low) >= -kIndifferenceTol;
  return r;
}

}  // namespace divgame
