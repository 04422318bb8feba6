#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <utility>

namespace divgame {

enum class BreachFamily { Exponential, PowerLaw };

/// Decreasing, strictly convex breach-probability curve B(I) with closed-form
/// inverses for both B and B'. Two families are provided:
///
///   Exponential:  B(I) = beta * exp(-rate * I)
///   PowerLaw:     B(I) = beta * (1 + I / scale)^(-rate)
///
/// Both satisfy B > 0, B' < 0, B'' > 0 and B(I) -> 0 as I -> infinity.
/// Instances are immutable values; every operation is a pure function, so a
/// model can be shared freely across threads.
struct BreachModel {
  BreachFamily family = BreachFamily::Exponential;
  double beta = 0.5;   // baseline breach probability B(0), in (0, 1]
  double rate = 0.1;   // decay constant (lambda or gamma), > 0
  double scale = 1.0;  // investment scale for PowerLaw, > 0; unused by Exponential

  void validate() const {
    if (!(std::isfinite(beta) && beta > 0.0 && beta <= 1.0))
      throw std::invalid_argument("breach model: beta must lie in (0, 1]");
    if (!(std::isfinite(rate) && rate > 0.0))
      throw std::invalid_argument("breach model: rate must be positive");
    if (!(std::isfinite(scale) && scale > 0.0))
      throw std::invalid_argument("breach model: scale must be positive");
  }

  /// B(I). Requires I >= 0.
  double probability(double investment) const {
    check_investment(investment);
    switch (family) {
      case BreachFamily::Exponential:
        return beta * std::exp(-rate * investment);
      case BreachFamily::PowerLaw:
        return beta * std::pow(1.0 + investment / scale, -rate);
    }
    throw std::logic_error("breach model: unknown family");
  }

  /// B'(I), always negative. Requires I >= 0.
  double slope(double investment) const {
    check_investment(investment);
    switch (family) {
      case BreachFamily::Exponential:
        return -rate * beta * std::exp(-rate * investment);
      case BreachFamily::PowerLaw:
        return -(beta * rate / scale) * std::pow(1.0 + investment / scale, -(rate + 1.0));
    }
    throw std::logic_error("breach model: unknown family");
  }

  /// Unique I >= 0 with B(I) = target, or absent when target is outside
  /// (0, B(0)]. Non-finite targets are rejected.
  std::optional<double> inverse_probability(double target) const {
    validate();
    if (!std::isfinite(target))
      throw std::invalid_argument("breach model: inverse target must be finite");
    if (target <= 0.0 || target > beta) return std::nullopt;
    double inv = 0.0;
    switch (family) {
      case BreachFamily::Exponential:
        inv = std::log(beta / target) / rate;
        break;
      case BreachFamily::PowerLaw:
        inv = scale * (std::pow(beta / target, 1.0 / rate) - 1.0);
        break;
    }
    return std::max(0.0, inv);
  }

  /// Unique I >= 0 with B'(I) = target_slope, or absent when the slope is
  /// unattainable: slopes >= 0 never occur, and slopes below B'(0) would need
  /// I < 0 (B' increases toward zero by convexity).
  std::optional<double> inverse_slope(double target_slope) const {
    validate();
    if (!std::isfinite(target_slope))
      throw std::invalid_argument("breach model: inverse slope must be finite");
    if (target_slope >= 0.0 || target_slope < slope(0.0)) return std::nullopt;
    double inv = 0.0;
    switch (family) {
      case BreachFamily::Exponential:
        inv = std::log(rate * beta / -target_slope) / rate;
        break;
      case BreachFamily::PowerLaw:
        inv = scale * (std::pow(beta * rate / (scale * -target_slope), 1.0 / (rate + 1.0)) - 1.0);
        break;
    }
    return std::max(0.0, inv);
  }

 private:
  void check_investment(double investment) const {
    validate();
    if (!(std::isfinite(investment) && investment >= 0.0))
      throw std::invalid_argument("breach model: investment must be finite and non-negative");
  }
};

namespace detail {

/// Bisection inverse for a strictly decreasing f on [0, inf): solves
/// f(I) = target to `tol` in I. Fallback for families without closed-form
/// inverses; the shipped families use it only as a test oracle. The bracket
/// [0, hi] starts at hi = 1 and doubles until f(hi) drops below the target.
template <class F>
std::optional<double> bisect_decreasing(F&& f, double target, double tol = 1e-12) {
  double flo = f(0.0);
  if (flo < target) return std::nullopt;
  if (flo == target) return 0.0;
  double hi = 1.0;
  int doublings = 0;
  while (f(hi) > target) {
    hi *= 2.0;
    if (++doublings > 1100) return std::nullopt;  // target below the curve's range
  }
  double lo = hi > 1.0 ? hi / 2.0 : 0.0;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (f(mid) > target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

}  // namespace divgame
