#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "divgame/oracle.hpp"
#include "divgame/verify_run.hpp"
#include "support.hpp"

using namespace divgame;
using Catch::Approx;

namespace {

const BreachModel kExp{BreachFamily::Exponential, 0.5, 0.1};

GameParams worked(double V, double W = 30.0) {
  GameParams p;
  p.k = 10;
  p.S = 10;
  p.F = 100;
  p.V = V;
  p.W = W;
  p.L = 50;
  p.alpha = 0.5;
  p.revenue_high = 500;
  p.revenue_low = 300;
  return p;
}

}  // namespace

TEST_CASE("reduced minimizer hits analytic optima") {
  const GameParams p = worked(20.0);
  auto objective = [&](double I) { return kExp.probability(I) * 600.0 + I; };
  const auto unconstrained =
      minimize_reduced(objective, p, kExp, ValuationConstraint::None);
  REQUIRE(unconstrained.feasible);
  CHECK(unconstrained.investment == Approx(10.0 * std::log(30.0)).margin(1e-6));

  // increasing objective: optimum at zero, exactly
  const auto trivial =
      minimize_reduced([](double I) { return I; }, p, kExp, ValuationConstraint::None);
  REQUIRE(trivial.feasible);
  CHECK(trivial.investment == 0.0);

  // no-pay objective with the valuation constraint active: boundary optimum
  GameParams q = worked(20.0);
  q.L = 150;
  const auto constrained = minimize_reduced(
      [&](double I) { return kExp.probability(I) * 100.0 + I; }, q, kExp,
      ValuationConstraint::NonPositive);
  REQUIRE(constrained.feasible);
  CHECK(constrained.investment == Approx(10.0 * std::log(7.5)).margin(1e-6));
}

TEST_CASE("reduced minimizer reports empty feasible sets") {
  // valuation >= 0 unreachable: vbar < 0 and L = 0
  GameParams p = worked(20.0);
  p.L = 0;
  CHECK_FALSE(minimize_reduced([](double I) { return I; }, p, kExp,
                               ValuationConstraint::NonNegative)
                  .feasible);
  // valuation <= 0 unreachable: vbar > 0
  CHECK_FALSE(minimize_reduced([](double I) { return I; }, worked(30.0, 20.0), kExp,
                               ValuationConstraint::NonPositive)
                  .feasible);
}

TEST_CASE("reduced minimizer matches every existing candidate investment") {
  InstanceSampler rng(555);
  for (int i = 0; i < 60; ++i) {
    const GameParams p = sample_params(rng);
    const BreachModel m = sample_model(rng);
    const CandidateInvestments c = candidate_investments(p, m);
    const double lk = p.L * p.users();
    const double coeffs[4] = {p.F + lk, p.F, p.F + p.alpha * lk, p.F + (p.alpha - 1.0) * lk};
    const std::optional<double> cands[4] = {c.I1, c.I3, c.I4, c.I5};
    for (int j = 0; j < 4; ++j) {
      if (!cands[j]) continue;
      const double coeff = coeffs[j];
      const auto found = minimize_reduced(
          [&](double I) { return m.probability(I) * coeff + I; }, p, m,
          ValuationConstraint::None);
      REQUIRE(found.feasible);
      CHECK(found.investment == Approx(*cands[j]).margin(1e-6));
    }
  }
}

TEST_CASE("brute force reproduces the worked equilibrium") {
  const GameParams p = worked(30.0, 20.0);  // vbar = 10
  const OracleResult r = brute_force_equilibrium(p, kExp);
  CHECK(r.level == SharingLevel::High);
  CHECK(r.platform_utility == Approx(345.988026).margin(0.05));
  CHECK(r.decision.I == Approx(10.0 * std::log(30.0)).margin(1e-2));
  CHECK(r.decision.p1 == Approx(10.0 + 5.0 / 6.0).margin(1e-2));
  CHECK_FALSE(r.near_ceiling);
}

TEST_CASE("degenerate flat instance: oracle equals the closed form") {
  GameParams p = worked(20.0);  // vbar < 0
  p.L = 0;
  p.revenue_low = p.revenue_high;
  const Equilibrium eq = solve_equilibrium(p, kExp);
  const OracleResult r = brute_force_equilibrium(p, kExp);
  CHECK(r.platform_utility == Approx(*eq.chosen.platform_utility).margin(1e-6));
}

TEST_CASE("verify passes on the worked instances") {
  CHECK(verify(worked(30.0, 20.0), kExp).pass);
  CHECK(verify(worked(20.0), kExp).pass);
  GameParams p = worked(20.0);
  p.L = 150;
  CHECK(verify(p, kExp).pass);
}

TEST_CASE("verify passes at an exact regime boundary") {
  // L = -vbar/B(I3): the boundary and unconstrained rows coincide
  GameParams p;
  p.k = 2;
  p.F = 30;
  p.V = 29;
  p.W = 30;
  p.alpha = 0.5;
  p.L = 3.0;
  p.S = 1;
  p.revenue_high = 50;
  p.revenue_low = 10;
  const VerificationReport r = verify(p, kExp);
  CHECK(r.pass);
}

TEST_CASE("fault injection is caught with the right delta") {
  const GameParams p = worked(30.0, 20.0);
  Equilibrium corrupted = solve_equilibrium(p, kExp);
  corrupted.chosen.decision->I += 1.0;
  const OracleResult oracle = brute_force_equilibrium(p, kExp);
  const VerificationReport r = compare_to_oracle(corrupted, oracle, p, kExp);
  CHECK_FALSE(r.pass);
  REQUIRE(r.I_delta.has_value());
  CHECK(*r.I_delta == Approx(1.0).margin(0.05));
}

TEST_CASE("oracle can only undershoot the closed form") {
  InstanceSampler rng(31337);
  for (int i = 0; i < 25; ++i) {
    const GameParams p = sample_params(rng);
    const BreachModel m = sample_model(rng);
    const Equilibrium eq = solve_equilibrium(p, m);
    const OracleResult r = brute_force_equilibrium(p, m);
    const double scale = std::max({1.0, std::abs(*eq.chosen.platform_utility),
                                   std::abs(r.platform_utility)});
    CHECK(r.platform_utility <= *eq.chosen.platform_utility + 1e-3 * scale);
  }
}

TEST_CASE("doubling the grid never worsens the oracle") {
  InstanceSampler rng(2024);
  OracleConfig coarse;
  coarse.grid_points = 64;
  coarse.refine_rounds = 1;
  OracleConfig fine = coarse;
  fine.grid_points = 128;
  for (int i = 0; i < 10; ++i) {
    const GameParams p = sample_params(rng);
    const BreachModel m = sample_model(rng);
    const double u_coarse = brute_force_equilibrium(p, m, coarse).platform_utility;
    const double u_fine = brute_force_equilibrium(p, m, fine).platform_utility;
    const double scale = std::max({1.0, std::abs(u_coarse), std::abs(u_fine)});
    CHECK(u_fine >= u_coarse - coarse.tol_objective * scale);
  }
}

TEST_CASE("oracle runs are deterministic") {
  const GameParams p = worked(20.0);
  const OracleResult a = brute_force_equilibrium(p, kExp);
  const OracleResult b = brute_force_equilibrium(p, kExp);
  CHECK(a.platform_utility == b.platform_utility);
  CHECK(a.decision.I == b.decision.I);
  CHECK(a.decision.p0 == b.decision.p0);
  CHECK(a.decision.p1 == b.decision.p1);
  CHECK(a.level == b.level);
}

TEST_CASE("oracle config validation") {
  OracleConfig cfg;
  cfg.grid_points = 8;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.I_max = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.tol_objective = -1;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
