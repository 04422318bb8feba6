#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "divgame/report.hpp"

namespace divgame {

/// Deterministic sampler over documented instance ranges. Draws go through a
/// fixed 53-bit mantissa path instead of std::uniform_real_distribution so a
/// seed reproduces byte-identical batches on any standard library.
class InstanceSampler {
 public:
  explicit InstanceSampler(std::uint64_t seed) : engine_(seed) {}

  double next01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next01(); }

  double log_uniform(double lo, double hi) {
    return std::exp(uniform(std::log(lo), std::log(hi)));
  }

  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<double>(hi - lo + 1);
    auto offset = static_cast<std::int64_t>(next01() * span);
    if (offset > hi - lo) offset = hi - lo;
    return lo + offset;
  }

  bool coin(double p_true) { return next01() < p_true; }

 private:
  std::mt19937_64 engine_;
};

/// Random game parameters, log-uniform over the validity ranges the library
/// documents: k in [1, 50], S in [0.1, 1e2], F in [0.1, 1e4], V and W in
/// [0.01, 1e2], L zero with probability 0.15 (degenerate branches) else in
/// [0.01, 1e3], alpha in [0.1, 0.9], revenue_high in [1, 1e5] with
/// revenue_low a [0.3, 1.1] multiple of it. Draw order is part of the
/// determinism contract.
inline GameParams sample_params(InstanceSampler& rng) {
  GameParams p;
  p.k = rng.uniform_int(1, 50);
  p.alpha = rng.uniform(0.1, 0.9);
  p.S = rng.log_uniform(0.1, 1e2);
  p.F = rng.log_uniform(0.1, 1e4);
  p.V = rng.log_uniform(0.01, 1e2);
  p.W = rng.log_uniform(0.01, 1e2);
  p.L = rng.coin(0.15) ? 0.0 : rng.log_uniform(0.01, 1e3);
  p.revenue_high = rng.log_uniform(1.0, 1e5);
  p.revenue_low = p.revenue_high * rng.uniform(0.3, 1.1);
  return p;
}

/// Random breach model: either family with equal probability. Exponential
/// rate in [1e-3, 0.5]; power-law exponent in [0.3, 4] with scale in
/// [0.5, 50]; beta in [0.05, 1] for both.
inline BreachModel sample_model(InstanceSampler& rng) {
  BreachModel m;
  if (rng.coin(0.5)) {
    m.family = BreachFamily::Exponential;
    m.beta = rng.uniform(0.05, 1.0);
    m.rate = rng.log_uniform(1e-3, 0.5);
    m.scale = 1.0;
  } else {
    m.family = BreachFamily::PowerLaw;
    m.beta = rng.uniform(0.05, 1.0);
    m.rate = rng.log_uniform(0.3, 4.0);
    m.scale = rng.log_uniform(0.5, 50.0);
  }
  return m;
}

struct VerifyBatch {
  std::uint64_t seed = 0;
  std::vector<VerificationReport> reports;

  int passed() const {
    int n = 0;
    for (const auto& r : reports) n += r.pass ? 1 : 0;
    return n;
  }
  bool all_passed() const { return passed() == static_cast<int>(reports.size()); }
  double pass_rate() const {
    return reports.empty() ? 1.0 : static_cast<double>(passed()) / reports.size();
  }
};

/// Verify `count` seeded random instances against the brute-force oracle,
/// using the scenario's oracle tolerances. Fully seed-determined; reruns are
/// byte-identical.
inline VerifyBatch run_verify(const ScenarioConfig& cfg, int count, std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("verify: instance count must be at least 1");
  VerifyBatch batch;
  batch.seed = seed;
  batch.reports.reserve(count);
  InstanceSampler rng(seed);
  for (int i = 0; i < count; ++i) {
    const GameParams params = sample_params(rng);
    const BreachModel model = sample_model(rng);
    batch.reports.push_back(verify(params, model, cfg.oracle));
  }
  return batch;
}

inline nlohmann::json verify_summary_json(const VerifyBatch& batch) {
  nlohmann::json instances = nlohmann::json::array();
  for (const auto& r : batch.reports) instances.push_back(verification_json(r));
  return {{"seed", batch.seed},
          {"count", batch.reports.size()},
          {"passed", batch.passed()},
          {"pass_rate", batch.pass_rate()},
          {"instances", instances}};
}

inline std::string verify_csv(const VerifyBatch& batch) {
  std::string out =
      "index,family,pass,level_closed_form,level_oracle,utility_delta_rel,I_delta,p0_delta,"
      "p1_delta\n";
  for (std::size_t i = 0; i < batch.reports.size(); ++i) {
    const VerificationReport& r = batch.reports[i];
    out += std::to_string(i) + ",";
    out += std::string(to_string(r.model.family)) + ",";
    out += (r.pass ? "1" : "0") + std::string(",");
    out += std::string(to_string(r.closed_form.chosen.level)) + ",";
    out += std::string(to_string(r.oracle.level)) + ",";
    out += format_number(r.utility_delta_rel) + ",";
    out += (r.I_delta ? format_number(*r.I_delta) : "") + ",";
    out += (r.p0_delta ? format_number(*r.p0_delta) : "") + ",";
    out += (r.p1_delta ? format_number(*r.p1_delta) : "");
    out += "\n";
  }
  return out;
}

}  // namespace divgame
