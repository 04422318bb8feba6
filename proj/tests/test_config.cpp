#include <catch2/catch_amalgamated.hpp>

#include <string>

#include "divgame/config.hpp"

using namespace divgame;

namespace {

nlohmann::json minimal_doc() {
  return nlohmann::json::parse(R"({
    "params": {"k": 10, "S": 10, "F": 100, "V": 20, "W": 30, "L": 50,
               "alpha": 0.5, "revenue_high": 500, "revenue_low": 300},
    "model": {"family": "exponential", "beta": 0.5, "rate": 0.1}
  })");
}

std::string error_path(const nlohmann::json& doc) {
  try {
    parse_config(doc);
  } catch (const ConfigError& e) {
    return e.path();
  }
  return "";
}

}  // namespace

TEST_CASE("minimal document parses and echoes its inputs") {
  const ScenarioConfig cfg = parse_config(minimal_doc());
  CHECK(cfg.params.k == 10);
  CHECK(cfg.params.F == 100.0);
  CHECK(cfg.params.vbar() == -10.0);
  CHECK(cfg.model.family == BreachFamily::Exponential);
  CHECK(cfg.model.beta == 0.5);
  CHECK(cfg.model.scale == 1.0);  // defaulted for the exponential family
  CHECK(cfg.oracle.grid_points == 400);
  CHECK_FALSE(cfg.sweep.has_value());
}

TEST_CASE("out-of-domain values are rejected with their path") {
  auto doc = minimal_doc();
  doc["params"]["alpha"] = 1.0;
  CHECK(error_path(doc) == "params.alpha");

  doc = minimal_doc();
  doc["params"]["L"] = -3;
  CHECK(error_path(doc) == "params.L");

  doc = minimal_doc();
  doc["params"]["k"] = 0;
  CHECK(error_path(doc) == "params.k");

  doc = minimal_doc();
  doc["params"]["F"] = 1e10;  // beyond the 1e9 magnitude cap
  CHECK(error_path(doc) == "params.F");

  doc = minimal_doc();
  doc["model"]["beta"] = 0.0;
  CHECK(error_path(doc) == "model.beta");

  doc = minimal_doc();
  doc["model"]["family"] = "logistic";
  CHECK(error_path(doc) == "model.family");
}

TEST_CASE("structural problems are rejected with their path") {
  auto doc = minimal_doc();
  doc["params"].erase("V");
  CHECK(error_path(doc) == "params.V");

  doc = minimal_doc();
  doc["params"]["typo"] = 1;
  CHECK(error_path(doc) == "params.typo");

  doc = minimal_doc();
  doc["extra"] = 1;
  CHECK(error_path(doc) == "extra");

  doc = minimal_doc();
  doc["params"]["k"] = 10.5;  // not an integer
  CHECK(error_path(doc) == "params.k");

  doc = minimal_doc();
  doc.erase("model");
  CHECK(error_path(doc) == "model");

  CHECK_THROWS_AS(parse_config_text("{not json"), ConfigError);
}

TEST_CASE("power-law models require a scale") {
  auto doc = minimal_doc();
  doc["model"] = {{"family", "power_law"}, {"beta", 0.5}, {"rate", 2.0}};
  CHECK(error_path(doc) == "model.scale");
  doc["model"]["scale"] = 1.0;
  const ScenarioConfig cfg = parse_config(doc);
  CHECK(cfg.model.family == BreachFamily::PowerLaw);
}

TEST_CASE("oracle section overrides defaults and is validated") {
  auto doc = minimal_doc();
  doc["oracle"] = {{"grid_points", 64}, {"tol_objective", 1e-4}};
  const ScenarioConfig cfg = parse_config(doc);
  CHECK(cfg.oracle.grid_points == 64);
  CHECK(cfg.oracle.tol_objective == 1e-4);
  CHECK(cfg.oracle.refine_rounds == 3);

  doc["oracle"]["grid_points"] = 4;
  CHECK(error_path(doc) == "oracle.grid_points");
}

TEST_CASE("sweep specs are validated against the parameter's domain") {
  auto doc = minimal_doc();
  doc["sweep"] = {{"parameter", "L"}, {"start", 0.0}, {"stop", 200.0}, {"steps", 201}};
  const ScenarioConfig cfg = parse_config(doc);
  REQUIRE(cfg.sweep.has_value());
  CHECK(cfg.sweep->parameter == "L");
  CHECK(cfg.sweep->steps == 201);

  doc["sweep"]["parameter"] = "alpha";
  CHECK(error_path(doc) == "sweep.start");  // alpha = 0 is out of (0, 1)

  doc["sweep"] = {{"parameter", "alpha"}, {"start", 0.5}, {"stop", 1.0}, {"steps", 3}};
  CHECK(error_path(doc) == "sweep.stop");

  doc["sweep"] = {{"parameter", "Q"}, {"start", 0.0}, {"stop", 1.0}, {"steps", 2}};
  CHECK(error_path(doc) == "sweep.parameter");

  doc["sweep"] = {{"parameter", "L"}, {"start", 0.0}, {"stop", 1.0}, {"steps", 1}};
  CHECK(error_path(doc) == "sweep.steps");

  doc["sweep"] = {{"parameter", "beta"}, {"start", 0.1}, {"stop", 1.5}, {"steps", 5}};
  CHECK(error_path(doc) == "sweep.stop");
}
