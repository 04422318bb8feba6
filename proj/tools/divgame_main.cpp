// Command-line front end: solve a single instance, sweep a parameter, or
// verify the closed forms against the brute-force oracle on random instances.
//
// Exit codes: 0 success, 1 validation error, 2 verification failure.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "divgame/divgame.hpp"

namespace {

void write_output(const std::string& path, const std::string& contents) {
  if (path.empty() || path == "-") {
    std::cout << contents;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << contents;
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stackelberg solver for the platform-users data-dividend game"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path = "-";
  std::string format;
  std::uint64_t seed = 0;
  int count = 200;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "scenario config (JSON)")->required();
    cmd->add_option("--out", out_path, "output path, or - for stdout");
    cmd->add_option("--format", format, "output format: csv or json (default: csv for sweep, json otherwise)")
        ->check(CLI::IsMember({"csv", "json"}));
  };

  CLI::App* solve = app.add_subcommand("solve", "solve one instance");
  add_common(solve);

  CLI::App* sweep = app.add_subcommand("sweep", "sweep one parameter and emit rows");
  add_common(sweep);

  CLI::App* verify_cmd =
      app.add_subcommand("verify", "check the closed forms against the oracle on random instances");
  add_common(verify_cmd);
  verify_cmd->add_option("--seed", seed, "RNG seed for instance generation");
  verify_cmd->add_option("--count", count, "number of random instances")
      ->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);
  if (format.empty()) format = app.got_subcommand(sweep) ? "csv" : "json";

  try {
    const divgame::ScenarioConfig cfg = divgame::load_config(config_path);
    if (app.got_subcommand(solve)) {
      write_output(out_path,
                   format == "csv" ? divgame::run_solve_csv(cfg) : dump(divgame::run_solve(cfg)));
    } else if (app.got_subcommand(sweep)) {
      const auto rows = divgame::run_sweep(cfg);
      write_output(out_path, format == "csv" ? divgame::sweep_csv(rows)
                                             : dump(divgame::sweep_json(cfg, rows)));
    } else {
      const divgame::VerifyBatch batch = divgame::run_verify(cfg, count, seed);
      write_output(out_path, format == "csv" ? divgame::verify_csv(batch)
                                             : dump(divgame::verify_summary_json(batch)));
      if (!batch.all_passed()) {
        std::cerr << "verification failed: " << batch.passed() << "/" << batch.reports.size()
                  << " instances passed\n";
        return 2;
      }
    }
  } catch (const divgame::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
