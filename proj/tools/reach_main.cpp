#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "clreach/fixtures.hpp"
#include "clreach/runner.hpp"

namespace {

std::vector<int> parse_cells(const std::string& text) {
  std::vector<int> cells;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = text.find(',', pos);
    const std::string tok = text.substr(pos, comma == std::string::npos ? comma : comma - pos);
    try {
      const int v = std::stoi(tok);
      if (v < 1) throw std::invalid_argument("");
      cells.push_back(v);
    } catch (const std::exception&) {
      throw clreach::ConfigError("--cells: expected comma-separated positive integers");
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return cells;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reachability analysis for linear systems with ReLU network controllers"};
  app.get_formatter()->column_width(34);

  std::string command;
  std::string config_path;
  std::string mode_flag;
  std::string partitioner;
  std::string cells;
  std::string solver;
  std::string facets;
  std::string csv_path;
  std::string out_path;
  std::string fixture_name;
  int horizon = -1;
  int budget = -1;
  int mc_samples = -1;
  int jobs = 1;
  std::int64_t seed = -1;
  bool require_verified = false;

  app.add_option("command", command,
                 "forward | backward | verify | emit-fixture")
      ->check(CLI::IsMember({"forward", "backward", "verify", "emit-fixture"}));
  app.add_option("name", fixture_name, "fixture name for emit-fixture");
  app.add_option("--config", config_path, "analysis config (JSON)");
  app.add_option("--mode", mode_flag, "forward | backward | verify")
      ->check(CLI::IsMember({"forward", "backward", "verify"}));
  app.add_option("--horizon", horizon, "number of timesteps")->check(CLI::PositiveNumber);
  app.add_option("--partitioner", partitioner, "none | uniform | greedy")
      ->check(CLI::IsMember({"none", "uniform", "greedy"}));
  app.add_option("--cells", cells, "per-dimension cell counts, e.g. 4,4");
  app.add_option("--budget", budget, "propagator-call budget (greedy)")
      ->check(CLI::PositiveNumber);
  app.add_option("--mc-samples", mc_samples, "simulation sample count")
      ->check(CLI::Range(2, 1 << 30));
  app.add_option("--solver", solver, "closed-form | lp")
      ->check(CLI::IsMember({"closed-form", "lp"}));
  app.add_option("--facets", facets, "identity | file:<path>");
  app.add_option("--seed", seed, "random seed override")->check(CLI::NonNegativeNumber);
  app.add_option("--jobs", jobs, "worker threads for partition cells")
      ->check(CLI::PositiveNumber);
  app.add_option("--csv", csv_path, "write per-timestep set rows to this CSV");
  app.add_option("--out", out_path, "result JSON path (default: stdout)");
  app.add_flag("--require-verified", require_verified,
               "exit 4 when the verdict is not verified");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (command == "emit-fixture") {
      if (fixture_name.empty()) {
        throw clreach::ConfigError("emit-fixture needs a fixture name");
      }
      const std::string path = out_path.empty() ? fixture_name + ".json" : out_path;
      clreach::emit_fixture(fixture_name, path, seed < 0 ? 0 : static_cast<std::uint64_t>(seed));
      std::cout << "wrote " << path << "\n";
      return 0;
    }

    if (config_path.empty()) {
      throw clreach::ConfigError("--config is required");
    }
    clreach::AnalysisConfig cfg = clreach::load_config(config_path);

    if (!command.empty() && !mode_flag.empty() && command != mode_flag) {
      throw clreach::ConfigError("positional command and --mode disagree");
    }
    const std::string mode = !command.empty() ? command : mode_flag;
    if (mode == "forward") {
      cfg.mode = clreach::AnalysisMode::Forward;
    } else if (mode == "backward") {
      cfg.mode = clreach::AnalysisMode::Backward;
    } else if (mode == "verify") {
      cfg.mode = clreach::AnalysisMode::Verify;
    }
    if (horizon > 0) cfg.horizon = static_cast<std::size_t>(horizon);
    if (!partitioner.empty()) {
      cfg.partition.strategy = partitioner == "none" ? clreach::PartitionStrategy::None
                               : partitioner == "uniform"
                                   ? clreach::PartitionStrategy::Uniform
                                   : clreach::PartitionStrategy::GreedySimGuided;
    }
    if (!cells.empty()) cfg.partition.r = parse_cells(cells);
    if (budget > 0) cfg.partition.budget = budget;
    if (mc_samples > 0) cfg.partition.mc_samples = mc_samples;
    if (seed >= 0) cfg.partition.seed = static_cast<std::uint64_t>(seed);
    if (!solver.empty()) {
      cfg.spec.solver = solver == "lp" ? clreach::FacetSolver::LP
                                       : clreach::FacetSolver::ClosedForm;
    }
    if (!facets.empty()) {
      if (facets == "identity") {
        cfg.spec.facets.reset();
      } else if (facets.rfind("file:", 0) == 0) {
        clreach::Matrix F = clreach::load_facets(facets.substr(5));
        if (F.cols() != cfg.systems.front().state_dim()) {
          throw clreach::ConfigError("--facets: direction rows must match the state dimension");
        }
        cfg.spec.facets = std::move(F);
      } else {
        throw clreach::ConfigError("--facets: expected 'identity' or 'file:<path>'");
      }
    }
    cfg.jobs = jobs;

    const clreach::RunResult result =
        clreach::run_analysis(cfg, require_verified, csv_path);
    const std::string payload = result.document.dump(2) + "\n";
    if (out_path.empty()) {
      std::cout << payload;
    } else {
      std::ofstream out(out_path);
      if (!out) throw clreach::ConfigError("cannot write result to '" + out_path + "'");
      out << payload;
    }
    return result.exit_code;
  } catch (const clreach::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const clreach::UnknownFixture& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const clreach::DimensionMismatch& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const clreach::MissingControlLimits& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const clreach::SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
