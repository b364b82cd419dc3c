// graphflow: simulation and analysis of two-species nonlocal interaction
// dynamics on finite weighted graphs.
//
// Exit codes: 0 success, 1 configuration error, 2 numerical abort.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include "graphflow/io.hpp"

namespace gf = graphflow;
namespace fs = std::filesystem;

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir_override;
  std::uint64_t seed_override = 0;
  bool has_seed_override = false;
  int verbosity = 0;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "JSON config file")->required();
  cmd->add_option("--out", args.out_dir_override, "output directory (overrides config)");
  cmd->add_option("--seed", args.seed_override, "seed override")
      ->each([&args](const std::string&) { args.has_seed_override = true; });
  cmd->add_flag("-v,--verbose", args.verbosity, "verbose progress output");
}

gf::RunConfig load(const CommonArgs& args) {
  gf::RunConfig config = gf::RunConfig::load_file(args.config_path);
  if (args.has_seed_override) config.seed = args.seed_override;
  if (!args.out_dir_override.empty()) config.out_dir = args.out_dir_override;
  return config;
}

std::string out_path(const gf::RunConfig& config, const std::string& name) {
  fs::create_directories(config.out_dir);
  return (fs::path(config.out_dir) / name).string();
}

void write_outputs(const std::string& command, const gf::RunConfig& config,
                   const std::vector<std::pair<std::string, std::string>>& files) {
  std::vector<std::string> names;
  for (const auto& [name, content] : files) {
    gf::write_text_file(out_path(config, name), content);
    names.push_back(name);
  }
  names.push_back("manifest.json");
  gf::write_text_file(out_path(config, "manifest.json"),
                      gf::manifest_json(command, config, names).dump(2) + "\n");
}

int run_simulation(const std::string& command, const gf::RunConfig& config,
                   const gf::FiniteGraph& graph, const gf::KernelSet& kernels,
                   const gf::DynamicsParams& params, const gf::SpeciesState& initial,
                   int verbosity) {
  gf::IntegrateOptions opts;
  opts.snapshot_stride = config.output_stride;
  const gf::IntegrationResult result = gf::integrate(initial, graph, kernels, params, opts);

  write_outputs(command, config,
                {{"trajectory.csv", gf::trajectory_csv(result.trajectory, graph)},
                 {"diagnostics.json", gf::diagnostics_json(result, graph).dump(2) + "\n"}});

  if (verbosity > 0)
    std::cerr << "stopped: " << gf::stop_reason_name(result.reason) << " at t="
              << gf::format_double(result.final_time) << " after " << result.steps
              << " steps\n";
  if (gf::aborted(result.reason)) {
    std::cerr << "numerical abort: " << result.message << "\n";
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"two-species nonlocal interaction dynamics on finite graphs"};
  app.require_subcommand(1);

  CommonArgs args;
  CLI::App* simulate = app.add_subcommand("simulate", "integrate a configured system");
  CLI::App* classify = app.add_subcommand("classify", "two-point stationary-state classification");
  CLI::App* portrait = app.add_subcommand("portrait", "two-point energy/quiver grid");
  CLI::App* minimize = app.add_subcommand("minimize", "brute-force energy minimizer");
  CLI::App* check = app.add_subcommand("check", "aggregation/segregation condition checks");
  CLI::App* scenario = app.add_subcommand("scenario", "run a named scenario");
  for (CLI::App* cmd : {simulate, classify, portrait, minimize, check, scenario})
    add_common(cmd, args);

  CLI11_PARSE(app, argc, argv);

  try {
    const gf::RunConfig config = load(args);

    if (simulate->parsed()) {
      const auto graph = config.graph();
      const auto kernels = config.kernels(graph);
      return run_simulation("simulate", config, graph, kernels, config.params(),
                            config.initial_state(graph), args.verbosity);
    }

    if (scenario->parsed()) {
      const gf::Scenario sc = config.scenario();
      return run_simulation("scenario", config, sc.graph, sc.kernels, sc.params, sc.initial,
                            args.verbosity);
    }

    if (classify->parsed()) {
      const gf::TwoPointProblem problem = config.twopoint_problem();
      const gf::TwoPointClassification cl = gf::classify(problem);
      if (config.twopoint_verify()) gf::verify_classification(problem, cl);
      write_outputs("classify", config,
                    {{"classification.json", gf::classification_json(cl).dump(2) + "\n"}});
      return 0;
    }

    if (portrait->parsed()) {
      const gf::TwoPointProblem problem = config.twopoint_problem();
      const auto records = gf::phase_portrait(problem, config.twopoint_grid_n());
      const auto cl = gf::classify(problem);
      write_outputs("portrait", config,
                    {{"portrait.csv", gf::portrait_csv(records)},
                     {"stationary_states.csv", gf::stationary_states_csv(cl)},
                     {"classification.json", gf::classification_json(cl).dump(2) + "\n"}});
      return 0;
    }

    if (minimize->parsed()) {
      const auto graph = config.graph();
      const auto kernels = config.kernels(graph);
      const auto result =
          gf::brute_force_minimize(kernels, graph, config.minimize_resolution());
      write_outputs("minimize", config,
                    {{"minimizer.json", gf::minimize_json(result).dump(2) + "\n"}});
      return 0;
    }

    if (check->parsed()) {
      const auto graph = config.graph();
      const auto kernels = config.kernels(graph);
      const auto agg = gf::check_aggregation_conditions(kernels);
      const auto seg = gf::check_segregation_condition(kernels);
      write_outputs("check", config,
                    {{"check.json", gf::check_json(agg, seg).dump(2) + "\n"}});
      return 0;
    }
  } catch (const gf::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
