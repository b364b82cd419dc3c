#ifndef GRAPHFLOW_IO_HPP
#define GRAPHFLOW_IO_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "graphflow/dynamics.hpp"
#include "graphflow/graph.hpp"
#include "graphflow/kernels.hpp"
#include "graphflow/scenarios.hpp"
#include "graphflow/twopoint.hpp"

namespace graphflow {

// Raised on any configuration problem; the CLI maps it to exit code 1.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One JSON document describes a run. Unknown keys are rejected everywhere,
// and the parsed form round-trips losslessly through resolved_json().
struct RunConfig {
  nlohmann::json raw;
  std::string source_path;

  std::uint64_t seed = 0;
  std::string out_dir = "out";
  long output_stride = 1;

  static RunConfig load_file(const std::string& path);
  static RunConfig from_json(nlohmann::json j, const std::string& source_path = "<inline>");

  bool has(const std::string& key) const { return raw.contains(key); }

  FiniteGraph graph() const;
  KernelSet kernels(const FiniteGraph& g) const;
  DynamicsParams params() const;
  SpeciesState initial_state(const FiniteGraph& g) const;
  Scenario scenario() const;
  TwoPointProblem twopoint_problem() const;
  int twopoint_grid_n() const;
  bool twopoint_verify() const;
  int minimize_resolution() const;

  // The config as actually interpreted (defaults filled in), used for the
  // manifest so a rerun reproduces the outputs byte for byte.
  nlohmann::json resolved_json() const;
};

// Formats with 17 significant digits so doubles round-trip exactly.
std::string format_double(double x);

// git-style SHA-1 blob hash ("blob <len>\0" + content), hex encoded.
std::string content_hash(const std::string& bytes);

SquareMatrix load_matrix_csv(const std::string& path);

nlohmann::json graph_to_json(const FiniteGraph& g);
FiniteGraph graph_from_json(const nlohmann::json& j);

void write_text_file(const std::string& path, const std::string& content);

std::string trajectory_csv(const Trajectory& traj, const FiniteGraph& graph);
nlohmann::json diagnostics_json(const IntegrationResult& result, const FiniteGraph& graph);
nlohmann::json classification_json(const TwoPointClassification& c);
std::string portrait_csv(const std::vector<PortraitRecord>& records);
std::string stationary_states_csv(const TwoPointClassification& c);
nlohmann::json minimize_json(const MinimizeResult& r);
nlohmann::json check_json(const AggregationReport& agg, const SegregationReport& seg);

nlohmann::json manifest_json(const std::string& command, const RunConfig& config,
                             const std::vector<std::string>& outputs);

std::string stop_reason_name(StopReason r);

}  // namespace graphflow

#endif
