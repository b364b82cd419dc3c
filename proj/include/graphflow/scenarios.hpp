#ifndef GRAPHFLOW_SCENARIOS_HPP
#define GRAPHFLOW_SCENARIOS_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "graphflow/dynamics.hpp"
#include "graphflow/graph.hpp"
#include "graphflow/kernels.hpp"

namespace graphflow {

struct Scenario;

// Closed-form reference value attached to a scenario: either a velocity
// entry v^(species)(from, to) or a derivative du^(species)(vertex)/dt, both
// evaluated at the initial state. These are computed from hand-derived
// expressions in the scenario constructors, independently of the generic
// dynamics code, and serve to cross-validate it.
struct OracleValue {
  enum class Kind { velocity, dudt };
  Kind kind;
  int species;           // 0 or 1
  std::size_t from = 0;  // vertex (dudt) or edge tail (velocity)
  std::size_t to = 0;    // edge head (velocity only)
  double value = 0.0;
  std::string label;
};

struct OutcomeCheck {
  std::string description;
  std::function<bool(const IntegrationResult&, const Scenario&)> holds;
};

// A fully specified, seeded experiment: graph, kernels, parameters, initial
// state, plus machine-checkable oracles and expected-outcome predicates.
// Construction is deterministic in (name, parameters, seed).
struct Scenario {
  std::string name;
  FiniteGraph graph;
  KernelSet kernels;
  DynamicsParams params;
  SpeciesState initial;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, double>> parameters;
  std::vector<OracleValue> oracles;
  std::vector<OutcomeCheck> checks;

  IntegrationResult run(const IntegrateOptions& options = {}) const {
    return integrate(initial, graph, kernels, params, options);
  }
};

// Three collinear vertices {-r1, 0, r2} with attractive self-interactions
// |x-y|, cross-repulsion -alpha |x-y|, linear mobility, and a range cutoff
// on eta. Species 1 starts on the middle vertex, species 2 splits
// (1+delta)/2 : (1-delta)/2 over the outer ones.
Scenario three_point(double r1, double r2, double alpha, double delta, double cutoff_r);

// Four vertices (0,0), (1,0), (1,1), (eps,1) with 1-norm kernels |x-y|_1
// and -alpha |x-y|_1, complete eta, linear mobility, p = 2, and the species
// concentrated on x4 and x1 respectively. beta2 scales species 2.
Scenario four_point(double eps, double alpha, double beta2 = 1.0);

enum class LatticeKernelVariant {
  kef_global,     // log-quadratic self-kernels, tent(10,20) cross-repulsion
  kef_truncated,  // self-kernels truncated at sensing radius 0.2, tent(4,20)
};

// n-by-n unit-spaced lattice, fully connected, linear mobility, p = 2,
// iid-uniform random initial masses drawn from `seed`.
Scenario lattice_pattern(int n, LatticeKernelVariant variant, std::uint64_t seed);

enum class MobilityVariant { linear, volume_filling };

// Fully connected 10-by-10 unit-spaced lattice with mu = 1/20 and
// attractive exponential kernels 20 (exp(|x|) - 1) for all species pairs.
// The same seed reproduces the same initial state across variants.
Scenario mobility_experiment(MobilityVariant variant, double p, std::uint64_t seed);

// iid uniform(0,1) per vertex and species from the counter-based generator,
// normalized per species to unit mass.
SpeciesState random_initial_state(const FiniteGraph& graph, std::uint64_t seed);

// Overlap of the two species, sum_v min(u1_v, u2_v) mu_v; zero iff the
// supports are disjoint.
double overlap_index(const SpeciesState& state, const FiniteGraph& graph);

// Number of vertices whose density exceeds the threshold.
std::size_t support_size(const std::vector<double>& u, double threshold);

// Largest |oracle - engine| deviation over all attached oracle values.
double max_oracle_error(const Scenario& scenario);

Scenario make_scenario(const std::string& name,
                       const std::vector<std::pair<std::string, double>>& parameters,
                       std::uint64_t seed);

}  // namespace graphflow

#endif
