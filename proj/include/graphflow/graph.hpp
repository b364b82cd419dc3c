#ifndef GRAPHFLOW_GRAPH_HPP
#define GRAPHFLOW_GRAPH_HPP

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "graphflow/matrix.hpp"

namespace graphflow {

enum class Norm { euclidean, one_norm };

double distance(const std::vector<double>& a, const std::vector<double>& b, Norm norm);

// Finite weighted graph embedded in R^d: vertex positions, positive vertex
// weights mu, and a symmetric nonnegative edge-weight matrix eta with zero
// diagonal. Immutable after construction; safe to share across threads.
struct FiniteGraph {
  std::vector<std::vector<double>> positions;  // N x d
  std::vector<double> weights;                 // mu, all > 0
  SquareMatrix eta;

  std::size_t size() const { return weights.size(); }
  std::size_t dim() const { return positions.empty() ? 0 : positions.front().size(); }
  double dist(std::size_t i, std::size_t j, Norm norm = Norm::euclidean) const {
    return distance(positions[i], positions[j], norm);
  }
};

// Edge-weight recipe: an explicit symmetric matrix, the complete rule
// (eta = 1 off the diagonal), or a range cutoff eta(x,y) = 1_{|x-y| < r}
// with strict inequality.
struct EtaSpec {
  enum class Rule { explicit_matrix, complete, cutoff };
  Rule rule = Rule::complete;
  double r = 0.0;
  Norm norm = Norm::euclidean;
  SquareMatrix matrix;

  static EtaSpec complete() { return EtaSpec{}; }
  static EtaSpec cutoff(double r, Norm norm = Norm::euclidean) {
    EtaSpec s;
    s.rule = Rule::cutoff;
    s.r = r;
    s.norm = norm;
    return s;
  }
  static EtaSpec explicit_matrix(SquareMatrix m) {
    EtaSpec s;
    s.rule = Rule::explicit_matrix;
    s.matrix = std::move(m);
    return s;
  }
};

// Validates and assembles a graph. Throws std::invalid_argument on fewer
// than 2 vertices, duplicate positions, non-positive weights, or an
// asymmetric/negative explicit eta. The eta diagonal is forced to zero.
FiniteGraph build_graph(std::vector<std::vector<double>> positions,
                        std::vector<double> weights, const EtaSpec& eta);

// Densities of the two species relative to mu: u[i][v] = rho^(i)_v.
struct SpeciesState {
  std::array<std::vector<double>, 2> u;

  std::size_t size() const { return u[0].size(); }
  static SpeciesState zero(std::size_t n) {
    SpeciesState s;
    s.u[0].assign(n, 0.0);
    s.u[1].assign(n, 0.0);
    return s;
  }
};

// Net upwind edge fluxes, antisymmetric per species: j[i](v,w) = -j[i](w,v).
struct FluxField {
  std::array<SquareMatrix, 2> j;
};

struct StateValidation {
  bool nonnegative = true;
  bool normalized = true;  // per-species mass within 1e-9 of 1
  bool within_threshold = true;
  std::array<double, 2> mass{0.0, 0.0};
  std::string message;
  bool ok() const { return nonnegative && normalized && within_threshold; }
};

// Mass and support diagnostics. `density_cap` is the finite mobility
// threshold when one applies (pass +inf for none).
StateValidation validate_state(const SpeciesState& state, const FiniteGraph& graph,
                               double density_cap, double mass_tol = 1e-9);

std::array<double, 2> total_mass(const SpeciesState& state, const FiniteGraph& graph);

std::array<std::vector<double>, 2> center_of_mass(const SpeciesState& state,
                                                  const FiniteGraph& graph);

}  // namespace graphflow

#endif
