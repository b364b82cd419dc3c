#include "graphflow/graph.hpp"

#include <cmath>
#include <stdexcept>

#include "graphflow/sum.hpp"

namespace graphflow {

double distance(const std::vector<double>& a, const std::vector<double>& b, Norm norm) {
  if (norm == Norm::one_norm) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += std::abs(a[k] - b[k]);
    return s;
  }
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return std::sqrt(s);
}

FiniteGraph build_graph(std::vector<std::vector<double>> positions,
                        std::vector<double> weights, const EtaSpec& eta) {
  const std::size_t n = positions.size();
  if (n < 2) throw std::invalid_argument("build_graph: need at least 2 vertices");
  if (weights.size() != n)
    throw std::invalid_argument("build_graph: positions/weights size mismatch");

  const std::size_t d = positions.front().size();
  if (d == 0) throw std::invalid_argument("build_graph: empty position vectors");
  for (const auto& p : positions)
    if (p.size() != d)
      throw std::invalid_argument("build_graph: inconsistent position dimensions");

  for (double w : weights)
    if (!(w > 0.0)) throw std::invalid_argument("build_graph: vertex weights must be positive");

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (positions[i] == positions[j])
        throw std::invalid_argument("build_graph: duplicate vertex positions");

  FiniteGraph g;
  g.positions = std::move(positions);
  g.weights = std::move(weights);

  switch (eta.rule) {
    case EtaSpec::Rule::explicit_matrix: {
      if (eta.matrix.size() != n)
        throw std::invalid_argument("build_graph: eta matrix size mismatch");
      if (!eta.matrix.is_symmetric())
        throw std::invalid_argument("build_graph: explicit eta must be symmetric");
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (i != j && !(eta.matrix(i, j) >= 0.0))
            throw std::invalid_argument("build_graph: eta entries must be nonnegative");
      g.eta = eta.matrix;
      for (std::size_t i = 0; i < n; ++i) g.eta(i, i) = 0.0;
      break;
    }
    case EtaSpec::Rule::complete: {
      g.eta = SquareMatrix(n, 1.0);
      for (std::size_t i = 0; i < n; ++i) g.eta(i, i) = 0.0;
      break;
    }
    case EtaSpec::Rule::cutoff: {
      if (!(eta.r > 0.0)) throw std::invalid_argument("build_graph: cutoff radius must be positive");
      g.eta = SquareMatrix(n, 0.0);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
          const double e = g.dist(i, j, eta.norm) < eta.r ? 1.0 : 0.0;
          g.eta(i, j) = e;
          g.eta(j, i) = e;
        }
      break;
    }
  }
  return g;
}

StateValidation validate_state(const SpeciesState& state, const FiniteGraph& graph,
                               double density_cap, double mass_tol) {
  StateValidation v;
  const std::size_t n = graph.size();
  if (state.u[0].size() != n || state.u[1].size() != n) {
    v.nonnegative = v.normalized = false;
    v.message = "state/graph size mismatch";
    return v;
  }
  for (int i = 0; i < 2; ++i) {
    CompensatedSum mass;
    for (std::size_t k = 0; k < n; ++k) {
      const double u = state.u[i][k];
      if (u < 0.0) v.nonnegative = false;
      if (u > density_cap) v.within_threshold = false;
      mass.add(u * graph.weights[k]);
    }
    v.mass[i] = mass.value();
    if (std::abs(v.mass[i] - 1.0) > mass_tol) v.normalized = false;
  }
  if (!v.nonnegative)
    v.message = "negative density";
  else if (!v.within_threshold)
    v.message = "density above mobility threshold";
  else if (!v.normalized)
    v.message = "species mass not normalized";
  return v;
}

std::array<double, 2> total_mass(const SpeciesState& state, const FiniteGraph& graph) {
  std::array<double, 2> out{0.0, 0.0};
  for (int i = 0; i < 2; ++i) {
    CompensatedSum s;
    for (std::size_t k = 0; k < graph.size(); ++k) s.add(state.u[i][k] * graph.weights[k]);
    out[i] = s.value();
  }
  return out;
}

std::array<std::vector<double>, 2> center_of_mass(const SpeciesState& state,
                                                  const FiniteGraph& graph) {
  std::array<std::vector<double>, 2> out;
  const std::size_t d = graph.dim();
  for (int i = 0; i < 2; ++i) {
    out[i].assign(d, 0.0);
    for (std::size_t k = 0; k < graph.size(); ++k) {
      const double m = state.u[i][k] * graph.weights[k];
      for (std::size_t c = 0; c < d; ++c) out[i][c] += graph.positions[k][c] * m;
    }
  }
  return out;
}

}  // namespace graphflow
