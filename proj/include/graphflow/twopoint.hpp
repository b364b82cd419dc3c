#ifndef GRAPHFLOW_TWOPOINT_HPP
#define GRAPHFLOW_TWOPOINT_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "graphflow/dynamics.hpp"
#include "graphflow/graph.hpp"
#include "graphflow/kernels.hpp"
#include "graphflow/mobility.hpp"

namespace graphflow {

// Two-vertex problem with constant-diagonal kernels, described entirely by
// the three scalar diagonal differences. States are written in mass
// coordinates (x, y) = (rho^(1)(x_1), rho^(2)(x_1)) over the unit square.
struct TwoPointProblem {
  double D11 = 0.0, D22 = 0.0, D12 = 0.0;
  std::array<double, 2> beta{1.0, 1.0};
  double p = 2.0;
  Mobility mobility{};

  // The classification requires m = 0 exactly on empty vertices and nowhere
  // else on the feasible set; for the built-in family this means theta1 > 0,
  // and theta2 > 0 is only admissible with unit vertex weights (the
  // canonical two-point graph used here).
  void validate() const;
};

enum class TwoPointTag { a, a_r_family, b1, b2, c, d };
enum class Stability { asymptotically_stable, stable_not_asymptotic, unstable };

std::string to_string(TwoPointTag tag);
std::string to_string(Stability s);

// One stationary state (or a one-parameter family of them). Non-family
// entries list the representative point first, then its vertex-swapped
// mirror(s). Families are affine segments point(r) = origin + r * direction
// with r in [r_min, r_max]; the planar flag marks the fully degenerate
// decoupled case where every state is stationary.
struct TwoPointState {
  TwoPointTag tag = TwoPointTag::a;
  std::vector<std::array<double, 2>> points;
  bool is_family = false;
  bool planar = false;
  std::array<double, 2> origin{0.5, 0.5};
  std::array<double, 2> direction{0.0, 0.0};
  double r_min = 0.0, r_max = 0.0;
  Stability stability = Stability::asymptotically_stable;
  double energy_rel_a = 0.0;

  std::array<double, 2> family_point(double r) const {
    return {origin[0] + direction[0] * r, origin[1] + direction[1] * r};
  }
  // Euclidean distance from a point to this state (to the nearest member
  // for families).
  double distance(const std::array<double, 2>& pt) const;
};

struct TwoPointClassification {
  bool decoupled = false;
  bool degenerate = false;  // D11 D22 == D12^2 with D12 != 0
  std::vector<TwoPointState> states;
  std::vector<std::string> boundary_flags;

  const TwoPointState* find(TwoPointTag tag) const;
};

// Analytic enumeration of all stationary states with stability labels and
// energies relative to the uniform state. Ties in the strict existence
// inequalities classify as "not present" and are reported in
// boundary_flags.
TwoPointClassification classify(const TwoPointProblem& problem);

struct VerifyOptions {
  int perturbations = 100;
  double magnitude = 1e-2;
  double return_tol = 1e-3;
  double escape_distance = 0.1;
  double t_end = 400.0;
  std::uint64_t seed = 2024;
};

// Numerical cross-validation of the analytic stability labels by seeded
// perturbation runs; throws std::runtime_error on any disagreement instead
// of silently trusting either side.
void verify_classification(const TwoPointProblem& problem,
                           const TwoPointClassification& classification,
                           const VerifyOptions& options = {});

// Signed energy difference E(tag2) - E(tag1) from the closed-form gap
// table; `r` parameterizes the a_r family when one of the tags is the
// family. Throws if a tag is not present for the problem.
double energy_gap(const TwoPointProblem& problem, TwoPointTag tag1, TwoPointTag tag2,
                  double r = 0.0);

struct PortraitRecord {
  double x = 0.0, y = 0.0;
  double energy = 0.0;
  double dudt1 = 0.0, dudt2 = 0.0;
};

// Energy and right-hand side sampled on a grid_n x grid_n lattice over the
// unit square of mass coordinates.
std::vector<PortraitRecord> phase_portrait(const TwoPointProblem& problem, int grid_n);

// Canonical two-point graph (unit weights) and the constant-diagonal
// kernel set realizing the given diagonal differences.
FiniteGraph twopoint_graph();
KernelSet twopoint_kernels(double D11, double D22, double D12);
DynamicsParams twopoint_params(const TwoPointProblem& problem);
SpeciesState twopoint_state(double x, double y);

}  // namespace graphflow

#endif
