#ifndef GRAPHFLOW_DYNAMICS_HPP
#define GRAPHFLOW_DYNAMICS_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "graphflow/graph.hpp"
#include "graphflow/kernels.hpp"
#include "graphflow/mobility.hpp"

namespace graphflow {

// Parameters of the upwind dynamics. The flux exponent is q - 1 with
// q = p / (p - 1); beta scales each species' velocity field.
struct DynamicsParams {
  double p = 2.0;
  std::array<double, 2> beta{1.0, 1.0};
  Mobility mobility{};
  double dt_max = 1e-2;
  double cfl_safety = 0.5;
  double stationarity_tol = 1e-10;
  double t_end = 100.0;

  double q() const { return p / (p - 1.0); }
  void validate() const;
};

// Interaction potentials phi^(i)(v) = sum_k sum_w K^(ik)(v,w) u^(k)_w mu_w,
// without the beta factor. The velocity on an edge is
// v^(i)(v,w) = beta^(i) (phi^(i)(v) - phi^(i)(w)); positive values push mass
// from v to w.
std::array<std::vector<double>, 2> potentials(const SpeciesState& state,
                                              const KernelSet& kernels,
                                              const FiniteGraph& graph);

std::array<SquareMatrix, 2> velocity(const SpeciesState& state, const KernelSet& kernels,
                                     const DynamicsParams& params, const FiniteGraph& graph);

struct RhsResult {
  std::array<std::vector<double>, 2> dudt;
  FluxField flux;
};

// Upwind right-hand side
//   du^(i)_v/dt = sum_w ( m(u_w, u_v) [(v_vw)_-]^{q-1}
//                       - m(u_v, u_w) [(v_vw)_+]^{q-1} ) eta_vw mu_w.
// Outflow is weighted by the tail-vertex mobility, inflow by the head
// vertex's, so empty vertices never emit mass and the per-species mass sum
// of du/dt cancels pairwise.
RhsResult rhs(const SpeciesState& state, const FiniteGraph& graph, const KernelSet& kernels,
              const DynamicsParams& params);

// Interaction energy 1/2 sum_{i,k} sum_{v,w} K^(ik)(v,w) u^(i)_v u^(k)_w mu_v mu_w.
double energy(const SpeciesState& state, const KernelSet& kernels, const FiniteGraph& graph);

// Energy dissipation along the flow,
//   -sum_i (1/beta^(i)) sum_{v,w} m(u_v, u_w) [(v_vw)_+]^q eta_vw mu_w mu_v,
// always <= 0, and equal to dE/dt along exact trajectories.
double dissipation(const SpeciesState& state, const KernelSet& kernels,
                   const DynamicsParams& params, const FiniteGraph& graph);

struct StationarityReport {
  bool stationary = true;
  double max_violation = 0.0;
  int species = -1;
  std::size_t from = 0, to = 0;
  // Edges with m * (v)_+ above tolerance, worst first (capped).
  struct Violation {
    int species;
    std::size_t from, to;
    double value;
  };
  std::vector<Violation> violations;
};

// A state is stationary iff m(u_v, u_w) (v_vw)_+ vanishes on every edge for
// both species; this is checked against `tol` edge by edge.
StationarityReport is_stationary(const SpeciesState& state, const KernelSet& kernels,
                                 const DynamicsParams& params, const FiniteGraph& graph,
                                 double tol);

struct Diagnostics {
  double energy = 0.0;
  std::array<double, 2> mass{0.0, 0.0};
  std::array<std::vector<double>, 2> com;
  double dissipation = 0.0;
  double dudt_sup = 0.0;
};

Diagnostics compute_diagnostics(const SpeciesState& state, const FiniteGraph& graph,
                                const KernelSet& kernels, const DynamicsParams& params);

struct Trajectory {
  std::vector<double> times;
  std::vector<SpeciesState> states;
  std::vector<Diagnostics> diagnostics;
};

enum class StopReason {
  reached_t_end,
  stationary,
  observer_stop,
  dt_underflow,      // abort: step-size control collapsed
  negative_density,  // abort: positivity violated beyond round-off
};

bool aborted(StopReason r);

struct IntegrationResult {
  Trajectory trajectory;
  StopReason reason = StopReason::reached_t_end;
  double final_time = 0.0;
  long steps = 0;
  std::string message;
};

struct IntegrateOptions {
  // Record every k-th accepted step (first and last are always recorded).
  long snapshot_stride = 1;
  // Called after each accepted step; return false to stop the run.
  std::function<bool(double t, const SpeciesState& state,
                     const std::array<std::vector<double>, 2>& dudt)>
      observer;
};

// Explicit Euler with an adaptive step:
//   dt = min(dt_max, cfl / max outflow rate relative to u,
//            cfl / max inflow rate relative to the remaining headroom)
// so densities stay in [0, S] by construction. Steps that would raise the
// energy by more than 1e-10 are halved and retried; dt below 1e-14 aborts.
// Stops early once the stationarity criterion holds at `stationarity_tol`.
// Round-off in [-1e-12, 0) is clamped to zero; anything below that aborts
// instead of being papered over.
IntegrationResult integrate(const SpeciesState& initial, const FiniteGraph& graph,
                            const KernelSet& kernels, const DynamicsParams& params,
                            const IntegrateOptions& options = {});

struct MinimizeResult {
  SpeciesState state;
  double energy = 0.0;
  std::array<std::vector<double>, 2> masses;  // mass per vertex, per species
};

// Exhaustive minimizer of the interaction energy over the product of two
// probability simplices discretized with mass spacing 1/resolution. Ties are
// broken toward the lexicographically smallest concatenated mass vector.
// Guard rails: N <= 6 and at most `max_pairs` candidate pairs.
MinimizeResult brute_force_minimize(const KernelSet& kernels, const FiniteGraph& graph,
                                    int resolution, double max_pairs = 1.2e9);

// d x_c^(i)/dt = sum_v x_v mu_v du^(i)_v/dt; nonzero in general, which is
// the upwind scheme's known failure to conserve the center of mass.
std::array<std::vector<double>, 2> center_of_mass_drift(const SpeciesState& state,
                                                        const FiniteGraph& graph,
                                                        const KernelSet& kernels,
                                                        const DynamicsParams& params);

}  // namespace graphflow

#endif
