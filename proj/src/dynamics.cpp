#include "graphflow/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "graphflow/sum.hpp"

namespace graphflow {

namespace {

constexpr double kNegativeClamp = -1e-12;  // round-off band clamped to zero
constexpr double kEnergySlack = 1e-10;     // allowed per-step energy increase
constexpr double kDtUnderflow = 1e-14;

double pos(double x) { return x > 0.0 ? x : 0.0; }

struct FluxExponent {
  double qm1;
  bool linear;
  explicit FluxExponent(const DynamicsParams& p) : qm1(p.q() - 1.0), linear(p.q() == 2.0) {}
  double operator()(double v) const { return linear ? v : std::pow(v, qm1); }
};

std::array<std::vector<double>, 2> vertex_masses(const SpeciesState& state,
                                                 const FiniteGraph& graph) {
  std::array<std::vector<double>, 2> m;
  const std::size_t n = graph.size();
  for (int i = 0; i < 2; ++i) {
    m[i].resize(n);
    for (std::size_t v = 0; v < n; ++v) m[i][v] = state.u[i][v] * graph.weights[v];
  }
  return m;
}

double energy_from_potentials(const std::array<std::vector<double>, 2>& phi,
                              const SpeciesState& state, const FiniteGraph& graph) {
  CompensatedSum e;
  for (int i = 0; i < 2; ++i)
    for (std::size_t v = 0; v < graph.size(); ++v)
      e.add(phi[i][v] * state.u[i][v] * graph.weights[v]);
  return 0.5 * e.value();
}

void check_state_domain(const SpeciesState& state, const FiniteGraph& graph, double cap) {
  if (state.u[0].size() != graph.size() || state.u[1].size() != graph.size())
    throw std::invalid_argument("state/graph size mismatch");
  for (int i = 0; i < 2; ++i)
    for (double u : state.u[i]) {
      if (u < kNegativeClamp) throw std::invalid_argument("state has negative density");
      if (u > cap + 1e-12) throw std::invalid_argument("state exceeds mobility threshold");
    }
}

// One full evaluation of the upwind right-hand side plus the bookkeeping the
// step controller needs: per-vertex inflow/outflow, the stationarity measure
// max m (v)_+, and the sup norm of du/dt.
struct CoreEval {
  std::array<std::vector<double>, 2> dudt;
  std::array<std::vector<double>, 2> inflow, outflow;
  std::vector<double> terms;  // scratch row for the per-vertex reduction
  double max_mv = 0.0;
  double dudt_sup = 0.0;

  void resize(std::size_t n) {
    for (int i = 0; i < 2; ++i) {
      dudt[i].assign(n, 0.0);
      inflow[i].assign(n, 0.0);
      outflow[i].assign(n, 0.0);
    }
    terms.assign(n, 0.0);
    max_mv = 0.0;
    dudt_sup = 0.0;
  }
};

// du/dt for each vertex is assembled as a fixed-order pairwise sum over its
// edge contributions, so the result does not depend on how the outer loop
// is scheduled and is bit-stable under index reversal.
void evaluate_rhs(const SpeciesState& state, const FiniteGraph& graph,
                  const std::array<std::vector<double>, 2>& phi, const DynamicsParams& params,
                  CoreEval& out, FluxField* flux) {
  const std::size_t n = graph.size();
  const FluxExponent powq1(params);
  const Mobility& mob = params.mobility;
  out.resize(n);
  if (flux)
    for (int i = 0; i < 2; ++i) flux->j[i] = SquareMatrix(n);

  for (int i = 0; i < 2; ++i) {
    const double beta = params.beta[i];
    const std::vector<double>& u = state.u[i];
    for (std::size_t v = 0; v < n; ++v) {
      const double* eta_row = graph.eta.row(v);
      double in_v = 0.0, out_v = 0.0;
      for (std::size_t w = 0; w < n; ++w) {
        double term = 0.0;
        const double eta = eta_row[w];
        if (w != v && eta != 0.0) {
          const double vel = beta * (phi[i][v] - phi[i][w]);
          if (vel > 0.0) {
            const double m = mob(u[v], u[w]);
            out.max_mv = std::max(out.max_mv, m * vel);
            if (m != 0.0) {
              const double j = m * powq1(vel);
              term = -j * eta * graph.weights[w];
              out_v -= term;
              if (flux) {
                flux->j[i](v, w) = j;
                flux->j[i](w, v) = -j;
              }
            }
          } else if (vel < 0.0) {
            const double m = mob(u[w], u[v]);
            if (m != 0.0) {
              term = m * powq1(-vel) * eta * graph.weights[w];
              in_v += term;
            }
          }
        }
        out.terms[w] = term;
      }
      out.dudt[i][v] = pairwise_sum(out.terms.data(), n);
      out.inflow[i][v] = in_v;
      out.outflow[i][v] = out_v;
    }
    for (std::size_t v = 0; v < n; ++v)
      out.dudt_sup = std::max(out.dudt_sup, std::abs(out.dudt[i][v]));
  }
}

}  // namespace

void DynamicsParams::validate() const {
  if (!(p > 1.0) || !std::isfinite(p)) throw std::invalid_argument("p must lie in (1, inf)");
  const double qq = q();
  if (std::abs(qq * (p - 1.0) - p) > 1e-12 * std::abs(p))
    throw std::invalid_argument("p/q conjugacy violated");
  for (double b : beta)
    if (!(b > 0.0)) throw std::invalid_argument("beta must be positive");
  if (!(dt_max > 0.0)) throw std::invalid_argument("dt_max must be positive");
  if (!(cfl_safety > 0.0 && cfl_safety < 1.0))
    throw std::invalid_argument("cfl_safety must lie in (0,1)");
  if (!(stationarity_tol >= 0.0)) throw std::invalid_argument("stationarity_tol must be >= 0");
  mobility.validate();
}

std::array<std::vector<double>, 2> potentials(const SpeciesState& state,
                                              const KernelSet& kernels,
                                              const FiniteGraph& graph) {
  const std::size_t n = graph.size();
  const auto m = vertex_masses(state, graph);
  std::array<std::vector<double>, 2> phi;
  for (int i = 0; i < 2; ++i) phi[i].assign(n, 0.0);
  std::vector<double> t0(n), t1(n);
  for (std::size_t v = 0; v < n; ++v) {
    const double* k11 = kernels.K11.row(v);
    const double* k22 = kernels.K22.row(v);
    const double* k12 = kernels.K12.row(v);
    for (std::size_t w = 0; w < n; ++w) {
      t0[w] = k11[w] * m[0][w] + k12[w] * m[1][w];
      t1[w] = k12[w] * m[0][w] + k22[w] * m[1][w];
    }
    phi[0][v] = pairwise_sum(t0.data(), n);
    phi[1][v] = pairwise_sum(t1.data(), n);
  }
  return phi;
}

std::array<SquareMatrix, 2> velocity(const SpeciesState& state, const KernelSet& kernels,
                                     const DynamicsParams& params, const FiniteGraph& graph) {
  params.validate();
  const std::size_t n = graph.size();
  const auto phi = potentials(state, kernels, graph);
  std::array<SquareMatrix, 2> v{SquareMatrix(n), SquareMatrix(n)};
  for (int i = 0; i < 2; ++i)
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) v[i](a, b) = params.beta[i] * (phi[i][a] - phi[i][b]);
  return v;
}

RhsResult rhs(const SpeciesState& state, const FiniteGraph& graph, const KernelSet& kernels,
              const DynamicsParams& params) {
  params.validate();
  check_state_domain(state, graph, params.mobility.threshold());
  const auto phi = potentials(state, kernels, graph);
  CoreEval eval;
  RhsResult result;
  evaluate_rhs(state, graph, phi, params, eval, &result.flux);
  result.dudt = std::move(eval.dudt);
  return result;
}

double energy(const SpeciesState& state, const KernelSet& kernels, const FiniteGraph& graph) {
  return energy_from_potentials(potentials(state, kernels, graph), state, graph);
}

double dissipation(const SpeciesState& state, const KernelSet& kernels,
                   const DynamicsParams& params, const FiniteGraph& graph) {
  params.validate();
  const std::size_t n = graph.size();
  const auto phi = potentials(state, kernels, graph);
  const double q = params.q();
  CompensatedSum total;
  for (int i = 0; i < 2; ++i) {
    const double beta = params.beta[i];
    for (std::size_t v = 0; v < n; ++v)
      for (std::size_t w = 0; w < n; ++w) {
        const double eta = graph.eta(v, w);
        if (eta == 0.0) continue;
        const double vel = beta * (phi[i][v] - phi[i][w]);
        if (vel <= 0.0) continue;
        const double m = params.mobility(state.u[i][v], state.u[i][w]);
        if (m == 0.0) continue;
        total.add(m * std::pow(vel, q) * eta * graph.weights[w] * graph.weights[v] / beta);
      }
  }
  return -total.value();
}

StationarityReport is_stationary(const SpeciesState& state, const KernelSet& kernels,
                                 const DynamicsParams& params, const FiniteGraph& graph,
                                 double tol) {
  const std::size_t n = graph.size();
  const auto phi = potentials(state, kernels, graph);
  StationarityReport rep;
  constexpr std::size_t kMaxListed = 32;
  for (int i = 0; i < 2; ++i) {
    const double beta = params.beta[i];
    for (std::size_t v = 0; v < n; ++v)
      for (std::size_t w = 0; w < n; ++w) {
        if (v == w || graph.eta(v, w) == 0.0) continue;
        const double vel = beta * (phi[i][v] - phi[i][w]);
        if (vel <= 0.0) continue;
        const double mv = params.mobility(state.u[i][v], state.u[i][w]) * vel;
        if (mv > rep.max_violation) {
          rep.max_violation = mv;
          rep.species = i;
          rep.from = v;
          rep.to = w;
        }
        if (mv > tol && rep.violations.size() < kMaxListed)
          rep.violations.push_back({i, v, w, mv});
      }
  }
  rep.stationary = rep.max_violation <= tol;
  std::sort(rep.violations.begin(), rep.violations.end(),
            [](const auto& a, const auto& b) { return a.value > b.value; });
  return rep;
}

Diagnostics compute_diagnostics(const SpeciesState& state, const FiniteGraph& graph,
                                const KernelSet& kernels, const DynamicsParams& params) {
  Diagnostics d;
  const auto phi = potentials(state, kernels, graph);
  d.energy = energy_from_potentials(phi, state, graph);
  d.mass = total_mass(state, graph);
  d.com = center_of_mass(state, graph);
  d.dissipation = dissipation(state, kernels, params, graph);
  CoreEval eval;
  evaluate_rhs(state, graph, phi, params, eval, nullptr);
  d.dudt_sup = eval.dudt_sup;
  return d;
}

bool aborted(StopReason r) {
  return r == StopReason::dt_underflow || r == StopReason::negative_density;
}

IntegrationResult integrate(const SpeciesState& initial, const FiniteGraph& graph,
                            const KernelSet& kernels, const DynamicsParams& params,
                            const IntegrateOptions& options) {
  params.validate();
  if (!params.mobility.upwind_admissible())
    throw std::invalid_argument("integrate: mobility must satisfy m(0,s)=0 (theta1 > 0)");
  const double cap = params.mobility.threshold();
  check_state_domain(initial, graph, cap);

  const std::size_t n = graph.size();
  IntegrationResult result;
  Trajectory& traj = result.trajectory;

  SpeciesState u = initial;
  for (int i = 0; i < 2; ++i)
    for (auto& x : u.u[i]) {
      if (x < 0.0) x = 0.0;  // inside the round-off band, checked above
      if (x > cap) x = cap;
    }

  double t = 0.0;
  long steps = 0;
  double last_recorded = -1.0;
  const auto record = [&](const SpeciesState& s) {
    traj.times.push_back(t);
    traj.states.push_back(s);
    traj.diagnostics.push_back(compute_diagnostics(s, graph, kernels, params));
    last_recorded = t;
  };
  record(u);

  CoreEval eval;
  SpeciesState u_new = SpeciesState::zero(n);
  auto phi = potentials(u, kernels, graph);

  while (true) {
    evaluate_rhs(u, graph, phi, params, eval, nullptr);

    if (eval.max_mv <= params.stationarity_tol) {
      result.reason = StopReason::stationary;
      break;
    }
    if (t >= params.t_end) {
      result.reason = StopReason::reached_t_end;
      break;
    }

    double rate = 0.0;
    for (int i = 0; i < 2; ++i)
      for (std::size_t v = 0; v < n; ++v) {
        if (u.u[i][v] > 0.0 && eval.outflow[i][v] > 0.0)
          rate = std::max(rate, eval.outflow[i][v] / u.u[i][v]);
        if (std::isfinite(cap) && eval.inflow[i][v] > 0.0 && u.u[i][v] < cap)
          rate = std::max(rate, eval.inflow[i][v] / (cap - u.u[i][v]));
      }

    double dt = params.dt_max;
    if (rate > 0.0) dt = std::min(dt, params.cfl_safety / rate);
    dt = std::min(dt, params.t_end - t);

    const double e_old = energy_from_potentials(phi, u, graph);
    std::array<std::vector<double>, 2> phi_new;
    bool accepted = false;
    while (!accepted) {
      bool domain_ok = true;
      for (int i = 0; i < 2 && domain_ok; ++i)
        for (std::size_t v = 0; v < n; ++v) {
          double x = u.u[i][v] + dt * eval.dudt[i][v];
          if (x < 0.0) {
            if (x < kNegativeClamp) {
              result.reason = StopReason::negative_density;
              result.message = "density went negative beyond round-off; step control bug";
              if (last_recorded != t) record(u);
              result.final_time = t;
              result.steps = steps;
              return result;
            }
            x = 0.0;
          } else if (x > cap) {
            if (x > cap + 1e-12) {
              domain_ok = false;
              break;
            }
            x = cap;
          }
          u_new.u[i][v] = x;
        }

      if (domain_ok) {
        phi_new = potentials(u_new, kernels, graph);
        const double e_new = energy_from_potentials(phi_new, u_new, graph);
        if (e_new <= e_old + kEnergySlack) accepted = true;
      }
      if (!accepted) {
        dt *= 0.5;
        if (dt < kDtUnderflow) {
          result.reason = StopReason::dt_underflow;
          result.message = "step size underflow in energy/positivity control";
          if (last_recorded != t) record(u);
          result.final_time = t;
          result.steps = steps;
          return result;
        }
      }
    }

    std::swap(u, u_new);
    phi = std::move(phi_new);
    t += dt;
    ++steps;

    if (options.snapshot_stride > 0 && steps % options.snapshot_stride == 0) record(u);
    if (options.observer && !options.observer(t, u, eval.dudt)) {
      result.reason = StopReason::observer_stop;
      break;
    }
  }

  if (last_recorded != t) record(u);
  result.final_time = t;
  result.steps = steps;
  return result;
}

namespace {

// Compositions of `total` into n nonnegative parts, lexicographically
// ascending, flattened as doubles (counts / resolution).
void enumerate_compositions(std::size_t n, int total, int resolution,
                            std::vector<double>& flat) {
  std::vector<int> c(n, 0);
  const double inv = 1.0 / resolution;
  auto rec = [&](auto&& self, std::size_t pos, int remaining) -> void {
    if (pos == n - 1) {
      c[pos] = remaining;
      for (std::size_t k = 0; k < n; ++k) flat.push_back(c[k] * inv);
      return;
    }
    for (int v = 0; v <= remaining; ++v) {
      c[pos] = v;
      self(self, pos + 1, remaining - v);
    }
  };
  rec(rec, 0, total);
}

double count_compositions(std::size_t n, int resolution) {
  double c = 1.0;
  for (std::size_t k = 1; k < n; ++k) c = c * (resolution + k) / k;
  return c;
}

}  // namespace

MinimizeResult brute_force_minimize(const KernelSet& kernels, const FiniteGraph& graph,
                                    int resolution, double max_pairs) {
  const std::size_t n = graph.size();
  if (n > 6) throw std::invalid_argument("brute_force_minimize: only graphs with N <= 6");
  if (resolution < 1) throw std::invalid_argument("brute_force_minimize: resolution >= 1");
  const double count = count_compositions(n, resolution);
  if (count * count > max_pairs)
    throw std::invalid_argument("brute_force_minimize: candidate grid too large");

  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(count) * n);
  enumerate_compositions(n, resolution, resolution, grid);
  const std::size_t m = grid.size() / n;

  const auto self_energy = [&](const SquareMatrix& K, const double* mass) {
    double e = 0.0;
    for (std::size_t v = 0; v < n; ++v) {
      double row = 0.0;
      for (std::size_t w = 0; w < n; ++w) row += K(v, w) * mass[w];
      e += mass[v] * row;
    }
    return 0.5 * e;
  };

  std::vector<double> self1(m), self2(m);
  for (std::size_t idx = 0; idx < m; ++idx) {
    self1[idx] = self_energy(kernels.K11, &grid[idx * n]);
    self2[idx] = self_energy(kernels.K22, &grid[idx * n]);
  }

  double best = std::numeric_limits<double>::infinity();
  std::size_t best1 = 0, best2 = 0;
  std::vector<double> w(n);
  for (std::size_t i1 = 0; i1 < m; ++i1) {
    const double* m1 = &grid[i1 * n];
    for (std::size_t v = 0; v < n; ++v) {
      double acc = 0.0;
      for (std::size_t x = 0; x < n; ++x) acc += kernels.K12(x, v) * m1[x];
      w[v] = acc;
    }
    const double base = self1[i1];
    for (std::size_t i2 = 0; i2 < m; ++i2) {
      const double* m2 = &grid[i2 * n];
      double cross = 0.0;
      for (std::size_t v = 0; v < n; ++v) cross += w[v] * m2[v];
      const double e = base + self2[i2] + cross;
      if (e < best) {
        best = e;
        best1 = i1;
        best2 = i2;
      }
    }
  }

  MinimizeResult res;
  res.state = SpeciesState::zero(n);
  res.masses[0].assign(grid.begin() + best1 * n, grid.begin() + (best1 + 1) * n);
  res.masses[1].assign(grid.begin() + best2 * n, grid.begin() + (best2 + 1) * n);
  for (std::size_t v = 0; v < n; ++v) {
    res.state.u[0][v] = res.masses[0][v] / graph.weights[v];
    res.state.u[1][v] = res.masses[1][v] / graph.weights[v];
  }
  res.energy = energy(res.state, kernels, graph);
  return res;
}

std::array<std::vector<double>, 2> center_of_mass_drift(const SpeciesState& state,
                                                        const FiniteGraph& graph,
                                                        const KernelSet& kernels,
                                                        const DynamicsParams& params) {
  const auto r = rhs(state, graph, kernels, params);
  std::array<std::vector<double>, 2> drift;
  const std::size_t d = graph.dim();
  for (int i = 0; i < 2; ++i) {
    drift[i].assign(d, 0.0);
    for (std::size_t v = 0; v < graph.size(); ++v) {
      const double m = graph.weights[v] * r.dudt[i][v];
      for (std::size_t c = 0; c < d; ++c) drift[i][c] += graph.positions[v][c] * m;
    }
  }
  return drift;
}

}  // namespace graphflow
