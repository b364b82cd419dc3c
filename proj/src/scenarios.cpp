#include "graphflow/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "graphflow/rng.hpp"
#include "graphflow/sum.hpp"

namespace graphflow {

namespace {

double pos(double x) { return x > 0.0 ? x : 0.0; }
double neg(double x) { return x < 0.0 ? -x : 0.0; }

}  // namespace

SpeciesState random_initial_state(const FiniteGraph& graph, std::uint64_t seed) {
  const std::size_t n = graph.size();
  SpeciesState s = SpeciesState::zero(n);
  for (int i = 0; i < 2; ++i) {
    for (std::size_t v = 0; v < n; ++v)
      s.u[i][v] = uniform01(seed, static_cast<std::uint64_t>(i) * n + v);
    CompensatedSum mass;
    for (std::size_t v = 0; v < n; ++v) mass.add(s.u[i][v] * graph.weights[v]);
    const double total = mass.value();
    if (!(total > 0.0)) throw std::runtime_error("random initial state degenerate");
    for (std::size_t v = 0; v < n; ++v) s.u[i][v] /= total;
  }
  return s;
}

double overlap_index(const SpeciesState& state, const FiniteGraph& graph) {
  CompensatedSum s;
  for (std::size_t v = 0; v < graph.size(); ++v)
    s.add(std::min(state.u[0][v], state.u[1][v]) * graph.weights[v]);
  return s.value();
}

std::size_t support_size(const std::vector<double>& u, double threshold) {
  std::size_t n = 0;
  for (double x : u)
    if (x > threshold) ++n;
  return n;
}

double max_oracle_error(const Scenario& scenario) {
  const auto vel = velocity(scenario.initial, scenario.kernels, scenario.params, scenario.graph);
  const auto r = rhs(scenario.initial, scenario.graph, scenario.kernels, scenario.params);
  double err = 0.0;
  for (const auto& o : scenario.oracles) {
    const double engine = o.kind == OracleValue::Kind::velocity
                              ? vel[o.species](o.from, o.to)
                              : r.dudt[o.species][o.from];
    err = std::max(err, std::abs(engine - o.value));
  }
  return err;
}

Scenario three_point(double r1, double r2, double alpha, double delta, double cutoff_r) {
  if (!(r1 > 0.0 && r2 > 0.0)) throw std::invalid_argument("three_point: r1, r2 > 0 required");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("three_point: delta in (0,1)");
  if (!(alpha >= 0.0)) throw std::invalid_argument("three_point: alpha >= 0");
  if (!(cutoff_r > 0.0)) throw std::invalid_argument("three_point: cutoff_r > 0");

  Scenario s;
  s.name = "three_point";
  s.parameters = {{"r1", r1}, {"r2", r2}, {"alpha", alpha}, {"delta", delta},
                  {"cutoff_r", cutoff_r}};
  s.graph = build_graph({{-r1}, {0.0}, {r2}}, {1.0, 1.0, 1.0}, EtaSpec::cutoff(cutoff_r));
  s.kernels = evaluate(KernelSpec::abs_scaled(1.0), KernelSpec::abs_scaled(1.0),
                       KernelSpec::abs_scaled(-alpha), s.graph);
  s.params.p = 2.0;
  s.params.t_end = 100.0;
  s.initial = SpeciesState::zero(3);
  s.initial.u[0] = {0.0, 1.0, 0.0};
  s.initial.u[1] = {0.5 * (1.0 + delta), 0.0, 0.5 * (1.0 - delta)};

  const double e12 = s.graph.eta(0, 1), e13 = s.graph.eta(0, 2), e23 = s.graph.eta(1, 2);

  // Initial velocities and time derivatives, in closed form.
  const double v1_12 = r1 * (alpha * delta + 1.0);
  const double v1_13 = r1 - r2 + alpha * delta * (r1 + r2);
  const double v1_23 = r2 * (alpha * delta - 1.0);
  const double v2_12 = r1 * (-alpha - delta);
  const double v2_13 = alpha * (r2 - r1) - delta * (r1 + r2);
  const double v2_23 = r2 * (alpha - delta);
  using K = OracleValue::Kind;
  s.oracles = {
      {K::velocity, 0, 0, 1, v1_12, "v1_12"}, {K::velocity, 0, 0, 2, v1_13, "v1_13"},
      {K::velocity, 0, 1, 2, v1_23, "v1_23"}, {K::velocity, 1, 0, 1, v2_12, "v2_12"},
      {K::velocity, 1, 0, 2, v2_13, "v2_13"}, {K::velocity, 1, 1, 2, v2_23, "v2_23"},
  };
  const double X = alpha * (r1 - r2) + delta * (r1 + r2);  // = -v2_13
  const double du1_1 = neg(r1 * (1.0 + alpha * delta)) * e12;
  const double du1_3 = neg(r2 * (1.0 - alpha * delta)) * e23;
  const double hi = 0.5 * (1.0 + delta), lo = 0.5 * (1.0 - delta);
  const double du2_1 = lo * pos(X) * e13 - hi * neg(X) * e13 - hi * neg(r1 * (alpha + delta)) * e12;
  const double du2_2 = hi * neg(r1 * (alpha + delta)) * e12 + lo * neg(r2 * (alpha - delta)) * e23;
  const double du2_3 = hi * neg(X) * e13 - lo * pos(X) * e13 - lo * neg(r2 * (alpha - delta)) * e23;
  s.oracles.insert(s.oracles.end(),
                   {{K::dudt, 0, 0, 0, du1_1, "du1_1"},
                    {K::dudt, 0, 1, 0, -du1_1 - du1_3, "du1_2"},
                    {K::dudt, 0, 2, 0, du1_3, "du1_3"},
                    {K::dudt, 1, 0, 0, du2_1, "du2_1"},
                    {K::dudt, 1, 1, 0, du2_2, "du2_2"},
                    {K::dudt, 1, 2, 0, du2_3, "du2_3"}});

  const bool initial_stationary =
      e13 == 0.0 && std::abs(delta) <= std::min(alpha, alpha > 0.0 ? 1.0 / alpha : 0.0);
  s.checks.push_back(
      {initial_stationary ? "initial state is stationary (outer edge cut off)"
                          : "initial state is not stationary",
       [initial_stationary](const IntegrationResult& res, const Scenario& sc) {
         const auto rep = is_stationary(sc.initial, sc.kernels, sc.params, sc.graph, 1e-12);
         (void)res;
         return rep.stationary == initial_stationary;
       }});
  return s;
}

Scenario four_point(double eps, double alpha, double beta2) {
  if (!(eps >= 0.0 && eps <= 1.0)) throw std::invalid_argument("four_point: eps in [0,1]");
  if (!(alpha >= 0.0)) throw std::invalid_argument("four_point: alpha >= 0");
  if (!(beta2 > 0.0)) throw std::invalid_argument("four_point: beta2 > 0");

  Scenario s;
  s.name = "four_point";
  s.parameters = {{"eps", eps}, {"alpha", alpha}, {"beta2", beta2}};
  const std::vector<std::vector<double>> x = {{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {eps, 1.0}};
  s.graph = build_graph(x, {1.0, 1.0, 1.0, 1.0}, EtaSpec::complete());
  s.kernels = evaluate(KernelSpec::abs_scaled(1.0, Norm::one_norm),
                       KernelSpec::abs_scaled(1.0, Norm::one_norm),
                       KernelSpec::abs_scaled(-alpha, Norm::one_norm), s.graph);
  s.params.p = 2.0;
  s.params.beta = {1.0, beta2};
  s.params.t_end = 200.0;
  s.initial = SpeciesState::zero(4);
  s.initial.u[0] = {0.0, 0.0, 0.0, 1.0};  // species 1 on x4
  s.initial.u[1] = {1.0, 0.0, 0.0, 0.0};  // species 2 on x1

  // All mass sits on x4 (species 1) and x1 (species 2), so the initial
  // velocities reduce to differences of 1-norm distances to those anchors.
  const auto d1 = [&](std::size_t a, std::size_t b) {
    return std::abs(x[a][0] - x[b][0]) + std::abs(x[a][1] - x[b][1]);
  };
  using K = OracleValue::Kind;
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = a + 1; b < 4; ++b) {
      const double v1 = d1(a, 3) - d1(b, 3) - alpha * d1(a, 0) + alpha * d1(b, 0);
      const double v2 = beta2 * (d1(a, 0) - d1(b, 0) - alpha * d1(a, 3) + alpha * d1(b, 3));
      s.oracles.push_back({K::velocity, 0, a, b, v1,
                           "v1_" + std::to_string(a + 1) + std::to_string(b + 1)});
      s.oracles.push_back({K::velocity, 1, a, b, v2,
                           "v2_" + std::to_string(a + 1) + std::to_string(b + 1)});
    }
  // du1 on x3 is the inflow from x4 alone; du2 on x1 is pure outflow.
  s.oracles.push_back({K::dudt, 0, 2, 0, neg((1.0 - alpha) * (1.0 - eps)), "du1_3"});
  const double du2_1 = -beta2 * (pos(-1.0 + alpha - 2.0 * alpha * eps) +
                                 pos(-2.0 - 2.0 * alpha * eps) +
                                 pos(-(1.0 + eps) * (1.0 + alpha)));
  s.oracles.push_back({K::dudt, 1, 0, 0, du2_1, "du2_1"});

  if (alpha < 1.0) {
    s.checks.push_back({"weak cross-repulsion: species 1 never leaves x4",
                        [](const IntegrationResult& res, const Scenario&) {
                          for (const auto& st : res.trajectory.states)
                            if (st.u[0][3] < 1.0 - 1e-12 || st.u[0][2] > 1e-12) return false;
                          return true;
                        }});
  }
  return s;
}

namespace {

Scenario lattice_base(int n, double weight, double spacing, std::uint64_t seed) {
  if (n < 3) throw std::invalid_argument("lattice scenarios need n >= 3");
  std::vector<std::vector<double>> pos;
  pos.reserve(static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) pos.push_back({i * spacing, j * spacing});
  Scenario s;
  s.graph = build_graph(std::move(pos),
                        std::vector<double>(static_cast<std::size_t>(n) * n, weight),
                        EtaSpec::complete());
  s.seed = seed;
  s.initial = random_initial_state(s.graph, seed);
  s.params.p = 2.0;
  return s;
}

}  // namespace

Scenario lattice_pattern(int n, LatticeKernelVariant variant, std::uint64_t seed) {
  // unit spacing: the tent radii (0.5, 0.2) then act on co-located mass only
  Scenario s = lattice_base(n, 1.0, 1.0, seed);
  s.name = variant == LatticeKernelVariant::kef_global ? "lattice_kef_global"
                                                       : "lattice_kef_truncated";
  s.parameters = {{"n", static_cast<double>(n)}};
  // pattern runs are long-horizon and CFL-limited only near the end; a
  // larger cap keeps the step count reasonable
  s.params.dt_max = 0.05;

  if (variant == LatticeKernelVariant::kef_global) {
    const KernelSpec self = KernelSpec::log_quad(1.0, 1.0 / 200.0);
    s.kernels = evaluate(self, self, KernelSpec::tent(10.0, 20.0), s.graph);
    s.params.t_end = 5000.0;
  } else {
    const KernelSpec self = KernelSpec::trunc_log_quad(1.0, 1.0 / 400.0, 0.2);
    s.kernels = evaluate(self, self, KernelSpec::tent(4.0, 20.0), s.graph);
    s.params.t_end = 200.0;
  }

  if (variant == LatticeKernelVariant::kef_truncated) {
    s.checks.push_back(
        {"overlap index decays after the initial transient (windowed averages)",
         [](const IntegrationResult& res, const Scenario& sc) {
           const auto& traj = res.trajectory;
           if (traj.states.size() < 8) return true;
           const std::size_t skip = traj.states.size() / 5;
           const std::size_t window = std::max<std::size_t>(1, (traj.states.size() - skip) / 4);
           std::vector<double> avg;
           for (std::size_t start = skip; start + window <= traj.states.size();
                start += window) {
             double acc = 0.0;
             for (std::size_t k = start; k < start + window; ++k)
               acc += overlap_index(traj.states[k], sc.graph);
             avg.push_back(acc / window);
           }
           for (std::size_t k = 1; k < avg.size(); ++k)
             if (avg[k] > avg[k - 1] + 1e-9) return false;
           return true;
         }});
  }
  s.checks.push_back({"run reaches a near-stationary profile",
                      [](const IntegrationResult& res, const Scenario&) {
                        return res.reason == StopReason::stationary ||
                               res.trajectory.diagnostics.back().dudt_sup < 1e-6;
                      }});
  return s;
}

Scenario mobility_experiment(MobilityVariant variant, double p, std::uint64_t seed) {
  if (!(p > 1.0)) throw std::invalid_argument("mobility_experiment: p > 1");
  // the lattice spans the unit square so the exponential kernel stays at the
  // same O(10) scale as the other experiments' kernels
  Scenario s = lattice_base(10, 1.0 / 20.0, 1.0 / 9.0, seed);
  s.name = variant == MobilityVariant::linear ? "mobility_linear" : "mobility_volume_filling";
  s.parameters = {{"p", p}};
  const KernelSpec attract = KernelSpec::exp_scaled(20.0);
  s.kernels = evaluate(attract, attract, attract, s.graph);
  s.params.p = p;
  s.params.t_end = 2000.0;
  s.params.dt_max = 0.05;
  s.params.mobility =
      variant == MobilityVariant::linear ? Mobility::linear() : Mobility::volume_filling();

  if (variant == MobilityVariant::linear) {
    s.checks.push_back({"both species aggregate onto a single vertex",
                        [](const IntegrationResult& res, const Scenario& sc) {
                          const auto& fin = res.trajectory.states.back();
                          for (int i = 0; i < 2; ++i) {
                            double best = 0.0;
                            for (std::size_t v = 0; v < sc.graph.size(); ++v)
                              best = std::max(best, fin.u[i][v] * sc.graph.weights[v]);
                            if (best < 1.0 - 1e-3) return false;
                          }
                          return true;
                        }});
  } else {
    s.checks.push_back({"densities stay below the volume-filling cap",
                        [](const IntegrationResult& res, const Scenario&) {
                          for (const auto& st : res.trajectory.states)
                            for (int i = 0; i < 2; ++i)
                              for (double u : st.u[i])
                                if (u > 1.0 + 1e-12) return false;
                          return true;
                        }});
    s.checks.push_back({"stationary support spreads over 20..25 vertices per species",
                        [](const IntegrationResult& res, const Scenario&) {
                          const auto& fin = res.trajectory.states.back();
                          for (int i = 0; i < 2; ++i) {
                            const std::size_t supp = support_size(fin.u[i], 1e-6);
                            if (supp < 20 || supp > 25) return false;
                          }
                          return true;
                        }});
  }
  return s;
}

Scenario make_scenario(const std::string& name,
                       const std::vector<std::pair<std::string, double>>& parameters,
                       std::uint64_t seed) {
  const auto get = [&](const std::string& key, double fallback,
                       bool required = false) -> double {
    for (const auto& [k, v] : parameters)
      if (k == key) return v;
    if (required) throw std::invalid_argument("scenario parameter missing: " + key);
    return fallback;
  };
  Scenario s;
  if (name == "three_point") {
    s = three_point(get("r1", 1.0), get("r2", 1.0), get("alpha", 0.5, true),
                    get("delta", 0.25, true), get("cutoff_r", 1.5, true));
  } else if (name == "four_point") {
    s = four_point(get("eps", 0.25, true), get("alpha", 1.5, true), get("beta2", 1.0));
  } else if (name == "lattice_pattern") {
    const int n = static_cast<int>(get("n", 10.0));
    const bool truncated = get("truncated", 0.0) != 0.0;
    s = lattice_pattern(n,
                        truncated ? LatticeKernelVariant::kef_truncated
                                  : LatticeKernelVariant::kef_global,
                        seed);
  } else if (name == "mobility_experiment") {
    const bool vf = get("volume_filling", 0.0) != 0.0;
    s = mobility_experiment(vf ? MobilityVariant::volume_filling : MobilityVariant::linear,
                            get("p", 2.0), seed);
  } else {
    throw std::invalid_argument("unknown scenario: " + name);
  }
  s.seed = seed;
  if (double t = get("t_end", -1.0); t > 0.0) s.params.t_end = t;
  if (double t = get("dt_max", -1.0); t > 0.0) s.params.dt_max = t;
  return s;
}

}  // namespace graphflow
