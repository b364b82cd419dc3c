#include "graphflow/twopoint.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "graphflow/rng.hpp"

namespace graphflow {

namespace {

double quad_form(const TwoPointProblem& pb, double x, double y) {
  const double X = x - 0.5, Y = y - 0.5;
  return pb.D11 * X * X + pb.D22 * Y * Y + 2.0 * pb.D12 * X * Y;
}

std::array<double, 2> mirror(const std::array<double, 2>& p) {
  return {1.0 - p[0], 1.0 - p[1]};
}

}  // namespace

std::string to_string(TwoPointTag tag) {
  switch (tag) {
    case TwoPointTag::a: return "a";
    case TwoPointTag::a_r_family: return "a_r_family";
    case TwoPointTag::b1: return "b1";
    case TwoPointTag::b2: return "b2";
    case TwoPointTag::c: return "c";
    case TwoPointTag::d: return "d";
  }
  return "?";
}

std::string to_string(Stability s) {
  switch (s) {
    case Stability::asymptotically_stable: return "asymptotically_stable";
    case Stability::stable_not_asymptotic: return "stable_not_asymptotic";
    case Stability::unstable: return "unstable";
  }
  return "?";
}

void TwoPointProblem::validate() const {
  mobility.validate();
  if (!(mobility.theta1 > 0.0))
    throw std::invalid_argument(
        "two-point classification requires a mobility vanishing exactly on empty vertices");
  if (!(p > 1.0)) throw std::invalid_argument("p must lie in (1, inf)");
  for (double b : beta)
    if (!(b > 0.0)) throw std::invalid_argument("beta must be positive");
}

double TwoPointState::distance(const std::array<double, 2>& pt) const {
  if (planar) return 0.0;
  auto dist = [](const std::array<double, 2>& a, const std::array<double, 2>& b) {
    return std::hypot(a[0] - b[0], a[1] - b[1]);
  };
  if (!is_family) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : points) best = std::min(best, dist(p, pt));
    return best;
  }
  // exact projection onto the segment
  const double dd = direction[0] * direction[0] + direction[1] * direction[1];
  double r = 0.0;
  if (dd > 0.0)
    r = ((pt[0] - origin[0]) * direction[0] + (pt[1] - origin[1]) * direction[1]) / dd;
  r = std::clamp(r, r_min, r_max);
  return dist(family_point(r), pt);
}

const TwoPointState* TwoPointClassification::find(TwoPointTag tag) const {
  for (const auto& s : states)
    if (s.tag == tag) return &s;
  return nullptr;
}

FiniteGraph twopoint_graph() {
  return build_graph({{0.0}, {1.0}}, {1.0, 1.0}, EtaSpec::complete());
}

KernelSet twopoint_kernels(double D11, double D22, double D12) {
  auto mk = [](double d) {
    SquareMatrix k(2);
    k(0, 1) = -d;
    k(1, 0) = -d;
    return k;
  };
  return KernelSet::from_matrices(mk(D11), mk(D22), mk(D12));
}

DynamicsParams twopoint_params(const TwoPointProblem& problem) {
  DynamicsParams params;
  params.p = problem.p;
  params.beta = problem.beta;
  params.mobility = problem.mobility;
  return params;
}

SpeciesState twopoint_state(double x, double y) {
  SpeciesState s;
  s.u[0] = {x, 1.0 - x};
  s.u[1] = {y, 1.0 - y};
  return s;
}

namespace {

Stability combine_decoupled(Stability a, Stability b) {
  if (a == Stability::unstable || b == Stability::unstable) return Stability::unstable;
  if (a == Stability::stable_not_asymptotic || b == Stability::stable_not_asymptotic)
    return Stability::stable_not_asymptotic;
  return Stability::asymptotically_stable;
}

TwoPointState make_point_state(const TwoPointProblem& pb, TwoPointTag tag,
                               std::vector<std::array<double, 2>> pts, Stability st) {
  TwoPointState s;
  s.tag = tag;
  s.points = std::move(pts);
  s.stability = st;
  s.energy_rel_a = quad_form(pb, s.points.front()[0], s.points.front()[1]);
  return s;
}

void classify_decoupled(const TwoPointProblem& pb, TwoPointClassification& out) {
  const double d1 = pb.D11, d2 = pb.D22;

  // Per-species 1-d picture: the half-half split is always stationary and
  // attracts iff D^(ii) > 0; aggregation on either vertex is stationary iff
  // D^(ii) <= 0 and attracts iff D^(ii) < 0; D^(ii) = 0 freezes the species
  // entirely.
  const auto center_stab = [](double d) {
    if (d > 0.0) return Stability::asymptotically_stable;
    if (d < 0.0) return Stability::unstable;
    return Stability::stable_not_asymptotic;
  };

  if (d1 == 0.0 && d2 == 0.0) {
    TwoPointState s;
    s.tag = TwoPointTag::a_r_family;
    s.is_family = true;
    s.planar = true;
    s.stability = Stability::stable_not_asymptotic;
    s.points = {{0.5, 0.5}};
    out.states.push_back(std::move(s));
    return;
  }

  if (d1 == 0.0 || d2 == 0.0) {
    // One species frozen: stationary states form lines. The line through
    // the other species' half-half split, and, when that species
    // self-attracts, the two lines where it is aggregated.
    const bool frozen_is_1 = d1 == 0.0;
    const double d_other = frozen_is_1 ? d2 : d1;
    auto line = [&](double other_coord, Stability st) {
      TwoPointState s;
      s.tag = TwoPointTag::a_r_family;
      s.is_family = true;
      s.origin = frozen_is_1 ? std::array<double, 2>{0.5, other_coord}
                             : std::array<double, 2>{other_coord, 0.5};
      s.direction = frozen_is_1 ? std::array<double, 2>{0.5, 0.0}
                                : std::array<double, 2>{0.0, 0.5};
      s.r_min = -1.0;
      s.r_max = 1.0;
      s.stability = st;
      s.points = {s.family_point(0.0)};
      s.energy_rel_a = quad_form(pb, s.points[0][0], s.points[0][1]);
      out.states.push_back(std::move(s));
    };
    line(0.5, combine_decoupled(Stability::stable_not_asymptotic, center_stab(d_other)));
    if (d_other < 0.0) {
      line(1.0, Stability::stable_not_asymptotic);
      line(0.0, Stability::stable_not_asymptotic);
    }
    return;
  }

  const Stability c1 = center_stab(d1), c2 = center_stab(d2);
  out.states.push_back(make_point_state(pb, TwoPointTag::a, {{0.5, 0.5}},
                                        combine_decoupled(c1, c2)));
  if (d1 < 0.0)
    out.states.push_back(make_point_state(
        pb, TwoPointTag::b1, {{1.0, 0.5}, {0.0, 0.5}},
        combine_decoupled(Stability::asymptotically_stable, c2)));
  if (d2 < 0.0)
    out.states.push_back(make_point_state(
        pb, TwoPointTag::b2, {{0.5, 1.0}, {0.5, 0.0}},
        combine_decoupled(c1, Stability::asymptotically_stable)));
  if (d1 < 0.0 && d2 < 0.0) {
    out.states.push_back(make_point_state(pb, TwoPointTag::c, {{1.0, 1.0}, {0.0, 0.0}},
                                          Stability::asymptotically_stable));
    out.states.push_back(make_point_state(pb, TwoPointTag::d, {{1.0, 0.0}, {0.0, 1.0}},
                                          Stability::asymptotically_stable));
  }
}

void classify_coupled(const TwoPointProblem& pb, TwoPointClassification& out) {
  const double D11 = pb.D11, D22 = pb.D22, D12 = pb.D12;
  const double det_lhs = D11 * D22, det_rhs = D12 * D12;
  out.degenerate = det_lhs == det_rhs;
  if (!out.degenerate && std::abs(det_lhs - det_rhs) <= 1e-9 * std::max(1.0, det_rhs))
    out.boundary_flags.push_back("near-degenerate: D11*D22 ~ (D12)^2");

  auto flag_tie = [&](const std::string& what) {
    out.boundary_flags.push_back("boundary case: " + what);
  };

  // Existence per the strict conditions; exact ties excluded and flagged.
  std::array<bool, 2> b_exists{false, false};
  const double dkk[2] = {D22, D11};  // the "other" self-difference for b1, b2
  const double dii[2] = {D11, D22};
  for (int i = 0; i < 2; ++i) {
    if (dkk[i] == 0.0) continue;
    const bool range_ok = std::abs(D12) <= std::abs(dkk[i]);
    const double thr = det_rhs / dkk[i];
    if (range_ok && dii[i] < thr) b_exists[i] = true;
    if (range_ok && dii[i] == thr) flag_tie("D" + std::to_string(i + 1) + std::to_string(i + 1) +
                                            " == (D12)^2 / Dkk");
  }
  const bool c_exists = D11 < -D12 && D22 < -D12;
  if ((D11 == -D12 && D22 <= -D12) || (D22 == -D12 && D11 <= -D12))
    flag_tie("D(ii) == -D12");
  const bool d_exists = D11 < D12 && D22 < D12;
  if ((D11 == D12 && D22 <= D12) || (D22 == D12 && D11 <= D12)) flag_tie("D(ii) == D12");

  if (out.degenerate) {
    // Balanced self- and cross-interactions: a whole segment of stationary
    // states through the uniform one. Repulsive self-interactions make the
    // family an attractor transversally (stable, not asymptotically);
    // attractive ones turn it into a ridge with aggregated minimizers.
    TwoPointState fam;
    fam.tag = TwoPointTag::a_r_family;
    fam.is_family = true;
    fam.origin = {0.5, 0.5};
    fam.direction = {0.5, -0.5 * D12 / D22};
    const double bound = std::min(1.0, std::abs(D22 / D12));
    fam.r_min = -bound;
    fam.r_max = bound;
    fam.stability =
        D11 > 0.0 ? Stability::stable_not_asymptotic : Stability::unstable;
    fam.points = {fam.family_point(0.0)};
    fam.energy_rel_a = 0.0;
    out.states.push_back(std::move(fam));
  }

  const bool a_alone = !out.degenerate && !b_exists[0] && !b_exists[1] && !c_exists && !d_exists;
  if (!out.degenerate)
    out.states.push_back(make_point_state(
        pb, TwoPointTag::a, {{0.5, 0.5}},
        a_alone ? Stability::asymptotically_stable : Stability::unstable));

  for (int i = 0; i < 2; ++i) {
    if (!b_exists[i]) continue;
    const int k = 1 - i;
    const double spread = 0.5 * (1.0 - D12 / dkk[i]);
    // species i fully on one vertex; the other species splits so its
    // velocity vanishes
    std::vector<std::array<double, 2>> pts;
    if (i == 0)
      pts = {{1.0, spread}, {0.0, 1.0 - spread}};
    else
      pts = {{spread, 1.0}, {1.0 - spread, 0.0}};
    const bool asympt = !b_exists[k] && !c_exists && !d_exists;
    out.states.push_back(make_point_state(
        pb, i == 0 ? TwoPointTag::b1 : TwoPointTag::b2, std::move(pts),
        asympt ? Stability::asymptotically_stable : Stability::unstable));
  }

  if (c_exists)
    out.states.push_back(make_point_state(pb, TwoPointTag::c, {{1.0, 1.0}, {0.0, 0.0}},
                                          Stability::asymptotically_stable));
  if (d_exists)
    out.states.push_back(make_point_state(pb, TwoPointTag::d, {{1.0, 0.0}, {0.0, 1.0}},
                                          Stability::asymptotically_stable));
}

}  // namespace

TwoPointClassification classify(const TwoPointProblem& problem) {
  problem.validate();
  TwoPointClassification out;
  out.decoupled = problem.D12 == 0.0;
  if (out.decoupled)
    classify_decoupled(problem, out);
  else
    classify_coupled(problem, out);
  return out;
}

namespace {

bool tag_present(const TwoPointProblem& pb, const TwoPointClassification& cl, TwoPointTag tag) {
  if (tag == TwoPointTag::a)
    return true;  // uniform state is always stationary (family member r=0
                  // in the degenerate case)
  if (cl.find(tag)) return true;
  (void)pb;
  return false;
}

double gap_from_a(const TwoPointProblem& pb, TwoPointTag tag, double r) {
  const double D11 = pb.D11, D22 = pb.D22, D12 = pb.D12;
  switch (tag) {
    case TwoPointTag::a:
      return 0.0;
    case TwoPointTag::a_r_family:
      return 0.25 * r * r * (D11 - D12 * D12 / D22);
    case TwoPointTag::b1:
      return 0.25 * (D11 - D12 * D12 / D22);
    case TwoPointTag::b2:
      return 0.25 * (D22 - D12 * D12 / D11);
    case TwoPointTag::c:
      return 0.25 * (D11 + 2.0 * D12 + D22);
    case TwoPointTag::d:
      return 0.25 * (D11 - 2.0 * D12 + D22);
  }
  return 0.0;
}

}  // namespace

double energy_gap(const TwoPointProblem& problem, TwoPointTag tag1, TwoPointTag tag2,
                  double r) {
  const TwoPointClassification cl = classify(problem);
  for (TwoPointTag t : {tag1, tag2})
    if (!tag_present(problem, cl, t))
      throw std::invalid_argument("energy_gap: state " + to_string(t) +
                                  " is not stationary for this problem");

  const double D11 = problem.D11, D22 = problem.D22, D12 = problem.D12;
  // Direct closed forms where available, composition through the uniform
  // state otherwise.
  if (tag1 == tag2 && tag1 != TwoPointTag::a_r_family) return 0.0;
  if (tag1 == TwoPointTag::c && tag2 == TwoPointTag::d) return -D12;
  if (tag1 == TwoPointTag::d && tag2 == TwoPointTag::c) return D12;
  const auto b_to = [&](int i, TwoPointTag to) {
    const double dkk = i == 0 ? D22 : D11;
    const double sgn = to == TwoPointTag::c ? 1.0 : -1.0;
    const double t = dkk + sgn * D12;
    return t * t / (4.0 * dkk);
  };
  if (tag1 == TwoPointTag::b1 && (tag2 == TwoPointTag::c || tag2 == TwoPointTag::d))
    return b_to(0, tag2);
  if (tag1 == TwoPointTag::b2 && (tag2 == TwoPointTag::c || tag2 == TwoPointTag::d))
    return b_to(1, tag2);
  if (tag2 == TwoPointTag::b1 && (tag1 == TwoPointTag::c || tag1 == TwoPointTag::d))
    return -b_to(0, tag1);
  if (tag2 == TwoPointTag::b2 && (tag1 == TwoPointTag::c || tag1 == TwoPointTag::d))
    return -b_to(1, tag1);
  return gap_from_a(problem, tag2, r) - gap_from_a(problem, tag1, r);
}

std::vector<PortraitRecord> phase_portrait(const TwoPointProblem& problem, int grid_n) {
  if (grid_n < 2) throw std::invalid_argument("phase_portrait: grid_n >= 2");
  problem.validate();
  const FiniteGraph graph = twopoint_graph();
  const KernelSet kernels = twopoint_kernels(problem.D11, problem.D22, problem.D12);
  const DynamicsParams params = twopoint_params(problem);
  const double e_const = -0.25 * (problem.D11 + problem.D22 + 2.0 * problem.D12);

  std::vector<PortraitRecord> records;
  records.reserve(static_cast<std::size_t>(grid_n) * grid_n);
  const double h = 1.0 / (grid_n - 1);
  for (int iy = 0; iy < grid_n; ++iy) {
    for (int ix = 0; ix < grid_n; ++ix) {
      const double x = ix * h, y = iy * h;
      const auto res = rhs(twopoint_state(x, y), graph, kernels, params);
      PortraitRecord rec;
      rec.x = x;
      rec.y = y;
      rec.energy = quad_form(problem, x, y) + e_const;
      rec.dudt1 = res.dudt[0][0];
      rec.dudt2 = res.dudt[1][0];
      records.push_back(rec);
    }
  }
  return records;
}

namespace {

std::array<double, 2> perturbed_point(const std::array<double, 2>& base, double magnitude,
                                      double angle) {
  std::array<double, 2> d{std::cos(angle) * magnitude, std::sin(angle) * magnitude};
  std::array<double, 2> p;
  for (int c = 0; c < 2; ++c) {
    double step = d[c];
    if (base[c] >= 1.0) step = -std::abs(step);   // reflect inward at the box
    if (base[c] <= 0.0) step = std::abs(step);
    p[c] = std::clamp(base[c] + step, 0.0, 1.0);
  }
  return p;
}

}  // namespace

void verify_classification(const TwoPointProblem& problem,
                           const TwoPointClassification& classification,
                           const VerifyOptions& options) {
  const FiniteGraph graph = twopoint_graph();
  const KernelSet kernels = twopoint_kernels(problem.D11, problem.D22, problem.D12);
  DynamicsParams params = twopoint_params(problem);
  params.stationarity_tol = 1e-14;
  params.t_end = options.t_end;

  const auto fail = [](const TwoPointState& s, const std::string& why) {
    throw std::runtime_error("two-point stability verification failed for state " +
                             to_string(s.tag) + ": " + why);
  };

  RandomStream rng(options.seed);
  for (const auto& s : classification.states) {
    // Stationarity of every listed state (families sampled along the range).
    std::vector<std::array<double, 2>> samples = s.points;
    if (s.is_family && !s.planar)
      for (int k = 0; k <= 10; ++k)
        samples.push_back(s.family_point(s.r_min + (s.r_max - s.r_min) * k / 10.0));
    for (const auto& pt : samples) {
      const auto rep =
          is_stationary(twopoint_state(pt[0], pt[1]), kernels, params, graph, 1e-12);
      if (!rep.stationary)
        fail(s, "listed state is not stationary (violation " +
                    std::to_string(rep.max_violation) + ")");
    }

    if (s.planar) continue;  // nothing moves anywhere; labels are trivial

    bool any_escaped = false;
    bool any_stayed_out = false;
    for (int k = 0; k < options.perturbations; ++k) {
      std::array<double, 2> base;
      if (s.is_family) {
        const double r = s.r_min + (s.r_max - s.r_min) * rng.next_uniform();
        base = s.family_point(r);
      } else {
        base = s.points[static_cast<std::size_t>(rng.next_u64() % s.points.size())];
      }
      const auto start = perturbed_point(base, options.magnitude, 2.0 * M_PI * rng.next_uniform());

      double max_dist = 0.0;
      IntegrateOptions iopts;
      iopts.snapshot_stride = 0;
      iopts.observer = [&](double, const SpeciesState& st,
                           const std::array<std::vector<double>, 2>&) {
        const std::array<double, 2> pt{st.u[0][0], st.u[1][0]};
        max_dist = std::max(max_dist, std::hypot(pt[0] - base[0], pt[1] - base[1]));
        return max_dist <= options.escape_distance;  // stop once clearly escaped
      };
      const auto res =
          integrate(twopoint_state(start[0], start[1]), graph, kernels, params, iopts);
      if (aborted(res.reason)) fail(s, "integration aborted: " + res.message);

      const SpeciesState& fin = res.trajectory.states.back();
      const std::array<double, 2> endpt{fin.u[0][0], fin.u[1][0]};
      const double end_dist = std::hypot(endpt[0] - base[0], endpt[1] - base[1]);
      max_dist = std::max(max_dist, end_dist);

      switch (s.stability) {
        case Stability::asymptotically_stable:
          if (end_dist > options.return_tol)
            fail(s, "perturbation did not return (final distance " + std::to_string(end_dist) +
                        ")");
          break;
        case Stability::unstable:
          if (max_dist > options.escape_distance) any_escaped = true;
          break;
        case Stability::stable_not_asymptotic:
          if (max_dist > options.escape_distance)
            fail(s, "perturbation escaped a stable family (distance " +
                        std::to_string(max_dist) + ")");
          if (s.distance(endpt) > options.return_tol)
            fail(s, "perturbation left the neighborhood of the family");
          if (end_dist > options.return_tol) any_stayed_out = true;
          break;
      }
    }
    if (s.stability == Stability::unstable && !any_escaped)
      fail(s, "no perturbation escaped an unstable state");
    if (s.stability == Stability::stable_not_asymptotic && !any_stayed_out)
      fail(s, "all perturbations returned; state looks asymptotically stable");
  }
}

}  // namespace graphflow
