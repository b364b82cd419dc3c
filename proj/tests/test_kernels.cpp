#include <doctest.h>

#include <cmath>

#include "graphflow/dynamics.hpp"
#include "graphflow/kernels.hpp"
#include "graphflow/rng.hpp"

using namespace graphflow;

namespace {

FiniteGraph line3() {
  return build_graph({{-1.0}, {0.0}, {2.0}}, {1.0, 1.0, 1.0}, EtaSpec::complete());
}

SpeciesState random_state(const FiniteGraph& g, RandomStream& rng) {
  SpeciesState s = SpeciesState::zero(g.size());
  for (int i = 0; i < 2; ++i) {
    double mass = 0.0;
    for (std::size_t v = 0; v < g.size(); ++v) {
      s.u[i][v] = rng.next_uniform();
      mass += s.u[i][v] * g.weights[v];
    }
    for (auto& u : s.u[i]) u /= mass;
  }
  return s;
}

}  // namespace

TEST_CASE("evaluate: abs kernel on the skewed two-point graph") {
  const auto g = build_graph({{-1.0}, {2.0}}, {1.0, 1.0}, EtaSpec::complete());
  const auto ks = evaluate(KernelSpec::abs_scaled(1.0), KernelSpec::abs_scaled(1.0),
                           KernelSpec::abs_scaled(1.0), g);
  CHECK(ks.K12(0, 1) == 3.0);
  CHECK(ks.D12(0, 1) == -3.0);  // attractive sign
  CHECK(ks.D12(1, 0) == -3.0);
  CHECK(ks.D11(0, 0) == 0.0);
}

TEST_CASE("evaluate: constant kernels have vanishing diagonal differences") {
  const auto ks = evaluate(KernelSpec::constant(4.0), KernelSpec::constant(-2.0),
                           KernelSpec::constant(0.5), line3());
  for (const auto* D : {&ks.D11, &ks.D22, &ks.D12})
    for (double v : D->data()) CHECK(v == 0.0);
}

TEST_CASE("evaluate: tent support boundary and diagonal") {
  const auto spec = KernelSpec::tent(10.0, 20.0);
  CHECK(spec.radial(0.5) == 0.0);
  CHECK(spec.radial(0.25) == 5.0);
  CHECK(spec.diagonal_value() == 10.0);
}

TEST_CASE("evaluate: exponential kernel sign conventions") {
  const auto g = build_graph({{0.0}, {1.0}}, {1.0, 1.0}, EtaSpec::complete());
  const auto attract = evaluate(KernelSpec::exp_scaled(20.0), KernelSpec::exp_scaled(20.0),
                                KernelSpec::exp_scaled(20.0), g);
  CHECK(attract.D11(0, 1) < 0.0);  // c > 0 gives attraction
  auto literal = KernelSpec::exp_scaled(20.0);
  literal.sign = -1.0;  // the 20(1-exp|x|) variant
  const auto repel = evaluate(literal, literal, literal, g);
  CHECK(repel.D11(0, 1) > 0.0);
}

TEST_CASE("evaluate: log-singular kernel over coincident positions fails") {
  FiniteGraph g;  // assembled by hand; build_graph would reject the duplicates
  g.positions = {{0.0}, {0.0}};
  g.weights = {1.0, 1.0};
  g.eta = SquareMatrix(2, 1.0);
  g.eta(0, 0) = g.eta(1, 1) = 0.0;
  const auto spec = KernelSpec::log_quad(1.0, 0.0);
  CHECK_THROWS_AS(evaluate(spec, spec, spec, g), std::invalid_argument);
}

TEST_CASE("evaluate: truncated log-quad is constant beyond the sensing radius") {
  const auto spec = KernelSpec::trunc_log_quad(1.0, 1.0 / 400.0, 0.2);
  const double plateau = -std::log(0.2) + 0.04 / 400.0;
  CHECK(spec.radial(0.2) == doctest::Approx(plateau).epsilon(1e-15));
  CHECK(spec.radial(5.0) == doctest::Approx(plateau).epsilon(1e-15));
  CHECK(spec.radial(0.1) == doctest::Approx(-std::log(0.1) + 0.01 / 400.0).epsilon(1e-15));
  CHECK(spec.diagonal_value() == 0.0);
}

TEST_CASE("aggregation conditions: dominant self-attraction (case a)") {
  const auto ks = evaluate(KernelSpec::abs_scaled(1.0), KernelSpec::abs_scaled(1.0),
                           KernelSpec::abs_scaled(0.1), line3());
  const auto rep = check_aggregation_conditions(ks);
  CHECK(rep.case_a);
  CHECK(rep.case_b[0]);
  CHECK(rep.case_b[1]);
  CHECK(rep.case_c);
  CHECK(rep.cross_sign == -1);
}

TEST_CASE("aggregation conditions: zero cross-kernel") {
  // attractive self-kernels keep case (a): d^2 > 0 strictly
  const auto ks = evaluate(KernelSpec::abs_scaled(1.0), KernelSpec::abs_scaled(1.0),
                           KernelSpec::constant(0.0), line3());
  const auto rep = check_aggregation_conditions(ks);
  CHECK(rep.case_a);
  CHECK(rep.case_c);
  CHECK(rep.cross_sign == 0);

  // with trivial self-kernels the strict inequalities degenerate to 0 > 0
  const auto zero = evaluate(KernelSpec::constant(0.0), KernelSpec::constant(0.0),
                             KernelSpec::constant(0.0), line3());
  const auto zrep = check_aggregation_conditions(zero);
  CHECK(!zrep.case_a);
  CHECK(zrep.boundary);
}

TEST_CASE("aggregation conditions: equal cross and self strength is a boundary case") {
  const auto ks = evaluate(KernelSpec::abs_scaled(1.0), KernelSpec::abs_scaled(1.0),
                           KernelSpec::abs_scaled(-1.0), line3());
  const auto rep = check_aggregation_conditions(ks);
  CHECK(!rep.case_a);  // D11 D22 == (D12)^2 exactly
  CHECK(rep.boundary);
  CHECK(rep.case_c);
  CHECK(rep.cross_sign == +1);  // repulsive cross => segregated optimum
}

TEST_CASE("segregation condition: constant self-kernels with attractive-gap cross") {
  const auto ks = evaluate(KernelSpec::constant(1.0), KernelSpec::constant(-3.0),
                           KernelSpec::abs_scaled(-1.0), line3());
  const auto rep = check_segregation_condition(ks);
  CHECK(rep.holds);
  CHECK(rep.lhs == doctest::Approx(1.0));  // min pair distance
  CHECK(rep.rhs == 0.0);
}

TEST_CASE("segregation condition: all-zero kernels fail at the boundary") {
  const auto ks = evaluate(KernelSpec::constant(0.0), KernelSpec::constant(0.0),
                           KernelSpec::constant(0.0), line3());
  const auto rep = check_segregation_condition(ks);
  CHECK(!rep.holds);
  CHECK(rep.boundary);
}

TEST_CASE("segregation condition: large self-kernel spread defeats a unit gap") {
  const auto g = build_graph({{0.0}, {5.0}, {10.0}}, {1.0, 1.0, 1.0}, EtaSpec::complete());
  SquareMatrix k12(3, 0.0);
  for (int v = 0; v < 3; ++v) k12(v, v) = 1.0;  // unit diagonal gap
  const auto ks = evaluate(KernelSpec::abs_scaled(1.0), KernelSpec::constant(0.0),
                           KernelSpec::explicit_matrix(k12), g);
  const auto rep = check_segregation_condition(ks);
  CHECK(rep.lhs == doctest::Approx(1.0));
  CHECK(rep.rhs == doctest::Approx(5.0));  // half of the 10-wide spread
  CHECK(!rep.holds);
}

TEST_CASE("competitor: constant kernels give the zero model") {
  const auto g = line3();
  const auto ks = evaluate(KernelSpec::constant(2.0), KernelSpec::constant(2.0),
                           KernelSpec::constant(2.0), g);
  RandomStream rng(5);
  const auto s = random_state(g, rng);
  const auto q = competitor_quadratic(ks, s, g, 0, 1);
  for (int i = 0; i < 2; ++i) {
    CHECK(q.b[i] == 0.0);
    for (int k = 0; k < 2; ++k) CHECK(q.A[i][k] == 0.0);
  }
  CHECK(!q.negative_definite);
  CHECK(q.value({0.0, 0.0}) == 0.0);
}

TEST_CASE("competitor: definiteness test on the closed-form examples") {
  const auto g = build_graph({{0.0}, {1.0}}, {1.0, 1.0}, EtaSpec::complete());
  SpeciesState s;
  s.u[0] = {0.5, 0.5};
  s.u[1] = {0.5, 0.5};

  // D11 = D22 = -1, D12 = 0: A = -I, and -2 < -sqrt(0) holds
  SquareMatrix self(2);
  self(0, 1) = self(1, 0) = 1.0;
  const auto diag = KernelSet::from_matrices(self, self, SquareMatrix(2, 0.0));
  const auto q1 = competitor_quadratic(diag, s, g, 0, 1);
  CHECK(q1.A[0][0] == -1.0);
  CHECK(q1.A[1][1] == -1.0);
  CHECK(q1.A[0][1] == 0.0);
  CHECK(q1.negative_definite);

  // a11 = a22 = -1, a12 = 2: indefinite, -2 < -4 fails
  SquareMatrix cross(2);
  cross(0, 1) = cross(1, 0) = -2.0;
  const auto mixed = KernelSet::from_matrices(self, self, cross);
  const auto q2 = competitor_quadratic(mixed, s, g, 0, 1);
  CHECK(q2.A[0][1] == 2.0);
  CHECK(!q2.negative_definite);
}

TEST_CASE("competitor: box bounds come from the endpoint masses") {
  const auto g = build_graph({{0.0}, {1.0}, {2.0}}, {1.0, 2.0, 1.0}, EtaSpec::complete());
  SpeciesState s;
  s.u[0] = {0.2, 0.3, 0.2};
  s.u[1] = {0.1, 0.25, 0.4};
  const auto ks = evaluate(KernelSpec::abs_scaled(1.0), KernelSpec::abs_scaled(1.0),
                           KernelSpec::abs_scaled(0.2), g);
  const auto q = competitor_quadratic(ks, s, g, 2, 1);
  CHECK(q.upper[0] == doctest::Approx(0.2));
  CHECK(q.lower[0] == doctest::Approx(-0.6));
  CHECK(q.upper[1] == doctest::Approx(0.4));
  CHECK(q.lower[1] == doctest::Approx(-0.5));
}

TEST_CASE("competitor quadratic reproduces the shifted energy (property)") {
  RandomStream rng(77);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_u64() % 4);
    std::vector<std::vector<double>> pos;
    std::vector<double> w;
    for (int v = 0; v < n; ++v) {
      pos.push_back({3.0 * rng.next_uniform(), 3.0 * rng.next_uniform()});
      w.push_back(0.5 + rng.next_uniform());
    }
    const auto g = build_graph(pos, w, EtaSpec::complete());
    const auto ks = evaluate(KernelSpec::abs_scaled(2.0 * rng.next_uniform() - 1.0),
                             KernelSpec::abs_scaled(2.0 * rng.next_uniform() - 1.0),
                             KernelSpec::abs_scaled(2.0 * rng.next_uniform() - 1.0), g);
    const auto s = random_state(g, rng);
    const std::size_t v0 = rng.next_u64() % n;
    std::size_t w0 = rng.next_u64() % n;
    if (w0 == v0) w0 = (w0 + 1) % n;

    const auto q = competitor_quadratic(ks, s, g, v0, w0);
    std::array<double, 2> shift;
    for (int i = 0; i < 2; ++i)
      shift[i] = q.lower[i] + (q.upper[i] - q.lower[i]) * rng.next_uniform();

    SpeciesState shifted = s;
    for (int i = 0; i < 2; ++i) {
      shifted.u[i][v0] -= shift[i] / g.weights[v0];
      shifted.u[i][w0] += shift[i] / g.weights[w0];
    }
    const double de = energy(shifted, ks, g) - energy(s, ks, g);
    // the quadratic model carries the conventional 1/2; the energy change
    // is exactly twice its value
    CHECK(de == doctest::Approx(2.0 * q.value(shift)).epsilon(1e-9));
  }
}

TEST_CASE("case (a) kernels make every pair's competitor matrix negative definite") {
  RandomStream rng(78);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 3 + static_cast<int>(rng.next_u64() % 3);
    std::vector<std::vector<double>> pos;
    for (int v = 0; v < n; ++v) pos.push_back({2.0 * rng.next_uniform(), 2.0 * rng.next_uniform()});
    const auto g = build_graph(pos, std::vector<double>(n, 1.0), EtaSpec::complete());
    // strong attractive self-kernels, weak cross kernel
    const double c = 0.05 + 0.2 * rng.next_uniform();
    const auto ks = evaluate(KernelSpec::abs_scaled(1.0 + rng.next_uniform()),
                             KernelSpec::abs_scaled(1.0 + rng.next_uniform()),
                             KernelSpec::abs_scaled(c), g);
    if (!check_aggregation_conditions(ks).case_a) continue;
    const auto s = random_state(g, rng);
    for (std::size_t a = 0; a < g.size(); ++a)
      for (std::size_t b = 0; b < g.size(); ++b)
        if (a != b) CHECK(competitor_quadratic(ks, s, g, a, b).negative_definite);
  }
}
