#include "graphflow/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace graphflow {

KernelSpec KernelSpec::tent(double c1, double c2, Norm norm) {
  KernelSpec k;
  k.form = Form::tent;
  k.c1 = c1;
  k.c2 = c2;
  k.norm = norm;
  return k;
}

KernelSpec KernelSpec::log_quad(double a, double b, Norm norm) {
  KernelSpec k;
  k.form = Form::log_quad;
  k.a = a;
  k.b = b;
  k.norm = norm;
  return k;
}

KernelSpec KernelSpec::trunc_log_quad(double a, double b, double s, Norm norm) {
  if (!(s > 0.0)) throw std::invalid_argument("trunc_log_quad: sensing radius must be positive");
  KernelSpec k;
  k.form = Form::trunc_log_quad;
  k.a = a;
  k.b = b;
  k.s = s;
  k.norm = norm;
  return k;
}

KernelSpec KernelSpec::exp_scaled(double c, Norm norm) {
  KernelSpec k;
  k.form = Form::exp_scaled;
  k.c = c;
  k.norm = norm;
  return k;
}

KernelSpec KernelSpec::abs_scaled(double c, Norm norm) {
  KernelSpec k;
  k.form = Form::abs_scaled;
  k.c = c;
  k.norm = norm;
  return k;
}

KernelSpec KernelSpec::constant(double c) {
  KernelSpec k;
  k.form = Form::constant;
  k.c = c;
  return k;
}

KernelSpec KernelSpec::explicit_matrix(SquareMatrix m) {
  KernelSpec k;
  k.form = Form::matrix;
  k.matrix = std::move(m);
  return k;
}

double KernelSpec::radial(double r) const {
  double v = 0.0;
  switch (form) {
    case Form::tent:
      v = std::max(c1 - c2 * r, 0.0);
      break;
    case Form::log_quad:
      v = -a * std::log(r) + 0.5 * b * r * r;
      break;
    case Form::trunc_log_quad:
      v = r < s ? -a * std::log(r) + b * r * r : -a * std::log(s) + b * s * s;
      break;
    case Form::exp_scaled:
      v = c * (std::exp(r) - 1.0);
      break;
    case Form::abs_scaled:
      v = c * r;
      break;
    case Form::constant:
      v = c;
      break;
    case Form::matrix:
      throw std::logic_error("radial() called on explicit-matrix kernel");
  }
  return sign * v;
}

double KernelSpec::diagonal_value() const {
  if (log_singular()) return 0.0;
  return radial(0.0);
}

KernelSet KernelSet::from_matrices(SquareMatrix k11, SquareMatrix k22, SquareMatrix k12) {
  const std::size_t n = k11.size();
  if (k22.size() != n || k12.size() != n)
    throw std::invalid_argument("KernelSet: matrix size mismatch");
  for (const SquareMatrix* m : {&k11, &k22, &k12})
    if (!m->is_symmetric()) throw std::invalid_argument("KernelSet: kernels must be symmetric");

  KernelSet ks;
  ks.K11 = std::move(k11);
  ks.K22 = std::move(k22);
  ks.K12 = std::move(k12);
  for (auto [K, D] : {std::pair{&ks.K11, &ks.D11}, std::pair{&ks.K22, &ks.D22},
                      std::pair{&ks.K12, &ks.D12}}) {
    *D = SquareMatrix(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) (*D)(i, j) = (*K)(i, i) - (*K)(i, j);
  }
  return ks;
}

namespace {

SquareMatrix evaluate_one(const KernelSpec& spec, const FiniteGraph& g) {
  const std::size_t n = g.size();
  if (spec.form == KernelSpec::Form::matrix) {
    if (spec.matrix.size() != n)
      throw std::invalid_argument("kernel matrix size does not match graph");
    if (!spec.matrix.is_symmetric())
      throw std::invalid_argument("explicit kernel matrix must be symmetric");
    return spec.matrix;
  }
  SquareMatrix K(n);
  for (std::size_t i = 0; i < n; ++i) {
    K(i, i) = spec.diagonal_value();
    for (std::size_t j = i + 1; j < n; ++j) {
      const double r = g.dist(i, j, spec.norm);
      if (spec.log_singular() && r == 0.0)
        throw std::invalid_argument("log-singular kernel over coincident positions");
      const double v = spec.radial(r);
      K(i, j) = v;
      K(j, i) = v;
    }
  }
  return K;
}

}  // namespace

KernelSet evaluate(const KernelSpec& k11, const KernelSpec& k22, const KernelSpec& k12,
                   const FiniteGraph& graph) {
  return KernelSet::from_matrices(evaluate_one(k11, graph), evaluate_one(k22, graph),
                                  evaluate_one(k12, graph));
}

AggregationReport check_aggregation_conditions(const KernelSet& kernels) {
  const std::size_t n = kernels.size();
  AggregationReport rep;

  bool self_neg[2] = {true, true};       // D^(ii) < 0 off-diagonal
  bool product_dominates = true;         // D11 D22 > D12^2 off-diagonal
  bool const_diag[2] = {true, true};     // K^(ii)(x,x) constant
  bool cross_neg = true, cross_pos = true;

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double d11 = kernels.D11(i, j);
      const double d22 = kernels.D22(i, j);
      const double d12 = kernels.D12(i, j);
      if (!(d11 < 0.0)) {
        self_neg[0] = false;
        if (d11 == 0.0) rep.boundary = true;
      }
      if (!(d22 < 0.0)) {
        self_neg[1] = false;
        if (d22 == 0.0) rep.boundary = true;
      }
      const double lhs = d11 * d22, rhs = d12 * d12;
      if (!(lhs > rhs)) {
        product_dominates = false;
        if (lhs == rhs) rep.boundary = true;
      }
      if (!(d12 < 0.0)) cross_neg = false;
      if (!(d12 > 0.0)) cross_pos = false;
    }
  }
  for (int i = 0; i < 2; ++i) {
    const SquareMatrix& K = kernels.K(i, i);
    for (std::size_t v = 1; v < n; ++v)
      if (K(v, v) != K(0, 0)) const_diag[i] = false;
  }

  rep.case_a = self_neg[0] && self_neg[1] && product_dominates;
  rep.case_b[0] = self_neg[0] && const_diag[0];
  rep.case_b[1] = self_neg[1] && const_diag[1];
  rep.case_c = rep.case_b[0] && rep.case_b[1];
  rep.cross_sign = cross_neg ? -1 : (cross_pos ? +1 : 0);
  return rep;
}

SegregationReport check_segregation_condition(const KernelSet& kernels) {
  const std::size_t n = kernels.size();
  SegregationReport rep;

  double lhs = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) lhs = std::min(lhs, kernels.K12(i, i) - kernels.K12(i, j));

  double rhs = 0.0;
  for (int i = 0; i < 2; ++i) {
    const SquareMatrix& K = kernels.K(i, i);
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (double v : K.data()) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    rhs += 0.5 * (hi - lo);
  }

  rep.lhs = lhs;
  rep.rhs = rhs;
  rep.holds = lhs > rhs;
  rep.boundary = lhs == rhs;
  return rep;
}

CompetitorQuadratic competitor_quadratic(const KernelSet& kernels, const SpeciesState& state,
                                         const FiniteGraph& graph, std::size_t v0,
                                         std::size_t w0) {
  if (v0 == w0) throw std::invalid_argument("competitor_quadratic: vertices must differ");
  const std::size_t n = graph.size();

  CompetitorQuadratic q;
  for (int i = 0; i < 2; ++i) {
    for (int k = 0; k < 2; ++k) {
      const SquareMatrix& D = kernels.D(i, k);
      q.A[i][k] = 0.5 * (D(w0, v0) + D(v0, w0));
    }
    double bi = 0.0;
    for (int k = 0; k < 2; ++k) {
      const SquareMatrix& D = kernels.D(i, k);
      for (std::size_t v = 0; v < n; ++v)
        bi += graph.weights[v] * state.u[k][v] * (D(v, v0) - D(v, w0));
    }
    q.b[i] = 0.5 * bi;
    q.lower[i] = -state.u[i][w0] * graph.weights[w0];
    q.upper[i] = state.u[i][v0] * graph.weights[v0];
  }

  const double a11 = q.A[0][0], a22 = q.A[1][1], a12 = q.A[0][1];
  q.negative_definite =
      a11 + a22 < -std::sqrt((a11 - a22) * (a11 - a22) + 4.0 * a12 * a12);
  return q;
}

}  // namespace graphflow
