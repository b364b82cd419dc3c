#ifndef GRAPHFLOW_KERNELS_HPP
#define GRAPHFLOW_KERNELS_HPP

#include <array>
#include <string>

#include "graphflow/graph.hpp"
#include "graphflow/matrix.hpp"

namespace graphflow {

// Interaction kernel recipe. Radial forms are evaluated on the pairwise
// vertex distances in the selected norm and multiplied by `sign`:
//
//   tent(c1, c2)            (c1 - c2 |x|)_+
//   log_quad(a, b)          -a log|x| + b |x|^2 / 2
//   trunc_log_quad(a, b, s) (-a log|x| + b |x|^2) for |x| < s, constant
//                           -a log(s) + b s^2 beyond the sensing radius s
//   exp_scaled(c)           c (exp(|x|) - 1)
//   abs_scaled(c)           c |x|
//   constant(c)             c
//
// Log-singular forms have no usable value at |x| = 0; their diagonal
// K(x,x) is defined as 0. This shifts the energy by a constant and fixes
// the otherwise ill-defined diagonal difference for those kernels; the
// condition checkers below are only meaningful for kernels with constant
// diagonals, which excludes the log-singular forms anyway.
struct KernelSpec {
  enum class Form { tent, log_quad, trunc_log_quad, exp_scaled, abs_scaled, constant, matrix };

  Form form = Form::constant;
  double c1 = 0.0, c2 = 0.0;       // tent
  double a = 0.0, b = 0.0, s = 0;  // log_quad / trunc_log_quad
  double c = 0.0;                  // exp_scaled / abs_scaled / constant
  double sign = 1.0;               // overall multiplier
  Norm norm = Norm::euclidean;
  SquareMatrix matrix;

  static KernelSpec tent(double c1, double c2, Norm norm = Norm::euclidean);
  static KernelSpec log_quad(double a, double b, Norm norm = Norm::euclidean);
  static KernelSpec trunc_log_quad(double a, double b, double s, Norm norm = Norm::euclidean);
  static KernelSpec exp_scaled(double c, Norm norm = Norm::euclidean);
  static KernelSpec abs_scaled(double c, Norm norm = Norm::euclidean);
  static KernelSpec constant(double c);
  static KernelSpec explicit_matrix(SquareMatrix m);

  bool log_singular() const { return form == Form::log_quad || form == Form::trunc_log_quad; }

  // Value at pair distance r > 0 (diagonal handled separately).
  double radial(double r) const;
  double diagonal_value() const;
};

// The three interaction matrices (the 2-1 kernel equals the 1-2 one by the
// symmetry of the energy) together with the diagonal differences
// D^(ik)(v,w) = K^(ik)(v,v) - K^(ik)(v,w). D < 0 off the diagonal means
// attraction, D > 0 repulsion.
struct KernelSet {
  SquareMatrix K11, K22, K12;
  SquareMatrix D11, D22, D12;

  std::size_t size() const { return K11.size(); }
  const SquareMatrix& K(int i, int k) const { return i == k ? (i == 0 ? K11 : K22) : K12; }
  const SquareMatrix& D(int i, int k) const { return i == k ? (i == 0 ? D11 : D22) : D12; }

  static KernelSet from_matrices(SquareMatrix k11, SquareMatrix k22, SquareMatrix k12);
};

// Evaluates the three kernel specs on the graph's vertex pairs. Throws on
// asymmetric explicit matrices or a log-singular kernel over coincident
// positions.
KernelSet evaluate(const KernelSpec& k11, const KernelSpec& k22, const KernelSpec& k12,
                   const FiniteGraph& graph);

// Aggregation conditions for energy minimizers.
//   case_a:  D^(11), D^(22) < 0 and D^(11) D^(22) > (D^(12))^2 on every
//            off-diagonal pair -- minimizers are a pair of diracs.
//   case_b[i]: D^(ii) < 0 off-diagonal and K^(ii) constant on the diagonal
//            -- species i aggregates.
//   case_c:  both case_b conditions; cross_sign then decides whether the
//            two diracs share a vertex (-1) or must separate (+1).
// Strict inequalities are evaluated strictly; exact ties report false and
// set `boundary`.
struct AggregationReport {
  bool case_a = false;
  std::array<bool, 2> case_b{false, false};
  bool case_c = false;
  int cross_sign = 0;  // -1 all D12 < 0, +1 all D12 > 0, 0 mixed or zero
  bool boundary = false;
};

AggregationReport check_aggregation_conditions(const KernelSet& kernels);

// Sufficient condition for a fully segregated minimizer:
//   min_{v != w} [K12(v,v) - K12(v,w)]
//     > 1/2 * sum_i (max K^(ii) - min K^(ii)).
struct SegregationReport {
  bool holds = false;
  bool boundary = false;
  double lhs = 0.0;
  double rhs = 0.0;
};

SegregationReport check_segregation_condition(const KernelSet& kernels);

// Quadratic model for the two-vertex mass-shift competitor at the pair
// (v0, w0): shifting mass s = (s1, s2) from v0 to w0 changes the energy by
// exactly twice f(s) = b.s + 1/2 s^T A s, subject to the box below, so
// minimizers and curvature signs of f are those of the energy change.
// `negative_definite` tests a11 + a22 < -sqrt((a11 - a22)^2 + 4 a12^2); in
// that regime the optimum sits on a corner of the box, i.e. mass fully
// shifts.
struct CompetitorQuadratic {
  std::array<std::array<double, 2>, 2> A{{{0.0, 0.0}, {0.0, 0.0}}};
  std::array<double, 2> b{0.0, 0.0};
  std::array<double, 2> lower{0.0, 0.0};  // -rho^(i)(w0)
  std::array<double, 2> upper{0.0, 0.0};  // +rho^(i)(v0)
  bool negative_definite = false;

  double value(const std::array<double, 2>& s) const {
    double q = 0.0;
    for (int i = 0; i < 2; ++i) {
      q += b[i] * s[i];
      for (int k = 0; k < 2; ++k) q += 0.5 * A[i][k] * s[i] * s[k];
    }
    return q;
  }
};

CompetitorQuadratic competitor_quadratic(const KernelSet& kernels, const SpeciesState& state,
                                         const FiniteGraph& graph, std::size_t v0,
                                         std::size_t w0);

}  // namespace graphflow

#endif
