#ifndef GRAPHFLOW_MOBILITY_HPP
#define GRAPHFLOW_MOBILITY_HPP

#include <cmath>
#include <limits>
#include <stdexcept>

namespace graphflow {

// Two-argument mobility family m(r, s) = r^theta1 (1 - s)^theta2 with
// theta1, theta2 in [0, 1]. The conventions:
//   * 0^0 = 1, so either exponent may be switched off cleanly;
//   * theta2 > 0 caps the density at S = 1 (volume filling), otherwise
//     S = infinity;
//   * theta1 > 0 makes the mobility upwind-admissible (m(0, s) = 0), which
//     is what keeps empty vertices from emitting mass. theta1 = 0 is
//     representable but rejected by the integrator.
struct Mobility {
  double theta1 = 1.0;
  double theta2 = 0.0;

  static Mobility linear() { return Mobility{1.0, 0.0}; }
  static Mobility volume_filling() { return Mobility{1.0, 1.0}; }
  static Mobility power(double t1, double t2) { return Mobility{t1, t2}; }

  void validate() const {
    if (!(theta1 >= 0.0 && theta1 <= 1.0 && theta2 >= 0.0 && theta2 <= 1.0))
      throw std::invalid_argument("mobility exponents must lie in [0,1]");
  }

  bool upwind_admissible() const { return theta1 > 0.0; }

  double threshold() const {
    return theta2 > 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  }

  // r is the density at the tail vertex, s at the head. Arguments are
  // clamped into the admissible box so that round-off just below 0 or just
  // above the cap cannot produce NaNs.
  double operator()(double r, double s) const {
    if (r < 0.0) r = 0.0;
    double head = 1.0 - s;
    if (head < 0.0) head = 0.0;
    const double f1 = theta1 == 0.0 ? 1.0 : (theta1 == 1.0 ? r : std::pow(r, theta1));
    if (theta2 == 0.0) return f1;
    const double f2 = theta2 == 1.0 ? head : std::pow(head, theta2);
    return f1 * f2;
  }
};

}  // namespace graphflow

#endif
