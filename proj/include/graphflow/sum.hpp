#ifndef GRAPHFLOW_SUM_HPP
#define GRAPHFLOW_SUM_HPP

#include <cmath>
#include <cstddef>

namespace graphflow {

// Balanced pairwise sum with a reversal-symmetric tree: even lengths split
// into equal halves, odd lengths keep the middle element outside the two
// halves. The fixed reduction order makes results independent of loop
// scheduling, and reversing the input reproduces the same value bit for
// bit, so index relabelings that mirror a graph do not perturb the state.
inline double pairwise_sum(const double* a, std::size_t n) {
  if (n == 0) return 0.0;
  if (n == 1) return a[0];
  if (n == 2) return a[0] + a[1];
  const std::size_t half = n / 2;
  if (n % 2 == 0) return pairwise_sum(a, half) + pairwise_sum(a + half, half);
  return (pairwise_sum(a, half) + pairwise_sum(a + half + 1, half)) + a[half];
}

// Neumaier-compensated accumulator. Energies and masses are compared
// against tolerances around 1e-10, so plain accumulation over ~4e5 terms
// is too sloppy for the largest lattices.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = s_ + x;
    if (std::abs(s_) >= std::abs(x))
      c_ += (s_ - t) + x;
    else
      c_ += (x - t) + s_;
    s_ = t;
  }
  double value() const { return s_ + c_; }

 private:
  double s_ = 0.0;
  double c_ = 0.0;
};

}  // namespace graphflow

#endif
