#ifndef GRAPHFLOW_MATRIX_HPP
#define GRAPHFLOW_MATRIX_HPP

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace graphflow {

// Dense square matrix, row-major. All graphs in this engine are small
// (N <= a few hundred), so dense storage is the right trade-off.
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(std::size_t n, double fill = 0.0) : n_(n), a_(n * n, fill) {}

  std::size_t size() const { return n_; }
  bool empty() const { return n_ == 0; }

  double& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

  const double* row(std::size_t i) const { return a_.data() + i * n_; }
  double* row(std::size_t i) { return a_.data() + i * n_; }

  const std::vector<double>& data() const { return a_; }
  std::vector<double>& data() { return a_; }

  bool is_symmetric() const {
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i + 1; j < n_; ++j)
        if (a_[i * n_ + j] != a_[j * n_ + i]) return false;
    return true;
  }

  bool has_zero_diagonal() const {
    for (std::size_t i = 0; i < n_; ++i)
      if (a_[i * n_ + i] != 0.0) return false;
    return true;
  }

 private:
  std::size_t n_ = 0;
  std::vector<double> a_;
};

}  // namespace graphflow

#endif
