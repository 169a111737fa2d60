#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace ops {

// Dense square matrix, row-major. Just storage plus bounds-checked factory;
// solvers index it directly.
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(int n, double fill = 0.0)
      : n_(n), a_(static_cast<std::size_t>(n) * n, fill) {
    if (n < 0) throw std::invalid_argument("SquareMatrix: negative size");
  }

  int n() const { return n_; }

  double& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * n_ + j]; }
  double operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * n_ + j]; }

  double* data() { return a_.data(); }
  const double* data() const { return a_.data(); }

  double* row(int i) { return a_.data() + static_cast<std::size_t>(i) * n_; }
  const double* row(int i) const { return a_.data() + static_cast<std::size_t>(i) * n_; }

 private:
  int n_ = 0;
  std::vector<double> a_;
};

// Largest absolute entry-wise difference; sizes must match.
double max_abs_diff(const SquareMatrix& a, const SquareMatrix& b);

}  // namespace ops
