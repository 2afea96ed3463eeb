#pragma once

#include <cstddef>
#include <vector>

namespace kplab::linalg {

/// Dense square matrix, column-major. Only used for symmetric operators.
class Matrix {
 public:
  explicit Matrix(int n) : n_(n), data_(static_cast<std::size_t>(n) * n, 0.0) {}

  int size() const noexcept { return n_; }
  double& operator()(int i, int j) { return data_[i + static_cast<std::size_t>(n_) * j]; }
  double operator()(int i, int j) const {
    return data_[i + static_cast<std::size_t>(n_) * j];
  }
  const std::vector<double>& data() const noexcept { return data_; }

  /// max |A - A^T|
  double asymmetry() const;

 private:
  int n_;
  std::vector<double> data_;
};

struct EigenPairs {
  std::vector<double> values;   // ascending
  std::vector<double> vectors;  // n x values.size(), column-major; empty unless requested
};

/// The `count` smallest eigenvalues (all when count <= 0 or >= n) of a
/// symmetric matrix, via LAPACK dsyevr on the lower triangle.
EigenPairs symmetric_eigen(const Matrix& a, int count, bool want_vectors = false);

}  // namespace kplab::linalg
