#include "kplab/linalg.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <string>

#include "kplab/errors.hpp"

namespace kplab::linalg {

double Matrix::asymmetry() const {
  double worst = 0.0;
  for (int j = 0; j < n_; ++j) {
    for (int i = j + 1; i < n_; ++i) {
      worst = std::max(worst, std::abs((*this)(i, j) - (*this)(j, i)));
    }
  }
  return worst;
}

EigenPairs symmetric_eigen(const Matrix& a, int count, bool want_vectors) {
  const lapack_int n = a.size();
  if (n <= 0) throw InvalidArgument("symmetric_eigen: empty matrix");
  const lapack_int m_wanted = (count <= 0 || count >= n) ? n : count;
  std::vector<double> work(a.data());  // dsyevr destroys its input
  std::vector<double> w(n);
  std::vector<double> z(want_vectors ? static_cast<std::size_t>(n) * m_wanted : 1);
  std::vector<lapack_int> support(2 * static_cast<std::size_t>(m_wanted));
  lapack_int found = 0;
  const char range = (m_wanted == n) ? 'A' : 'I';
  const lapack_int info = LAPACKE_dsyevr(
      LAPACK_COL_MAJOR, want_vectors ? 'V' : 'N', range, 'L', n, work.data(), n, 0.0, 0.0, 1,
      m_wanted, 0.0, &found, w.data(), z.data(), want_vectors ? n : 1, support.data());
  if (info != 0) {
    throw ConvergenceFailure("LAPACK dsyevr failed with info = " + std::to_string(info));
  }
  EigenPairs out;
  out.values.assign(w.begin(), w.begin() + found);
  if (want_vectors) {
    z.resize(static_cast<std::size_t>(n) * found);
    out.vectors = std::move(z);
  }
  return out;
}

}  // namespace kplab::linalg
