#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

#include "kplab/analysis.hpp"
#include "kplab/grid.hpp"
#include "kplab/spectral.hpp"

namespace kplab::testing {

using spectral::Grid;
using spectral::RealField;
using spectral::SpectralField;

inline RealField random_field(const Grid& g, unsigned seed, bool y_dependent = true) {
  std::mt19937_64 rng(seed);
  return analysis::random_band_limited_field(g, rng, y_dependent);
}

// Unconstrained random samples, with a nonzero mean.
inline RealField noise_field(const Grid& g, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  RealField u(g);
  for (double& v : u.values) v = n(rng) + 0.3;
  return u;
}

inline double max_abs_diff(const RealField& a, const RealField& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.values.size(); ++k) {
    m = std::max(m, std::abs(a.values[k] - b.values[k]));
  }
  return m;
}

inline double max_abs_diff(const SpectralField& a, const SpectralField& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.coeffs.size(); ++k) {
    m = std::max(m, std::abs(a.coeffs[k] - b.coeffs[k]));
  }
  return m;
}

inline double max_abs(const RealField& a) {
  double m = 0.0;
  for (double v : a.values) m = std::max(m, std::abs(v));
  return m;
}

inline double max_abs(const SpectralField& a) {
  double m = 0.0;
  for (const auto& c : a.coeffs) m = std::max(m, std::abs(c));
  return m;
}

// Composite Simpson rule on [a, b] with n (even) panels.
template <class F>
double simpson(F&& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

}  // namespace kplab::testing
