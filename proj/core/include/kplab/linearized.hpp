#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "kplab/grid.hpp"
#include "kplab/linalg.hpp"

namespace kplab::stability {

/// B_c^k(v, v) = ||v_x||^2 + k^2 ||d_x^{-1} v||^2 + c ||v||^2 - int Q_c v^2
/// for a single y-Fourier slice v sampled at x_i = -L/2 + i L/n on a
/// periodic line of length L. v must have zero mean when k != 0.
double hessian_form(std::span<const double> v, double length, double c, int k);

/// Same, for a y-independent field on a 2-D grid (its first row is used).
double hessian_form(const spectral::RealField& v, double c, int k);

/// ||v||_{H^1}^2 + k^2 ||d_x^{-1} v||^2, the norm B_c^k is compared with.
double hessian_reference_norm(std::span<const double> v, double length, int k);

/// Largest kappa with B_c^k(v) >= kappa * reference_norm(v) over zero-mean
/// v spanned by the first `modes` Fourier pairs on [-L/2, L/2), found as the
/// smallest generalized eigenvalue of the discretized pencil.
double coercivity_constant(double c, int k, double length = 80.0, int modes = 128);

/// Dense fourth-order finite-difference discretization of
///   L_c = d_x^4 - c d_x^2 + d_x Q_c d_x + 1
/// on the periodic grid x_i = -half_width + i (2 half_width / n). The
/// potential term is assembled as -D^T diag(Q_c) D, so the matrix is
/// symmetric. `zero_potential` drops Q_c (test hook).
/// Requires n >= 256 and half_width >= 20 / sqrt(c) (unless zero_potential).
linalg::Matrix linearized_operator_matrix(double c, int n, double half_width,
                                          bool zero_potential = false);

inline constexpr int kDefaultOperatorPoints = 1024;
inline constexpr double kDefaultHalfWidth = 40.0;

struct SpectrumResult {
  double c = 0.0;
  /// Richardson-extrapolated smallest eigenvalue.
  double min_eigenvalue = 0.0;
  /// |lambda_2n - lambda_n| / 15.
  double error_estimate = 0.0;
  /// Extrapolated eigenvalues strictly below the essential spectrum floor 1.
  std::vector<double> eigenvalues_below_one;
  int grid_n = 0;
  double domain_half_width = 0.0;
};

/// Smallest eigenvalues of L_c at n and 2n points, combined by fourth-order
/// Richardson extrapolation. Throws ConvergenceFailure when the two
/// resolutions disagree by more than 1e-3.
SpectrumResult min_eigenvalue(double c, int n = kDefaultOperatorPoints,
                              double half_width = kDefaultHalfWidth);

struct CriticalSpeed {
  double speed = 0.0;
  double lower = 0.0;  // final bracket
  double upper = 0.0;
  std::vector<SpectrumResult> evaluations;
};

/// Bisection on the sign of min_eigenvalue(c) over [c_min, c_max] for
/// `steps` halvings. Throws ConvergenceFailure without a sign change.
CriticalSpeed critical_speed_scan(double c_min, double c_max, int steps = 12,
                                  int n = kDefaultOperatorPoints,
                                  double half_width = kDefaultHalfWidth);

/// The relation c^2 = 16 / (3 nu^2) (1 - lambda_0), solved either way.
double predicted_min_eigenvalue(double c, double nu2 = 1.0);
double speed_for_eigenvalue(double lambda0, double nu2 = 1.0);

/// mu^3 + 2 mu - 3 mu^2; g_mu has the right growth only at its roots.
double characteristic_polynomial(double mu);

/// g_mu(x) = e^{mu x} (mu^3 + 2 mu - 3 mu^2 tanh x) and its derivatives
/// up to order 4 (analytic, via Leibniz' rule).
struct EigenfunctionJet {
  double g = 0.0, d1 = 0.0, d2 = 0.0, d3 = 0.0, d4 = 0.0;
};
EigenfunctionJet exact_eigenfunction(double mu, double x);

/// max over x in [-10, 10] of |g'''' - 4 (1 - 3 sech^2 x) g'' + 3 nu^2 g|.
double verify_exact_eigenfunction(double mu, double nu2);

/// spectrum.csv: c,min_eigenvalue,error_estimate,grid_n
void write_spectrum_csv(std::ostream& out, const std::vector<SpectrumResult>& rows);

}  // namespace kplab::stability
