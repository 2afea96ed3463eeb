#pragma once

#include <complex>
#include <span>
#include <vector>

#include "kplab/fft.hpp"
#include "kplab/grid.hpp"

namespace kplab::spectral {

/// Relative tolerance used by the Hermitian-symmetry and zero-x-mean checks.
inline constexpr double kContractTolerance = 1e-10;

/// Forward/inverse transforms with the measure-weighted normalization
///   u^(xi, q) = sum_{x, y} u(x, y) e^{-i(xi x + q y)} dx dy,
///   u(x, y)   = (1 / area) sum_{xi, q} u^(xi, q) e^{i(xi x + q y)}.
/// Owns its FFT plans and scratch; reuse one instance per run.
class Transform {
 public:
  explicit Transform(const Grid& grid);

  const Grid& grid() const noexcept { return grid_; }

  SpectralField forward(const RealField& u) const;
  /// Throws SymmetryViolation unless the coefficients are Hermitian.
  RealField inverse(const SpectralField& f) const;

  /// Raw variants for hot loops; sizes must equal grid().size().
  void forward(std::span<const double> values,
               std::span<std::complex<double>> coeffs) const;
  /// Discards the imaginary residue without checking symmetry.
  void inverse(std::span<const std::complex<double>> coeffs,
               std::span<double> values) const;

 private:
  Grid grid_;
  Fft fft_;
  std::vector<double> sign_;  // (-1)^kx, from centering x on 0
  mutable std::vector<std::complex<double>> work_;
};

SpectralField forward_transform(const RealField& u);
RealField inverse_transform(const SpectralField& f);

/// Largest |u^(-zeta) - conj(u^(zeta))| relative to max |u^|.
double hermitian_defect(const SpectralField& f);

/// omega(xi, q) = xi^3 - epsilon q^2 / xi, with omega := 0 on xi = 0.
/// epsilon = -1 (the default) is KP-I: xi^3 + q^2 / xi.
double dispersion_symbol(FrequencyPair zeta, int epsilon_sign = -1);

/// Japanese bracket <a> = sqrt(1 + a^2).
double bracket(double a);

/// Energy-space weight p(xi, q) = << xi >^{-1} q / xi >. Throws DomainError
/// for xi = 0.
double weight_p(FrequencyPair zeta);

/// |<xi> p(xi, q)|^2 = 1 + xi^2 + q^2 / xi^2 for xi != 0. On xi = 0 only the
/// q = 0 mode is admissible and gets weight 1.
double energy_weight(FrequencyPair zeta);

// Zero-x-mean constraint: u^(0, q) = 0 for every q != 0.
bool satisfies_zero_x_mean(const SpectralField& f,
                           double rel_tol = kContractTolerance);
void require_zero_x_mean(const SpectralField& f, const char* who);
void enforce_zero_x_mean(SpectralField& f);
void zero_nyquist(SpectralField& f);

/// Multiplies by e^{i t omega}; requires the zero-x-mean constraint.
SpectralField apply_linear_group(const SpectralField& f, double t,
                                 int epsilon_sign = -1);

SpectralField x_derivative(const SpectralField& f);
SpectralField y_derivative(const SpectralField& f);
/// Multiplication by 1 / (i xi). Requires u^(0, q) = 0 for all q, including
/// q = 0.
SpectralField x_antiderivative(const SpectralField& f);

/// Translation u(x) -> u(x - a) by phase multiplication e^{-i xi a}.
SpectralField shift_x(const SpectralField& f, double a);

// Norms and conserved functionals. Quadratic terms use Parseval on the
// Nyquist-free modes, consistent with the derivative operators above.
double l2_norm(const SpectralField& f);
double l2_norm(const RealField& u);
double energy_norm(const SpectralField& f);
double energy_norm(const RealField& u);

/// M(u) = int u^2.
double mass(const RealField& u);
/// E(u) = int (u_x)^2 + (d_x^{-1} u_y)^2 - u^3 / 3.
double energy(const RealField& u);
/// E_c(u) = E(u) + c M(u).
double hamiltonian_c(const RealField& u, double c);
/// Supremum norm of the samples.
double linf_norm(const RealField& u);

/// Pointwise sample of a function on the grid.
template <class F>
RealField sample(const Grid& g, F&& f) {
  RealField u(g);
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) u.at(i, j) = f(g.x(i), g.y(j));
  }
  return u;
}

}  // namespace kplab::spectral
