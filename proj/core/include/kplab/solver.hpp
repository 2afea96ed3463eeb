#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "kplab/grid.hpp"
#include "kplab/spectral.hpp"

namespace kplab::solver {

using spectral::Grid;
using spectral::RealField;
using spectral::SpectralField;

/// linf above this (or any non-finite value) aborts a run.
inline constexpr double kBlowupThreshold = 1e6;

/// Number of contour points used to evaluate the ETDRK4 phi-functions.
inline constexpr int kContourPoints = 32;

struct SolverConfig {
  double dt = 1e-3;
  double t_end = 1.0;
  bool dealias = true;
  /// Speed c of the co-moving frame; 0 is the lab frame.
  double moving_frame_speed = 0.0;
  int record_every = 1;
  /// -1 selects KP-I. +1 only flips the sign of the d_x^{-1} d_y^2 term.
  int epsilon_sign = -1;
  /// Test hook: false drops the quadratic term entirely.
  bool nonlinear = true;

  /// Throws InvalidArgument on non-finite/non-positive dt or t_end, a t_end
  /// that is not an integer number of steps, record_every < 1 or a bad sign.
  void validate() const;
  std::int64_t steps() const;
};

struct DiagnosticsRecord {
  double t = 0.0;
  double mass = 0.0;
  double energy = 0.0;
  double hamiltonian_c = 0.0;
  double energy_norm = 0.0;
  double linf = 0.0;
  std::optional<double> orbital_distance;
};

/// Spectral coefficients of -d_x(u^2) / 2. With `dealias`, modes with
/// |kx| > nx/3 or |ky| > ny/3 are zeroed before and after squaring.
SpectralField nonlinear_term(const SpectralField& u, bool dealias = true);

/// Fourth-order exponential time differencing (Cox-Matthews ETDRK4) for
///   u_t = L u + N(u),  L = i (omega + c xi),  N(u) = -(u^2)_x / 2,
/// with the linear part propagated exactly. Holds the per-mode
/// coefficients and transform workspace for one (grid, config) pair.
class Integrator {
 public:
  Integrator(const Grid& grid, const SolverConfig& cfg);

  const Grid& grid() const noexcept { return grid_; }
  const SolverConfig& config() const noexcept { return cfg_; }

  /// Advances u by one dt in place. `t_start` is only used to stamp a
  /// BlowupDetected error.
  void advance(SpectralField& u, double t_start = 0.0);

 private:
  void nonlinear(const std::vector<std::complex<double>>& v,
                 std::vector<std::complex<double>>& out);

  Grid grid_;
  SolverConfig cfg_;
  spectral::Transform transform_;
  std::vector<double> mask_;      // dealiasing and Nyquist mask
  std::vector<double> half_xi_;   // xi / 2
  std::vector<std::complex<double>> e_, e2_, q_, f1_, f2_, f3_;
  std::vector<std::complex<double>> nv_, na_, nb_, nc_, a_, b_, c_;
  std::vector<double> physical_;
};

/// One step from scratch (builds a fresh Integrator).
SpectralField step(const SpectralField& u, const SolverConfig& cfg);

/// Optional per-record observer, e.g. an orbital-distance probe.
using Probe = std::function<std::optional<double>(const SpectralField&)>;

struct EvolveResult {
  RealField final_field;
  double t_final = 0.0;
  std::vector<DiagnosticsRecord> records;
};

/// Integrates from t = 0 to cfg.t_end, recording diagnostics at every
/// record_every-th step (always including the first and last states).
EvolveResult evolve(const RealField& u0, const SolverConfig& cfg, const Probe& probe = {});

/// Diagnostics of a single snapshot, with E_c taken at speed c.
DiagnosticsRecord diagnose(const RealField& u, double t, double c);

/// L^2 norm of -c u_x + u_xxx - d_x^{-1} u_yy + u u_x.
double stationarity_residual(const RealField& u, double c);

/// u_lam(x, y) = lam^{-1} u(lam^{-1/2} x, lam^{-1} y) on the grid with
/// L_x * lam^{1/2} and lambda_y * lam. Requires lam = 4^k.
RealField rescale(const RealField& u, double lam);

/// ||u_lam||_E / (lam^{-1/4} ||u||_E); at most 1 for lam >= 1.
double scaling_norm_ratio(const RealField& u, double lam);

/// Diagnostics CSV: t,mass,energy,hamiltonian_c,energy_norm,linf,orbital_distance
void write_diagnostics_csv(std::ostream& out, const std::vector<DiagnosticsRecord>& records);

}  // namespace kplab::solver
