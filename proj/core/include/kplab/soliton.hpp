#pragma once

#include <optional>
#include <vector>

#include "kplab/grid.hpp"
#include "kplab/solver.hpp"

namespace kplab::stability {

using spectral::FrequencyPair;
using spectral::Grid;
using spectral::RealField;
using spectral::SpectralField;
using solver::DiagnosticsRecord;
using solver::SolverConfig;

struct SolitonParams {
  double c = 1.0;   // speed, > 0
  double x0 = 0.0;  // center
};

/// Q_c(x) = 3c cosh(sqrt(c) x / 2)^{-2}, evaluated without overflow.
double soliton_value(double c, double x);

/// The y-independent line soliton Q_c(x - x0) on `g`. Throws DomainTooSmall
/// unless Q_c at both box edges is below 1e-12 * 3c.
RealField soliton_profile(const SolitonParams& p, const Grid& g);

struct OrbitalDistance {
  double distance = 0.0;
  /// Translation a for which u is closest to Q_c(x - a), in [-L_x/2, L_x/2).
  double best_shift = 0.0;
};

/// inf_a || u - Q_c(. - a) ||_E for fields on one grid. Caches the
/// soliton's coefficients, so a single meter serves a whole run.
///
/// The search scans all nx grid shifts through one inverse FFT of the
/// weighted cross-correlation, then refines the best cell by golden-section
/// search (|da| < 1e-6 dx) and a final Newton polish on the correlation.
class OrbitMeter {
 public:
  OrbitMeter(const Grid& g, double c);

  OrbitalDistance operator()(const SpectralField& u) const;
  OrbitalDistance operator()(const RealField& u) const;

  double speed() const noexcept { return c_; }

 private:
  Grid grid_;
  double c_;
  SpectralField soliton_hat_;
};

OrbitalDistance orbital_distance(const RealField& u, double c);

/// cos(xi x + q y) normalized to unit energy norm. The mode must lie on the
/// grid's lattice and have xi != 0.
RealField transverse_perturbation(const Grid& g, FrequencyPair mode);

struct StabilityRunConfig {
  double c = 1.0;
  /// Perturbation size in the energy norm; 0 <= delta < 1.
  double delta = 1e-2;
  FrequencyPair perturbation_mode;
  double t_end = 20.0;
  SolverConfig solver;  // dt, dealias, record_every; frame speed is forced to c
  Grid grid{256, 16, 64.0, 1.0};
};

struct StabilityRun {
  std::vector<DiagnosticsRecord> records;  // orbital_distance always set
  bool blew_up = false;
  std::optional<double> blowup_time;

  double sup_distance() const;
  /// First recorded time at which the distance exceeds `threshold`.
  std::optional<double> first_exceedance(double threshold) const;
};

/// Evolves Q_c + delta * p in the frame moving at speed c. A blow-up ends
/// the run and marks it, keeping the records collected so far.
StabilityRun run_stability_experiment(const StabilityRunConfig& cfg);

}  // namespace kplab::stability
