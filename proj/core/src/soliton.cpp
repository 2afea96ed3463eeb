#include "kplab/soliton.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "kplab/errors.hpp"
#include "kplab/fft.hpp"
#include "kplab/format.hpp"
#include "kplab/spectral.hpp"

namespace kplab::stability {
namespace {

using cd = std::complex<double>;

constexpr double kDecayTolerance = 1e-12;

bool on_lattice(double value) { return std::abs(value - std::round(value)) < 1e-9; }

}  // namespace

double soliton_value(double c, double x) {
  const double a = 0.5 * std::sqrt(c) * std::abs(x);
  const double e = std::exp(-2.0 * a);
  return 3.0 * c * 4.0 * e / ((1.0 + e) * (1.0 + e));
}

RealField soliton_profile(const SolitonParams& p, const Grid& g) {
  if (!(p.c > 0.0) || !std::isfinite(p.c) || !std::isfinite(p.x0)) {
    throw InvalidArgument("soliton speed must be finite and positive");
  }
  const double half = 0.5 * g.length_x();
  const double edge = std::max(soliton_value(p.c, half - p.x0), soliton_value(p.c, -half - p.x0));
  if (edge >= kDecayTolerance * 3.0 * p.c) {
    throw DomainTooSmall("Q_c at the box edge is " + format_double(edge) +
                         ", increase L_x or recenter");
  }
  return spectral::sample(g, [&](double x, double) { return soliton_value(p.c, x - p.x0); });
}

OrbitMeter::OrbitMeter(const Grid& g, double c)
    : grid_(g),
      c_(c),
      soliton_hat_(spectral::forward_transform(soliton_profile({c, 0.0}, g))) {}

OrbitalDistance OrbitMeter::operator()(const SpectralField& u) const {
  if (!(u.grid == grid_)) throw InvalidArgument("OrbitMeter: grid mismatch");
  spectral::require_zero_x_mean(u, "orbital_distance");
  const int nx = grid_.nx();
  std::vector<cd> cross(nx);
  for (int i = 0; i < nx; ++i) {
    const double w = grid_.is_nyquist(i, 0) ? 1.0 : spectral::energy_weight({grid_.xi(i), 0.0});
    cross[i] = w * u.at(i, 0) * std::conj(soliton_hat_.at(i, 0));
  }

  // Coarse scan: correlation at a_j = -L/2 + j dx for all j in one DFT.
  std::vector<cd> scan(nx);
  for (int i = 0; i < nx; ++i) scan[i] = (grid_.kx(i) % 2 == 0 ? 1.0 : -1.0) * cross[i];
  spectral::Fft(nx, 1).backward(scan);
  int best = 0;
  for (int j = 1; j < nx; ++j) {
    if (scan[j].real() > scan[best].real()) best = j;
  }
  auto correlation = [&](double a) {
    double s = 0.0;
    for (int i = 0; i < nx; ++i) s += (cross[i] * std::polar(1.0, grid_.xi(i) * a)).real();
    return s;
  };
  const double dx = grid_.dx();
  double lo = grid_.x(best) - dx;
  double hi = grid_.x(best) + dx;

  // Golden-section refinement of the maximum.
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double c1 = correlation(x1);
  double c2 = correlation(x2);
  while (hi - lo > 1e-6 * dx) {
    if (c1 < c2) {
      lo = x1;
      x1 = x2;
      c1 = c2;
      x2 = lo + inv_phi * (hi - lo);
      c2 = correlation(x2);
    } else {
      hi = x2;
      x2 = x1;
      c2 = c1;
      x1 = hi - inv_phi * (hi - lo);
      c1 = correlation(x1);
    }
  }
  double a = 0.5 * (lo + hi);

  // The correlation is flat at its peak, so polish with Newton on its
  // derivative, which is resolved to full precision.
  for (int it = 0; it < 3; ++it) {
    double d1 = 0.0;
    double d2 = 0.0;
    for (int i = 0; i < nx; ++i) {
      const double xi = grid_.xi(i);
      const cd term = cross[i] * std::polar(1.0, xi * a);
      d1 += (cd(0.0, xi) * term).real();
      d2 -= xi * xi * term.real();
    }
    if (!(d2 < 0.0)) break;
    const double next = a - d1 / d2;
    if (std::abs(next - a) > dx) break;
    a = next;
  }

  const double length = grid_.length_x();
  a -= length * std::floor((a + 0.5 * length) / length);

  double sum = 0.0;
  for (int j = 0; j < grid_.ny(); ++j) {
    const double q = grid_.q(j);
    for (int i = 0; i < nx; ++i) {
      const double w = grid_.is_nyquist(i, j) ? 1.0 : spectral::energy_weight({grid_.xi(i), q});
      cd diff = u.at(i, j);
      if (grid_.ky(j) == 0) diff -= std::polar(1.0, -grid_.xi(i) * a) * soliton_hat_.at(i, j);
      sum += w * std::norm(diff);
    }
  }
  return {std::sqrt(sum / grid_.area()), a};
}

OrbitalDistance OrbitMeter::operator()(const RealField& u) const {
  return (*this)(spectral::forward_transform(u));
}

OrbitalDistance orbital_distance(const RealField& u, double c) {
  return OrbitMeter(u.grid, c)(u);
}

RealField transverse_perturbation(const Grid& g, FrequencyPair mode) {
  if (mode.xi == 0.0) throw InvalidArgument("perturbation mode needs xi != 0");
  if (!on_lattice(mode.xi * g.length_x() / (2.0 * std::numbers::pi)) ||
      !on_lattice(mode.q * g.lambda_y())) {
    throw GridIncompatible("perturbation mode is not on the grid's frequency lattice");
  }
  RealField p = spectral::sample(
      g, [&](double x, double y) { return std::cos(mode.xi * x + mode.q * y); });
  SpectralField ph = spectral::forward_transform(p);
  spectral::enforce_zero_x_mean(ph);
  const double norm = spectral::energy_norm(ph);
  for (double& v : p.values) v /= norm;
  return p;
}

double StabilityRun::sup_distance() const {
  double m = 0.0;
  for (const auto& r : records) m = std::max(m, r.orbital_distance.value_or(0.0));
  return m;
}

std::optional<double> StabilityRun::first_exceedance(double threshold) const {
  for (const auto& r : records) {
    if (r.orbital_distance && *r.orbital_distance > threshold) return r.t;
  }
  return std::nullopt;
}

StabilityRun run_stability_experiment(const StabilityRunConfig& cfg) {
  if (!(cfg.delta >= 0.0 && cfg.delta < 1.0)) {
    throw InvalidArgument("delta must lie in [0, 1)");
  }
  SolverConfig scfg = cfg.solver;
  scfg.moving_frame_speed = cfg.c;
  scfg.t_end = cfg.t_end;
  scfg.validate();

  const Grid& g = cfg.grid;
  RealField u0 = soliton_profile({cfg.c, 0.0}, g);
  if (cfg.delta > 0.0) {
    const RealField p = transverse_perturbation(g, cfg.perturbation_mode);
    for (std::size_t n = 0; n < u0.values.size(); ++n) u0.values[n] += cfg.delta * p.values[n];
  }

  const spectral::Transform transform(g);
  SpectralField state = transform.forward(u0);
  spectral::enforce_zero_x_mean(state);
  spectral::zero_nyquist(state);
  const OrbitMeter meter(g, cfg.c);
  solver::Integrator integrator(g, scfg);

  StabilityRun run;
  auto record = [&](double t) {
    RealField snapshot(g);
    transform.inverse(state.coeffs, snapshot.values);
    DiagnosticsRecord r = solver::diagnose(snapshot, t, cfg.c);
    r.orbital_distance = meter(state).distance;
    run.records.push_back(r);
  };

  const std::int64_t steps = scfg.steps();
  record(0.0);
  try {
    for (std::int64_t n = 0; n < steps; ++n) {
      integrator.advance(state, n * scfg.dt);
      const std::int64_t done = n + 1;
      if (done % scfg.record_every == 0 || done == steps) record(done * scfg.dt);
    }
  } catch (const BlowupDetected& e) {
    run.blew_up = true;
    run.blowup_time = e.time();
  }
  return run;
}

}  // namespace kplab::stability
