#include "kplab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <string>

#include "kplab/errors.hpp"
#include "kplab/format.hpp"
#include "kplab/littlewood_paley.hpp"

namespace kplab::solver {
namespace {

using cd = std::complex<double>;

std::vector<double> make_mask(const Grid& g, bool dealias) {
  std::vector<double> mask(g.size(), 0.0);
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      if (g.is_nyquist(i, j)) continue;
      if (dealias && (3 * std::abs(g.kx(i)) > g.nx() || 3 * std::abs(g.ky(j)) > g.ny())) {
        continue;
      }
      mask[g.index(i, j)] = 1.0;
    }
  }
  return mask;
}

void blowup_check(const spectral::Transform& transform, const std::vector<cd>& v,
                  std::vector<double>& physical, double t) {
  // |u(x)| <= (1 / area) sum |u^|; only invert when the bound is inconclusive.
  double bound = 0.0;
  for (const cd& z : v) bound += std::abs(z);
  bound /= transform.grid().area();
  if (!std::isfinite(bound)) {
    throw BlowupDetected("non-finite solution at t = " + format_double(t), t);
  }
  if (bound <= kBlowupThreshold) return;
  transform.inverse(v, physical);
  double linf = 0.0;
  for (double x : physical) linf = std::max(linf, std::abs(x));
  if (linf > kBlowupThreshold) {
    throw BlowupDetected("linf = " + format_double(linf) + " at t = " + format_double(t), t);
  }
}

}  // namespace

void SolverConfig::validate() const {
  if (!std::isfinite(dt) || dt <= 0.0) throw InvalidArgument("dt must be finite and positive");
  if (!std::isfinite(t_end) || t_end <= 0.0) {
    throw InvalidArgument("t_end must be finite and positive");
  }
  if (!std::isfinite(moving_frame_speed)) {
    throw InvalidArgument("moving_frame_speed must be finite");
  }
  if (record_every < 1) throw InvalidArgument("record_every must be >= 1");
  if (epsilon_sign != -1 && epsilon_sign != 1) {
    throw InvalidArgument("epsilon_sign must be -1 or +1");
  }
  const double n = t_end / dt;
  if (std::abs(n - std::llround(n)) > 1e-9 * std::max(1.0, n)) {
    throw InvalidArgument("t_end must be an integer multiple of dt");
  }
}

std::int64_t SolverConfig::steps() const { return std::llround(t_end / dt); }

SpectralField nonlinear_term(const SpectralField& u, bool dealias) {
  spectral::require_zero_x_mean(u, "nonlinear_term");
  const Grid& g = u.grid;
  const spectral::Transform transform(g);
  const std::vector<double> mask = make_mask(g, dealias);
  std::vector<cd> filtered(g.size());
  for (std::size_t n = 0; n < g.size(); ++n) filtered[n] = mask[n] * u.coeffs[n];
  std::vector<double> phys(g.size());
  transform.inverse(filtered, phys);
  for (double& x : phys) x *= x;
  SpectralField out(g);
  transform.forward(phys, out.coeffs);
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      const std::size_t n = g.index(i, j);
      out.coeffs[n] *= cd(0.0, -0.5 * g.xi(i)) * mask[n];
    }
  }
  return out;
}

Integrator::Integrator(const Grid& grid, const SolverConfig& cfg)
    : grid_(grid), cfg_(cfg), transform_(grid), mask_(make_mask(grid, cfg.dealias)) {
  cfg_.validate();
  const std::size_t size = grid.size();
  half_xi_.resize(size);
  for (auto* v : {&e_, &e2_, &q_, &f1_, &f2_, &f3_, &nv_, &na_, &nb_, &nc_, &a_, &b_, &c_}) {
    v->assign(size, cd(0.0));
  }
  physical_.assign(size, 0.0);

  std::vector<cd> contour(kContourPoints);
  for (int k = 0; k < kContourPoints; ++k) {
    contour[k] = std::polar(1.0, 2.0 * std::numbers::pi * (k + 0.5) / kContourPoints);
  }
  const double dt = cfg_.dt;
  for (int j = 0; j < grid.ny(); ++j) {
    const double q = grid.q(j);
    for (int i = 0; i < grid.nx(); ++i) {
      const std::size_t n = grid.index(i, j);
      const double xi = grid.xi(i);
      half_xi_[n] = 0.5 * xi;
      if (grid.is_nyquist(i, j)) continue;
      const double phase =
          spectral::dispersion_symbol({xi, q}, cfg_.epsilon_sign) + cfg_.moving_frame_speed * xi;
      const cd z(0.0, dt * phase);
      e_[n] = std::exp(z);
      e2_[n] = std::exp(0.5 * z);
      // Contour means avoid the cancellation in the phi-functions near z = 0.
      cd sq(0.0), s1(0.0), s2(0.0), s3(0.0);
      for (const cd& r : contour) {
        const cd w = z + r;
        const cd ew = std::exp(w);
        const cd w3 = w * w * w;
        sq += (std::exp(0.5 * w) - 1.0) / w;
        s1 += (-4.0 - w + ew * (4.0 - 3.0 * w + w * w)) / w3;
        s2 += (2.0 + w + ew * (w - 2.0)) / w3;
        s3 += (-4.0 - 3.0 * w - w * w + ew * (4.0 - w)) / w3;
      }
      const double scale = dt / kContourPoints;
      q_[n] = sq * scale;
      f1_[n] = s1 * scale;
      f2_[n] = s2 * scale;
      f3_[n] = s3 * scale;
    }
  }
}

void Integrator::nonlinear(const std::vector<cd>& v, std::vector<cd>& out) {
  if (!cfg_.nonlinear) {
    std::fill(out.begin(), out.end(), cd(0.0));
    return;
  }
  const std::size_t size = v.size();
  for (std::size_t n = 0; n < size; ++n) out[n] = mask_[n] * v[n];
  transform_.inverse(out, physical_);
  for (double& x : physical_) x *= x;
  transform_.forward(physical_, out);
  for (std::size_t n = 0; n < size; ++n) out[n] *= cd(0.0, -half_xi_[n] * mask_[n]);
}

void Integrator::advance(SpectralField& u, double t_start) {
  if (!(u.grid == grid_)) throw InvalidArgument("Integrator::advance: grid mismatch");
  std::vector<cd>& v = u.coeffs;
  const std::size_t size = v.size();

  nonlinear(v, nv_);
  for (std::size_t n = 0; n < size; ++n) a_[n] = e2_[n] * v[n] + q_[n] * nv_[n];
  nonlinear(a_, na_);
  for (std::size_t n = 0; n < size; ++n) b_[n] = e2_[n] * v[n] + q_[n] * na_[n];
  nonlinear(b_, nb_);
  for (std::size_t n = 0; n < size; ++n) {
    c_[n] = e2_[n] * a_[n] + q_[n] * (2.0 * nb_[n] - nv_[n]);
  }
  nonlinear(c_, nc_);
  for (std::size_t n = 0; n < size; ++n) {
    v[n] = e_[n] * v[n] + f1_[n] * nv_[n] + 2.0 * f2_[n] * (na_[n] + nb_[n]) + f3_[n] * nc_[n];
  }
  spectral::enforce_zero_x_mean(u);
  spectral::zero_nyquist(u);
  blowup_check(transform_, v, physical_, t_start + cfg_.dt);
}

SpectralField step(const SpectralField& u, const SolverConfig& cfg) {
  spectral::require_zero_x_mean(u, "step");
  Integrator integrator(u.grid, cfg);
  SpectralField out = u;
  integrator.advance(out);
  return out;
}

DiagnosticsRecord diagnose(const RealField& u, double t, double c) {
  DiagnosticsRecord r;
  r.t = t;
  r.mass = spectral::mass(u);
  r.energy = spectral::energy(u);
  r.hamiltonian_c = r.energy + c * r.mass;
  r.energy_norm = spectral::energy_norm(u);
  r.linf = spectral::linf_norm(u);
  return r;
}

EvolveResult evolve(const RealField& u0, const SolverConfig& cfg, const Probe& probe) {
  cfg.validate();
  const Grid& g = u0.grid;
  Integrator integrator(g, cfg);
  const spectral::Transform transform(g);
  SpectralField state = transform.forward(u0);
  spectral::require_zero_x_mean(state, "evolve");
  spectral::enforce_zero_x_mean(state);
  spectral::zero_nyquist(state);

  EvolveResult result{RealField(g), 0.0, {}};
  auto record = [&](double t) {
    RealField snapshot(g);
    transform.inverse(state.coeffs, snapshot.values);
    DiagnosticsRecord r = diagnose(snapshot, t, cfg.moving_frame_speed);
    if (probe) r.orbital_distance = probe(state);
    result.records.push_back(r);
  };

  const std::int64_t steps = cfg.steps();
  record(0.0);
  for (std::int64_t n = 0; n < steps; ++n) {
    integrator.advance(state, n * cfg.dt);
    const std::int64_t done = n + 1;
    if (done % cfg.record_every == 0 || done == steps) record(done * cfg.dt);
  }
  result.t_final = steps * cfg.dt;
  transform.inverse(state.coeffs, result.final_field.values);
  return result;
}

double stationarity_residual(const RealField& u, double c) {
  const Grid& g = u.grid;
  const spectral::Transform transform(g);
  const SpectralField f = transform.forward(u);
  spectral::require_zero_x_mean(f, "stationarity_residual");
  std::vector<double> sq(u.values);
  for (double& x : sq) x *= x;
  SpectralField r(g);
  transform.forward(sq, r.coeffs);
  for (int j = 0; j < g.ny(); ++j) {
    const double q = g.q(j);
    for (int i = 0; i < g.nx(); ++i) {
      const std::size_t n = g.index(i, j);
      if (g.is_nyquist(i, j)) {
        r.coeffs[n] = 0.0;
        continue;
      }
      const double xi = g.xi(i);
      const double phase = spectral::dispersion_symbol({xi, q}) + c * xi;
      r.coeffs[n] = cd(0.0, -phase) * f.coeffs[n] + cd(0.0, 0.5 * xi) * r.coeffs[n];
    }
  }
  return spectral::l2_norm(r);
}

RealField rescale(const RealField& u, double lam) {
  if (!spectral::is_dyadic(lam)) {
    throw GridIncompatible("rescale: lambda must be a power of 4, got " + format_double(lam));
  }
  int e = 0;
  std::frexp(lam, &e);
  const int power_of_two = e - 1;
  if (power_of_two % 2 != 0) {
    throw GridIncompatible("rescale: lambda must be a power of 4, got " + format_double(lam));
  }
  const Grid& g = u.grid;
  const Grid target = [&] {
    try {
      return Grid(g.nx(), g.ny(), std::ldexp(g.length_x(), power_of_two / 2),
                  g.lambda_y() * lam);
    } catch (const InvalidGrid& err) {
      throw GridIncompatible(std::string("rescale: ") + err.what());
    }
  }();
  std::vector<double> values(u.values);
  for (double& v : values) v /= lam;
  return RealField(target, std::move(values));
}

double scaling_norm_ratio(const RealField& u, double lam) {
  const double original = spectral::energy_norm(u);
  if (original == 0.0) return 0.0;
  return spectral::energy_norm(rescale(u, lam)) / (std::pow(lam, -0.25) * original);
}

void write_diagnostics_csv(std::ostream& out, const std::vector<DiagnosticsRecord>& records) {
  out << "t,mass,energy,hamiltonian_c,energy_norm,linf,orbital_distance\n";
  for (const DiagnosticsRecord& r : records) {
    out << format_double(r.t) << ',' << format_double(r.mass) << ','
        << format_double(r.energy) << ',' << format_double(r.hamiltonian_c) << ','
        << format_double(r.energy_norm) << ',' << format_double(r.linf) << ',';
    if (r.orbital_distance) out << format_double(*r.orbital_distance);
    out << '\n';
  }
}

}  // namespace kplab::solver
