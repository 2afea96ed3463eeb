#include "kplab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kplab/errors.hpp"

namespace kplab::spectral {
namespace {

using cd = std::complex<double>;

double max_abs(const std::vector<cd>& c) {
  double m = 0.0;
  for (const cd& z : c) m = std::max(m, std::abs(z));
  return m;
}

void require_same_size(std::size_t a, std::size_t b, const char* who) {
  if (a != b) throw InvalidArgument(std::string(who) + ": size mismatch");
}

// Multiplies every non-Nyquist coefficient by m(xi, q); Nyquist modes are
// zeroed.
template <class Multiplier>
SpectralField apply_multiplier(const SpectralField& f, Multiplier&& m) {
  const Grid& g = f.grid;
  SpectralField out(g);
  for (int j = 0; j < g.ny(); ++j) {
    const double q = g.q(j);
    for (int i = 0; i < g.nx(); ++i) {
      if (g.is_nyquist(i, j)) continue;
      out.at(i, j) = m(g.xi(i), q) * f.at(i, j);
    }
  }
  return out;
}

}  // namespace

Transform::Transform(const Grid& grid)
    : grid_(grid), fft_(grid.nx(), grid.ny()), sign_(grid.nx()), work_(grid.size()) {
  for (int i = 0; i < grid.nx(); ++i) sign_[i] = (grid.kx(i) % 2 == 0) ? 1.0 : -1.0;
}

void Transform::forward(std::span<const double> values,
                        std::span<cd> coeffs) const {
  require_same_size(values.size(), grid_.size(), "Transform::forward");
  require_same_size(coeffs.size(), grid_.size(), "Transform::forward");
  for (std::size_t n = 0; n < values.size(); ++n) coeffs[n] = values[n];
  fft_.forward(coeffs);
  const double cell = grid_.dx() * grid_.dy();
  const int nx = grid_.nx();
  for (int j = 0; j < grid_.ny(); ++j) {
    for (int i = 0; i < nx; ++i) coeffs[grid_.index(i, j)] *= cell * sign_[i];
  }
}

void Transform::inverse(std::span<const cd> coeffs,
                        std::span<double> values) const {
  require_same_size(values.size(), grid_.size(), "Transform::inverse");
  require_same_size(coeffs.size(), grid_.size(), "Transform::inverse");
  const double scale = 1.0 / grid_.area();
  const int nx = grid_.nx();
  for (int j = 0; j < grid_.ny(); ++j) {
    for (int i = 0; i < nx; ++i) {
      const std::size_t n = grid_.index(i, j);
      work_[n] = coeffs[n] * (scale * sign_[i]);
    }
  }
  fft_.backward(work_);
  for (std::size_t n = 0; n < values.size(); ++n) values[n] = work_[n].real();
}

SpectralField Transform::forward(const RealField& u) const {
  if (!(u.grid == grid_)) throw InvalidArgument("Transform::forward: grid mismatch");
  SpectralField f(grid_);
  forward(u.values, f.coeffs);
  return f;
}

RealField Transform::inverse(const SpectralField& f) const {
  if (!(f.grid == grid_)) throw InvalidArgument("Transform::inverse: grid mismatch");
  const double defect = hermitian_defect(f);
  if (defect > kContractTolerance) {
    throw SymmetryViolation("inverse_transform: Hermitian defect " +
                            std::to_string(defect));
  }
  RealField u(grid_);
  inverse(f.coeffs, u.values);
  return u;
}

SpectralField forward_transform(const RealField& u) {
  return Transform(u.grid).forward(u);
}

RealField inverse_transform(const SpectralField& f) {
  return Transform(f.grid).inverse(f);
}

double hermitian_defect(const SpectralField& f) {
  const double scale = max_abs(f.coeffs);
  if (scale == 0.0) return 0.0;
  const Grid& g = f.grid;
  double worst = 0.0;
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      const cd a = f.at(i, j);
      const cd b = f.coeffs[g.conjugate_index(i, j)];
      worst = std::max(worst, std::abs(a - std::conj(b)));
    }
  }
  return worst / scale;
}

double dispersion_symbol(FrequencyPair zeta, int epsilon_sign) {
  if (zeta.xi == 0.0) return 0.0;
  return zeta.xi * zeta.xi * zeta.xi - epsilon_sign * zeta.q * zeta.q / zeta.xi;
}

double bracket(double a) { return std::sqrt(1.0 + a * a); }

double weight_p(FrequencyPair zeta) {
  if (zeta.xi == 0.0) throw DomainError("weight_p: xi = 0 is outside the domain");
  return bracket(zeta.q / (zeta.xi * bracket(zeta.xi)));
}

double energy_weight(FrequencyPair zeta) {
  if (zeta.xi == 0.0) return 1.0;
  return 1.0 + zeta.xi * zeta.xi + (zeta.q * zeta.q) / (zeta.xi * zeta.xi);
}

bool satisfies_zero_x_mean(const SpectralField& f, double rel_tol) {
  const double scale = max_abs(f.coeffs);
  if (scale == 0.0) return true;
  const Grid& g = f.grid;
  for (int j = 0; j < g.ny(); ++j) {
    if (g.ky(j) == 0) continue;
    if (std::abs(f.at(0, j)) > rel_tol * scale) return false;
  }
  return true;
}

void require_zero_x_mean(const SpectralField& f, const char* who) {
  if (!satisfies_zero_x_mean(f)) {
    throw ConstraintViolation(std::string(who) +
                              ": coefficient u^(0, q != 0) is nonzero");
  }
}

void enforce_zero_x_mean(SpectralField& f) {
  for (int j = 0; j < f.grid.ny(); ++j) {
    if (f.grid.ky(j) != 0) f.at(0, j) = 0.0;
  }
}

void zero_nyquist(SpectralField& f) {
  const Grid& g = f.grid;
  const int ix = g.nx() / 2;
  const int jy = g.ny() / 2;
  for (int j = 0; j < g.ny(); ++j) f.at(ix, j) = 0.0;
  for (int i = 0; i < g.nx(); ++i) f.at(i, jy) = 0.0;
}

SpectralField apply_linear_group(const SpectralField& f, double t, int epsilon_sign) {
  require_zero_x_mean(f, "apply_linear_group");
  return apply_multiplier(f, [&](double xi, double q) {
    return std::polar(1.0, t * dispersion_symbol({xi, q}, epsilon_sign));
  });
}

SpectralField x_derivative(const SpectralField& f) {
  return apply_multiplier(f, [](double xi, double) { return cd(0.0, xi); });
}

SpectralField y_derivative(const SpectralField& f) {
  return apply_multiplier(f, [](double, double q) { return cd(0.0, q); });
}

SpectralField x_antiderivative(const SpectralField& f) {
  const double scale = max_abs(f.coeffs);
  for (int j = 0; j < f.grid.ny(); ++j) {
    if (std::abs(f.at(0, j)) > kContractTolerance * scale) {
      throw ConstraintViolation("x_antiderivative: u^(0, q) must vanish for all q");
    }
  }
  return apply_multiplier(f, [](double xi, double) {
    return xi == 0.0 ? cd(0.0) : cd(0.0, -1.0 / xi);
  });
}

SpectralField shift_x(const SpectralField& f, double a) {
  SpectralField out(f.grid);
  for (int j = 0; j < f.grid.ny(); ++j) {
    for (int i = 0; i < f.grid.nx(); ++i) {
      out.at(i, j) = f.at(i, j) * std::polar(1.0, -f.grid.xi(i) * a);
    }
  }
  return out;
}

double l2_norm(const SpectralField& f) {
  double s = 0.0;
  for (const cd& z : f.coeffs) s += std::norm(z);
  return std::sqrt(s / f.grid.area());
}

double l2_norm(const RealField& u) { return std::sqrt(mass(u)); }

double energy_norm(const SpectralField& f) {
  require_zero_x_mean(f, "energy_norm");
  const Grid& g = f.grid;
  double s = 0.0;
  for (int j = 0; j < g.ny(); ++j) {
    const double q = g.q(j);
    for (int i = 0; i < g.nx(); ++i) {
      const double w = g.is_nyquist(i, j) ? 1.0 : energy_weight({g.xi(i), q});
      s += w * std::norm(f.at(i, j));
    }
  }
  return std::sqrt(s / g.area());
}

double energy_norm(const RealField& u) { return energy_norm(forward_transform(u)); }

double mass(const RealField& u) {
  double s = 0.0;
  for (double v : u.values) s += v * v;
  return s * u.grid.dx() * u.grid.dy();
}

double energy(const RealField& u) {
  const SpectralField f = forward_transform(u);
  require_zero_x_mean(f, "energy");
  const Grid& g = f.grid;
  double quad = 0.0;
  for (int j = 0; j < g.ny(); ++j) {
    const double q = g.q(j);
    for (int i = 0; i < g.nx(); ++i) {
      if (g.is_nyquist(i, j)) continue;
      const double xi = g.xi(i);
      if (xi == 0.0) continue;
      quad += (xi * xi + q * q / (xi * xi)) * std::norm(f.at(i, j));
    }
  }
  quad /= g.area();
  double cubic = 0.0;
  for (double v : u.values) cubic += v * v * v;
  cubic *= g.dx() * g.dy();
  return quad - cubic / 3.0;
}

double hamiltonian_c(const RealField& u, double c) { return energy(u) + c * mass(u); }

double linf_norm(const RealField& u) {
  double m = 0.0;
  for (double v : u.values) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace kplab::spectral
