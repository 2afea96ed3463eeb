#include "kplab/littlewood_paley.hpp"

#include <cmath>
#include <string>

#include "kplab/errors.hpp"
#include "kplab/spectral.hpp"

namespace kplab::spectral {
namespace {

constexpr double kPlateau = 5.0 / 4.0;
constexpr double kSupport = 8.0 / 5.0;

double psi(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

void require_dyadic(double M) {
  if (!is_dyadic(M)) {
    throw InvalidArgument("Littlewood-Paley scale must be a power of two, got " +
                          std::to_string(M));
  }
}

template <class Multiplier>
SpectralField multiply_xi(const SpectralField& f, Multiplier&& m) {
  const Grid& g = f.grid;
  SpectralField out(g);
  for (int i = 0; i < g.nx(); ++i) {
    const double factor = m(g.xi(i));
    if (factor == 0.0) continue;
    for (int j = 0; j < g.ny(); ++j) {
      if (!g.is_nyquist(i, j)) out.at(i, j) = factor * f.at(i, j);
    }
  }
  return out;
}

}  // namespace

bool is_dyadic(double M) noexcept {
  if (!(M > 0.0) || !std::isfinite(M)) return false;
  int e = 0;
  return std::frexp(M, &e) == 0.5;
}

double bump_chi(double x) {
  const double a = std::abs(x);
  if (a <= kPlateau) return 1.0;
  if (a >= kSupport) return 0.0;
  const double s = (kSupport - a) / (kSupport - kPlateau);
  const double up = psi(s);
  return up / (up + psi(1.0 - s));
}

double dyadic_eta(double xi, double M) {
  return bump_chi(xi / M) - bump_chi(2.0 * xi / M);
}

SpectralField lp_projector(const SpectralField& f, double M) {
  require_dyadic(M);
  return multiply_xi(f, [M](double xi) { return dyadic_eta(xi, M); });
}

SpectralField lp_projector_leq(const SpectralField& f, double M) {
  require_dyadic(M);
  return multiply_xi(f, [M](double xi) { return bump_chi(xi / M); });
}

RealField lp_projector(const RealField& u, double M) {
  const Transform t(u.grid);
  return t.inverse(lp_projector(t.forward(u), M));
}

RealField lp_projector_leq(const RealField& u, double M) {
  const Transform t(u.grid);
  return t.inverse(lp_projector_leq(t.forward(u), M));
}

SpectralField p_low(const SpectralField& f) {
  return lp_projector_leq(f, std::ldexp(1.0, -5));
}

SpectralField p_high(const SpectralField& f) {
  return multiply_xi(f, [](double xi) { return 1.0 - bump_chi(xi / std::ldexp(1.0, -5)); });
}

}  // namespace kplab::spectral
