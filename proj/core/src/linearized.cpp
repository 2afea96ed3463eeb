#include "kplab/linearized.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <ostream>

#include "kplab/errors.hpp"
#include "kplab/fft.hpp"
#include "kplab/format.hpp"
#include "kplab/soliton.hpp"

namespace kplab::stability {
namespace {

using cd = std::complex<double>;

constexpr double kResolutionTolerance = 1e-3;
constexpr int kTrackedEigenvalues = 8;

// Periodic fourth-order stencils at offsets -2..2, unscaled.
constexpr std::array<double, 5> kFirst = {1.0 / 12.0, -2.0 / 3.0, 0.0, 2.0 / 3.0, -1.0 / 12.0};
constexpr std::array<double, 5> kSecond = {-1.0 / 12.0, 4.0 / 3.0, -2.5, 4.0 / 3.0, -1.0 / 12.0};

int wrap(int i, int n) { return ((i % n) + n) % n; }

struct SliceSpectrum {
  std::vector<cd> coeffs;
  std::vector<double> xi;
  double scale = 0.0;  // L / n^2, so sum scale |v_k|^2 = int v^2
};

SliceSpectrum slice_spectrum(std::span<const double> v, double length) {
  const int n = static_cast<int>(v.size());
  if (n < 2) throw InvalidArgument("hessian_form: need at least two samples");
  if (!(length > 0.0)) throw InvalidArgument("hessian_form: length must be positive");
  SliceSpectrum s;
  s.coeffs.assign(v.begin(), v.end());
  spectral::Fft(n, 1).forward(s.coeffs);
  s.xi.resize(n);
  for (int k = 0; k < n; ++k) {
    const int kk = (k <= n / 2) ? k : k - n;
    s.xi[k] = 2.0 * std::numbers::pi * kk / length;
  }
  s.scale = length / (static_cast<double>(n) * n);
  return s;
}

double antiderivative_norm2(const SliceSpectrum& s) {
  double total = 0.0;
  for (std::size_t k = 1; k < s.coeffs.size(); ++k) {
    total += std::norm(s.coeffs[k]) / (s.xi[k] * s.xi[k]);
  }
  return s.scale * total;
}

void require_zero_mean(const SliceSpectrum& s) {
  double energy = 0.0;
  for (const cd& c : s.coeffs) energy += std::norm(c);
  if (std::abs(s.coeffs[0]) > 1e-10 * std::sqrt(energy)) {
    throw ConstraintViolation("hessian_form: k != 0 needs a zero-mean slice");
  }
}

double richardson(double coarse, double fine) { return fine + (fine - coarse) / 15.0; }

}  // namespace

double hessian_form(std::span<const double> v, double length, double c, int k) {
  const SliceSpectrum s = slice_spectrum(v, length);
  double grad = 0.0;
  double l2 = 0.0;
  for (std::size_t m = 0; m < s.coeffs.size(); ++m) {
    const double a = std::norm(s.coeffs[m]);
    grad += s.xi[m] * s.xi[m] * a;
    l2 += a;
  }
  double value = s.scale * (grad + c * l2);
  if (k != 0) {
    require_zero_mean(s);
    value += static_cast<double>(k) * k * antiderivative_norm2(s);
  }
  const int n = static_cast<int>(v.size());
  const double dx = length / n;
  double potential = 0.0;
  for (int i = 0; i < n; ++i) {
    potential += soliton_value(c, -0.5 * length + i * dx) * v[i] * v[i];
  }
  return value - potential * dx;
}

double hessian_form(const spectral::RealField& v, double c, int k) {
  const auto& g = v.grid;
  const int nx = g.nx();
  for (int j = 1; j < g.ny(); ++j) {
    for (int i = 0; i < nx; ++i) {
      if (v.values[g.index(i, j)] != v.values[g.index(i, 0)]) {
        throw InvalidArgument("hessian_form: the field must not depend on y");
      }
    }
  }
  return hessian_form(std::span<const double>(v.values.data(), nx), g.length_x(), c, k);
}

double hessian_reference_norm(std::span<const double> v, double length, int k) {
  const SliceSpectrum s = slice_spectrum(v, length);
  double total = 0.0;
  for (std::size_t m = 0; m < s.coeffs.size(); ++m) {
    total += (1.0 + s.xi[m] * s.xi[m]) * std::norm(s.coeffs[m]);
  }
  double value = s.scale * total;
  if (k != 0) {
    require_zero_mean(s);
    value += static_cast<double>(k) * k * antiderivative_norm2(s);
  }
  return value;
}

double coercivity_constant(double c, int k, double length, int modes) {
  if (!(c > 0.0)) throw InvalidArgument("coercivity_constant: c must be positive");
  if (!(length > 0.0) || modes < 1) {
    throw InvalidArgument("coercivity_constant: need length > 0 and modes >= 1");
  }
  // Basis cos(xi_m x), sin(xi_m x), m = 1..modes, both with norm^2 L/2.
  // Integrals of Q_c against cosines are taken over the whole line, which
  // is exact up to the soliton's tail outside the box.
  auto q_hat = [&](double kappa) {
    if (kappa == 0.0) return 12.0 * std::sqrt(c);
    const double s = std::numbers::pi * kappa / std::sqrt(c);
    return 12.0 * std::numbers::pi * kappa / std::sinh(s);
  };
  const double base = 2.0 * std::numbers::pi / length;
  const int n = 2 * modes;
  linalg::Matrix pencil(n);
  std::vector<double> reference(n);
  for (int a = 0; a < modes; ++a) {
    const double xa = base * (a + 1);
    const double diag = xa * xa + c + static_cast<double>(k) * k / (xa * xa);
    reference[a] = reference[a + modes] = 1.0 + xa * xa + static_cast<double>(k) * k / (xa * xa);
    for (int b = 0; b < modes; ++b) {
      const double xb = base * (b + 1);
      const double minus = q_hat(std::abs(xa - xb));
      const double plus = q_hat(xa + xb);
      const double cc = 0.5 * (minus + plus) / (0.5 * length);
      const double ss = 0.5 * (minus - plus) / (0.5 * length);
      pencil(a, b) = -cc;
      pencil(a + modes, b + modes) = -ss;
    }
    pencil(a, a) += diag;
    pencil(a + modes, a + modes) += diag;
  }
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      pencil(i, j) /= std::sqrt(reference[i] * reference[j]);
    }
  }
  return linalg::symmetric_eigen(pencil, 1).values.front();
}

linalg::Matrix linearized_operator_matrix(double c, int n, double half_width,
                                          bool zero_potential) {
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw InvalidArgument("linearized operator: c must be finite and positive");
  }
  if (!(half_width > 0.0)) throw InvalidArgument("linearized operator: half_width must be positive");
  if (!zero_potential) {
    if (n < 256) throw InvalidArgument("linearized operator: n must be at least 256");
    if (half_width * std::sqrt(c) < 20.0) {
      throw DomainTooSmall("linearized operator: half_width " + format_double(half_width) +
                           " is below 20/sqrt(c)");
    }
  } else if (n < 16) {
    throw InvalidArgument("linearized operator: n must be at least 16");
  }
  const double h = 2.0 * half_width / n;

  // D2 * D2 as a single nine-point stencil.
  std::array<double, 9> fourth{};
  for (int a = 0; a < 5; ++a) {
    for (int b = 0; b < 5; ++b) fourth[a + b] += kSecond[a] * kSecond[b];
  }

  linalg::Matrix m(n);
  const double h2 = h * h;
  const double h4 = h2 * h2;
  for (int i = 0; i < n; ++i) {
    for (int o = -4; o <= 4; ++o) m(i, wrap(i + o, n)) += fourth[o + 4] / h4;
    for (int o = -2; o <= 2; ++o) m(i, wrap(i + o, n)) -= c * kSecond[o + 2] / h2;
    m(i, i) += 1.0;
  }
  if (!zero_potential) {
    // -D^T diag(Q) D with D_{k, k+a} = kFirst[a + 2] / h.
    for (int k = 0; k < n; ++k) {
      const double q = soliton_value(c, -half_width + k * h) / h2;
      for (int a = -2; a <= 2; ++a) {
        if (a == 0) continue;
        for (int b = -2; b <= 2; ++b) {
          if (b == 0) continue;
          m(wrap(k + a, n), wrap(k + b, n)) -= q * kFirst[a + 2] * kFirst[b + 2];
        }
      }
    }
  }
  return m;
}

SpectrumResult min_eigenvalue(double c, int n, double half_width) {
  const auto coarse = linalg::symmetric_eigen(linearized_operator_matrix(c, n, half_width),
                                              kTrackedEigenvalues);
  const auto fine = linalg::symmetric_eigen(linearized_operator_matrix(c, 2 * n, half_width),
                                            kTrackedEigenvalues);
  const double gap = std::abs(fine.values.front() - coarse.values.front());
  if (gap > kResolutionTolerance) {
    throw ConvergenceFailure("smallest eigenvalue at c = " + format_double(c) +
                             " changes by " + format_double(gap) + " between n and 2n");
  }
  SpectrumResult r;
  r.c = c;
  r.grid_n = n;
  r.domain_half_width = half_width;
  r.error_estimate = gap / 15.0;
  r.min_eigenvalue = richardson(coarse.values.front(), fine.values.front());
  const std::size_t count = std::min(coarse.values.size(), fine.values.size());
  for (std::size_t i = 0; i < count; ++i) {
    if (fine.values[i] >= 1.0) break;
    r.eigenvalues_below_one.push_back(richardson(coarse.values[i], fine.values[i]));
  }
  std::sort(r.eigenvalues_below_one.begin(), r.eigenvalues_below_one.end());
  if (!r.eigenvalues_below_one.empty()) r.min_eigenvalue = r.eigenvalues_below_one.front();
  return r;
}

CriticalSpeed critical_speed_scan(double c_min, double c_max, int steps, int n,
                                  double half_width) {
  if (!(c_min > 0.0) || !(c_min < c_max)) {
    throw InvalidArgument("critical_speed_scan: need 0 < c_min < c_max");
  }
  if (steps < 1) throw InvalidArgument("critical_speed_scan: steps must be positive");
  CriticalSpeed out;
  auto eval = [&](double c) {
    out.evaluations.push_back(min_eigenvalue(c, n, half_width));
    return out.evaluations.back().min_eigenvalue;
  };
  double lo = c_min;
  double hi = c_max;
  const double f_lo = eval(lo);
  const double f_hi = eval(hi);
  if ((f_lo > 0.0) == (f_hi > 0.0)) {
    throw ConvergenceFailure("no sign change of the smallest eigenvalue on [" +
                             format_double(c_min) + ", " + format_double(c_max) + "]");
  }
  const bool rising = f_lo < 0.0;
  for (int s = 0; s < steps; ++s) {
    const double mid = 0.5 * (lo + hi);
    const double f = eval(mid);
    if ((f < 0.0) == rising) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  out.lower = lo;
  out.upper = hi;
  out.speed = 0.5 * (lo + hi);
  return out;
}

double predicted_min_eigenvalue(double c, double nu2) { return 1.0 - 3.0 * nu2 * c * c / 16.0; }

double speed_for_eigenvalue(double lambda0, double nu2) {
  if (!(nu2 > 0.0) || lambda0 > 1.0) {
    throw DomainError("speed_for_eigenvalue: need nu2 > 0 and lambda0 <= 1");
  }
  return std::sqrt(16.0 * (1.0 - lambda0) / (3.0 * nu2));
}

double characteristic_polynomial(double mu) { return mu * mu * mu + 2.0 * mu - 3.0 * mu * mu; }

EigenfunctionJet exact_eigenfunction(double mu, double x) {
  // 1 - tanh x without cancellation for large positive x.
  const double e = std::exp(-2.0 * std::abs(x));
  const double t = std::copysign((1.0 - e) / (1.0 + e), x);
  const double one_minus_t = x >= 0.0 ? 2.0 * e / (1.0 + e) : 1.0 - t;
  const double s = 1.0 - t * t;  // sech^2
  const double a = mu * mu * mu + 2.0 * mu;
  const double b = 3.0 * mu * mu;

  // h = a - b tanh x and its derivatives.
  const std::array<double, 5> h = {
      (a - b) + b * one_minus_t,
      -b * s,
      2.0 * b * t * s,
      -b * (-2.0 * s * s + 4.0 * t * t * s),
      -b * (16.0 * t * s * s - 8.0 * t * t * t * s),
  };
  constexpr std::array<std::array<double, 5>, 5> binom = {{
      {1, 0, 0, 0, 0},
      {1, 1, 0, 0, 0},
      {1, 2, 1, 0, 0},
      {1, 3, 3, 1, 0},
      {1, 4, 6, 4, 1},
  }};
  const double growth = std::exp(mu * x);
  std::array<double, 5> d{};
  for (int order = 0; order <= 4; ++order) {
    double sum = 0.0;
    for (int j = 0; j <= order; ++j) {
      sum += binom[order][j] * std::pow(mu, order - j) * h[j];
    }
    d[order] = growth * sum;
  }
  return {d[0], d[1], d[2], d[3], d[4]};
}

double verify_exact_eigenfunction(double mu, double nu2) {
  constexpr int kPoints = 4001;
  double worst = 0.0;
  for (int i = 0; i < kPoints; ++i) {
    const double x = -10.0 + 20.0 * i / (kPoints - 1);
    const EigenfunctionJet g = exact_eigenfunction(mu, x);
    const double sech = 1.0 / std::cosh(x);
    const double r = g.d4 - 4.0 * (1.0 - 3.0 * sech * sech) * g.d2 + 3.0 * nu2 * g.g;
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

void write_spectrum_csv(std::ostream& out, const std::vector<SpectrumResult>& rows) {
  out << "c,min_eigenvalue,error_estimate,grid_n\n";
  for (const auto& r : rows) {
    out << format_double(r.c) << ',' << format_double(r.min_eigenvalue) << ','
        << format_double(r.error_estimate) << ',' << r.grid_n << '\n';
  }
}

}  // namespace kplab::stability
