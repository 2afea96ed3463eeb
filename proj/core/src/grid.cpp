#include "kplab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "kplab/errors.hpp"

namespace kplab::spectral {

bool is_power_of_two(long long n) noexcept { return n > 0 && (n & (n - 1)) == 0; }

Grid::Grid(int nx, int ny, double length_x, double lambda_y)
    : nx_(nx), ny_(ny), length_x_(length_x), lambda_y_(lambda_y) {
  if (!is_power_of_two(nx) || nx < 16) {
    throw InvalidGrid("nx must be a power of two >= 16, got " + std::to_string(nx));
  }
  if (!is_power_of_two(ny) || ny < 4) {
    throw InvalidGrid("ny must be a power of two >= 4, got " + std::to_string(ny));
  }
  if (!std::isfinite(length_x) || length_x <= 0.0) {
    throw InvalidGrid("length_x must be finite and positive");
  }
  if (!std::isfinite(lambda_y) || lambda_y < 1.0) {
    throw InvalidGrid("lambda_y must be finite and >= 1");
  }
}

double Grid::length_y() const noexcept {
  return 2.0 * std::numbers::pi * lambda_y_;
}

double Grid::xi(int i) const noexcept {
  return 2.0 * std::numbers::pi * kx(i) / length_x_;
}

std::vector<double> Grid::xi_lattice() const {
  std::vector<double> out;
  out.reserve(nx_);
  for (int k = -nx_ / 2; k < nx_ / 2; ++k) {
    out.push_back(2.0 * std::numbers::pi * k / length_x_);
  }
  return out;
}

std::vector<double> Grid::q_lattice() const {
  std::vector<double> out;
  out.reserve(ny_);
  for (int k = -ny_ / 2; k < ny_ / 2; ++k) out.push_back(k / lambda_y_);
  return out;
}

RealField::RealField(const Grid& g, std::vector<double> v)
    : grid(g), values(std::move(v)) {
  if (values.size() != grid.size()) {
    throw InvalidArgument("RealField: value count does not match grid");
  }
  for (double x : values) {
    if (!std::isfinite(x)) throw InvalidArgument("RealField: non-finite value");
  }
}

SpectralField::SpectralField(const Grid& g, std::vector<std::complex<double>> c)
    : grid(g), coeffs(std::move(c)) {
  if (coeffs.size() != grid.size()) {
    throw InvalidArgument("SpectralField: coefficient count does not match grid");
  }
}

}  // namespace kplab::spectral
