#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace kplab::spectral {

/// Rectangle [-L_x/2, L_x/2) x [0, 2*pi*lambda_y) sampled on nx * ny points.
///
/// Storage is x-fastest: value (i, j) lives at i + nx * j. Frequency indices
/// follow FFT ordering, so storage index i maps to the signed lattice index
/// kx(i) in {-nx/2, ..., nx/2 - 1}; the single index -nx/2 is the Nyquist
/// mode (likewise in y).
class Grid {
 public:
  Grid(int nx, int ny, double length_x, double lambda_y = 1.0);

  int nx() const noexcept { return nx_; }
  int ny() const noexcept { return ny_; }
  double length_x() const noexcept { return length_x_; }
  double lambda_y() const noexcept { return lambda_y_; }
  double length_y() const noexcept;
  double dx() const noexcept { return length_x_ / nx_; }
  double dy() const noexcept { return length_y() / ny_; }
  double area() const noexcept { return length_x_ * length_y(); }
  std::size_t size() const noexcept {
    return static_cast<std::size_t>(nx_) * static_cast<std::size_t>(ny_);
  }

  std::size_t index(int i, int j) const noexcept {
    return static_cast<std::size_t>(i) +
           static_cast<std::size_t>(nx_) * static_cast<std::size_t>(j);
  }

  double x(int i) const noexcept { return -0.5 * length_x_ + i * dx(); }
  double y(int j) const noexcept { return j * dy(); }

  int kx(int i) const noexcept { return i < nx_ / 2 ? i : i - nx_; }
  int ky(int j) const noexcept { return j < ny_ / 2 ? j : j - ny_; }

  /// x-frequency 2*pi*kx / L_x.
  double xi(int i) const noexcept;
  /// y-frequency ky / lambda_y, a member of lambda_y^{-1} Z.
  double q(int j) const noexcept { return ky(j) / lambda_y_; }

  /// True when either index is the Nyquist index.
  bool is_nyquist(int i, int j) const noexcept {
    return i == nx_ / 2 || j == ny_ / 2;
  }

  /// Storage index of the mode (-kx, -ky).
  std::size_t conjugate_index(int i, int j) const noexcept {
    return index((nx_ - i) % nx_, (ny_ - j) % ny_);
  }

  /// Sorted lattices, ascending from the Nyquist frequency.
  std::vector<double> xi_lattice() const;
  std::vector<double> q_lattice() const;

  bool operator==(const Grid& other) const noexcept = default;

 private:
  int nx_;
  int ny_;
  double length_x_;
  double lambda_y_;
};

/// A point zeta = (xi, q) of frequency space.
struct FrequencyPair {
  double xi = 0.0;
  double q = 0.0;
};

/// Physical-space samples u(x_i, y_j).
struct RealField {
  Grid grid;
  std::vector<double> values;

  explicit RealField(const Grid& g) : grid(g), values(g.size(), 0.0) {}
  RealField(const Grid& g, std::vector<double> v);

  double& at(int i, int j) { return values[grid.index(i, j)]; }
  double at(int i, int j) const { return values[grid.index(i, j)]; }
};

/// Fourier coefficients u^(xi, q) in the measure-weighted convention
/// u^ = sum u e^{-i(xi x + q y)} dx dy.
struct SpectralField {
  Grid grid;
  std::vector<std::complex<double>> coeffs;

  explicit SpectralField(const Grid& g) : grid(g), coeffs(g.size()) {}
  SpectralField(const Grid& g, std::vector<std::complex<double>> c);

  std::complex<double>& at(int i, int j) { return coeffs[grid.index(i, j)]; }
  const std::complex<double>& at(int i, int j) const {
    return coeffs[grid.index(i, j)];
  }
};

/// True for positive integral powers of two.
bool is_power_of_two(long long n) noexcept;

}  // namespace kplab::spectral
