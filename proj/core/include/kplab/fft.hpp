#pragma once

#include <complex>
#include <span>

namespace kplab::spectral {

/// Unnormalized in-place complex DFT of an nx * ny array stored x-fastest.
/// ny == 1 gives a 1-D transform. Each instance owns its own FFTW plans, so
/// instances may be used from different threads concurrently.
class Fft {
 public:
  Fft(int nx, int ny);
  ~Fft();
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;
  Fft(Fft&& other) noexcept;
  Fft& operator=(Fft&& other) noexcept;

  /// data <- sum data e^{-2 pi i (k i / nx + l j / ny)}
  void forward(std::span<std::complex<double>> data) const;
  /// data <- sum data e^{+2 pi i (...)}, no 1/N factor.
  void backward(std::span<std::complex<double>> data) const;

  int nx() const noexcept { return nx_; }
  int ny() const noexcept { return ny_; }

 private:
  int nx_ = 0;
  int ny_ = 0;
  void* forward_plan_ = nullptr;
  void* backward_plan_ = nullptr;
};

}  // namespace kplab::spectral
