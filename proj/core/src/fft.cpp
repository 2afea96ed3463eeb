#include "kplab/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <utility>
#include <vector>

#include "kplab/errors.hpp"

namespace kplab::spectral {
namespace {

// FFTW's planner is not re-entrant; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(std::complex<double>* p) {
  return reinterpret_cast<fftw_complex*>(p);
}

}  // namespace

Fft::Fft(int nx, int ny) : nx_(nx), ny_(ny) {
  if (nx <= 0 || ny <= 0) throw InvalidArgument("Fft: sizes must be positive");
  std::vector<std::complex<double>> scratch(static_cast<std::size_t>(nx) * ny);
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  std::lock_guard lock(planner_mutex());
  // FFTW is row-major: the slow dimension (y) comes first.
  forward_plan_ = fftw_plan_dft_2d(ny, nx, as_fftw(scratch.data()),
                                   as_fftw(scratch.data()), FFTW_FORWARD, flags);
  backward_plan_ = fftw_plan_dft_2d(ny, nx, as_fftw(scratch.data()),
                                    as_fftw(scratch.data()), FFTW_BACKWARD, flags);
  if (forward_plan_ == nullptr || backward_plan_ == nullptr) {
    throw InvalidArgument("Fft: FFTW planner failed");
  }
}

Fft::~Fft() {
  if (forward_plan_ == nullptr && backward_plan_ == nullptr) return;
  std::lock_guard lock(planner_mutex());
  if (forward_plan_) fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  if (backward_plan_) fftw_destroy_plan(static_cast<fftw_plan>(backward_plan_));
}

Fft::Fft(Fft&& other) noexcept
    : nx_(other.nx_),
      ny_(other.ny_),
      forward_plan_(std::exchange(other.forward_plan_, nullptr)),
      backward_plan_(std::exchange(other.backward_plan_, nullptr)) {}

Fft& Fft::operator=(Fft&& other) noexcept {
  if (this != &other) {
    Fft tmp(std::move(other));
    std::swap(nx_, tmp.nx_);
    std::swap(ny_, tmp.ny_);
    std::swap(forward_plan_, tmp.forward_plan_);
    std::swap(backward_plan_, tmp.backward_plan_);
  }
  return *this;
}

void Fft::forward(std::span<std::complex<double>> data) const {
  if (data.size() != static_cast<std::size_t>(nx_) * ny_) {
    throw InvalidArgument("Fft::forward: size mismatch");
  }
  fftw_execute_dft(static_cast<fftw_plan>(forward_plan_), as_fftw(data.data()),
                   as_fftw(data.data()));
}

void Fft::backward(std::span<std::complex<double>> data) const {
  if (data.size() != static_cast<std::size_t>(nx_) * ny_) {
    throw InvalidArgument("Fft::backward: size mismatch");
  }
  fftw_execute_dft(static_cast<fftw_plan>(backward_plan_), as_fftw(data.data()),
                   as_fftw(data.data()));
}

}  // namespace kplab::spectral
