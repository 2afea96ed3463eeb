#pragma once

#include "kplab/grid.hpp"

namespace kplab::spectral {

/// Smooth even cutoff: 1 on [-5/4, 5/4], 0 outside [-8/5, 8/5], with an
/// exp(-1/t) transition in between.
double bump_chi(double x);

/// eta_M(xi) = chi(xi / M) - chi(2 xi / M).
double dyadic_eta(double xi, double M);

/// P_M: multiplier eta_M(xi). M must be an integral power of two.
SpectralField lp_projector(const SpectralField& f, double M);
RealField lp_projector(const RealField& u, double M);

/// P_{<=M}: multiplier chi(xi / M).
SpectralField lp_projector_leq(const SpectralField& f, double M);
RealField lp_projector_leq(const RealField& u, double M);

/// P_Low = P_{<= 2^-5}, P_High = 1 - P_Low.
SpectralField p_low(const SpectralField& f);
SpectralField p_high(const SpectralField& f);

/// True when M = 2^k for an integer k (k may be negative).
bool is_dyadic(double M) noexcept;

}  // namespace kplab::spectral
