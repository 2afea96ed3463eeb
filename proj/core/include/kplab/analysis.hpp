#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "kplab/grid.hpp"

namespace kplab::analysis {

using spectral::FrequencyPair;
using spectral::Grid;
using spectral::RealField;

// ---------------------------------------------------------------- resonance

/// Three frequencies on the hyperplane zeta1 + zeta2 + zeta3 = 0.
struct ResonanceTriple {
  FrequencyPair zeta1, zeta2, zeta3;
};

/// Builds (zeta1, zeta2, -(zeta1 + zeta2)).
ResonanceTriple close_triple(FrequencyPair zeta1, FrequencyPair zeta2);

/// Throws HyperplaneViolation when the sums miss zero by more than
/// 1e-12 (relative to the largest entry, at least 1), DomainError when a
/// xi vanishes.
void validate(const ResonanceTriple& t);

/// omega(zeta1) + omega(zeta2) + omega(zeta3).
double resonance(const ResonanceTriple& t);

/// -(xi1 xi2 / (xi1 + xi2)) (3 (xi1 + xi2)^2 - (q1/xi1 - q2/xi2)^2)
double resonance_factored(const ResonanceTriple& t);

/// -3 xi1 xi2 xi3 + (xi1 q2 - xi2 q1)^2 / (xi1 xi2 xi3). Equals -resonance.
double resonance_expanded(const ResonanceTriple& t);

/// |omega1| + |omega2| + |omega3|, the scale relative errors are taken against.
double resonance_scale(const ResonanceTriple& t);

/// 2 |q1/xi1 - (q - q1)/(xi - xi1)|. DomainError when a denominator vanishes.
double resonance_gradient_q1(double xi, double q, double xi1, double q1);

/// Centered difference in q1 of resonance((xi1,q1), (xi-xi1, q-q1), -(xi,q)),
/// in absolute value.
double resonance_gradient_q1_fd(double xi, double q, double xi1, double q1, double h);

// ----------------------------------------------------------------- measures

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
};

/// phi(x) = a x^2 + b x + c; affine when a == 0.
struct Polynomial2 {
  double a = 0.0, b = 0.0, c = 0.0;
  double operator()(double x) const { return (a * x + b) * x + c; }
  static Polynomial2 affine(double slope, double offset) { return {0.0, slope, offset}; }
};

struct LevelSetQuery {
  Polynomial2 phi;
  Interval J;
  Interval I;
  /// When set, x ranges over J intersected with (1/lambda) Z and the
  /// measure is counting measure scaled by 1/lambda. lambda >= 1.
  std::optional<double> lattice_lambda;
};

struct MeasureResult {
  double measured = 0.0;
  double bound = 0.0;
  bool holds = false;
};

inline constexpr double kCalibrationConstant = 4.0;

/// <a> = sqrt(1 + a^2)
double japanese_bracket(double a);

/// inf over J of |phi'|.
double min_abs_derivative(const Polynomial2& phi, Interval J);

/// The preimage {x in J : phi(x) in I} as disjoint closed intervals.
std::vector<Interval> preimage(const Polynomial2& phi, Interval I, Interval J);

/// (1/lambda) #{x in S cap (1/lambda) Z : phi(x) in I} for S = union of
/// `parts`, with membership decided by evaluating phi at the lattice points.
double lattice_measure(const Polynomial2& phi, Interval I, const std::vector<Interval>& parts,
                       double lambda);

/// Continuous: bound |I| / inf_J |phi'|. Lattice: bound 4 <|I| / inf_J |phi'|>.
/// Throws DegenerateDerivative when inf_J |phi'| = 0.
MeasureResult level_set_measure(const LevelSetQuery& q);

/// Level set of a x^2 + b x + c in I over the whole line (or lattice).
/// Bound 4 |I|^{1/2} / |a|^{1/2}, or 4 <|I|^{1/2} / |a|^{1/2}> on a lattice.
/// Throws DegenerateDerivative when a == 0.
MeasureResult parabola_level_measure(double a, double b, double c, Interval I,
                                     std::optional<double> lattice_lambda = std::nullopt);

/// A set in the (xi, q) plane given by its q-section measure s(xi), which
/// is piecewise linear between the nodes (repeated nodes allow jumps).
struct SectionProfile {
  std::vector<double> nodes;   // nondecreasing
  std::vector<double> values;  // s >= 0 at each node
};

/// (1/lambda) #((1/lambda) Z cap [lo, hi])
double lattice_section(double lo, double hi, double lambda);

/// measured = integral of s, bound = c_sections |I|. Requires the profile
/// to live inside I and s <= c_sections (InvalidArgument otherwise).
MeasureResult section_projection_measure(const SectionProfile& set, Interval I,
                                         double c_sections);

// ------------------------------------------------------------------ sobolev

struct SobolevCheck {
  double lhs = 0.0;            // int u^3
  double rhs_literal = 0.0;      // 2 |u|^{3/2} |u_x| |d_x^{-1} u_y|^{1/2}
  double rhs_corrected = 0.0;  // 2 |u|^{3/2} |u_x| (|d_x^{-1} u_y| + |u|)^{1/2}
  double ratio = 0.0;          // lhs / rhs_corrected, 0 when both vanish
};

/// Requires the zero-x-mean constraint (ConstraintViolation).
SobolevCheck anisotropic_sobolev_check(const RealField& u);

// ------------------------------------------------------------- randomness

/// Independent generator for sample `index` of stream `stream` under
/// `seed`; the same triple always yields the same sequence.
std::mt19937_64 sample_engine(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

/// Real field with Gaussian coefficients on |kx| <= nx/4, |ky| <= ny/4,
/// decaying like (1 + xi^2 + q^2)^{-1}, zero x-mean (including the (0,0)
/// mode). With y_dependent, at least one ky != 0 mode is nonzero; without,
/// only ky = 0 modes are populated.
RealField random_band_limited_field(const Grid& g, std::mt19937_64& rng, bool y_dependent);

// ------------------------------------------------------------------- suites

struct SuiteReport {
  std::string name;
  std::uint64_t samples = 0;
  std::uint64_t failures = 0;
  /// Largest error/tolerance (resonance), measured/bound (measure) or
  /// lhs/rhs_corrected (sobolev) seen.
  double worst_ratio = 0.0;
  std::uint64_t seed = 0;
};

inline constexpr double kResonanceTolerance = 1e-10;
inline constexpr double kGradientTolerance = 1e-6;

SuiteReport verify_resonance(std::uint64_t samples, std::uint64_t seed);
SuiteReport verify_measure(std::uint64_t samples, std::uint64_t seed);
SuiteReport verify_sobolev(std::uint64_t samples, std::uint64_t seed);

/// "resonance", "measure", "sobolev" or "all" (the three in that order).
/// Throws InvalidArgument for other names.
std::vector<SuiteReport> run_suite(const std::string& name, std::uint64_t samples,
                                   std::uint64_t seed);

}  // namespace kplab::analysis
