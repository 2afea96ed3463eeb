#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "kplab/errors.hpp"
#include "kplab/soliton.hpp"
#include "kplab/spectral.hpp"
#include "test_fields.hpp"

using namespace kplab;
using namespace kplab::stability;
using kplab::spectral::forward_transform;
using kplab::spectral::inverse_transform;
using kplab::spectral::sample;

namespace {
constexpr double kPi = std::numbers::pi;

RealField add(const RealField& a, const RealField& b, double s) {
  RealField r = a;
  for (std::size_t k = 0; k < r.values.size(); ++k) r.values[k] += s * b.values[k];
  return r;
}

// min over a uniform shift grid of spacing `step` of |u - Q_c(. - a)|_E.
double scan_distance(const RealField& u, double c, double step) {
  const SpectralField uh = forward_transform(u);
  const SpectralField qh = forward_transform(soliton_profile({c, 0.0}, u.grid));
  const double half = 0.5 * u.grid.length_x();
  double best = std::numeric_limits<double>::infinity();
  for (double a = -half; a < half; a += step) {
    SpectralField d = spectral::shift_x(qh, a);
    for (std::size_t k = 0; k < d.coeffs.size(); ++k) d.coeffs[k] = uh.coeffs[k] - d.coeffs[k];
    best = std::min(best, spectral::energy_norm(d));
  }
  return best;
}
}  // namespace

TEST(Soliton, PeakAndShape) {
  EXPECT_DOUBLE_EQ(soliton_value(1.0, 0.0), 3.0);
  EXPECT_DOUBLE_EQ(soliton_value(4.0, 0.0), 12.0);
  for (double x : {0.3, -1.0, 2.5, 7.0}) {
    const double s = 1.0 / std::cosh(x);
    EXPECT_NEAR(soliton_value(4.0, x), 12.0 * s * s, 1e-13 * 12.0);
    EXPECT_EQ(soliton_value(1.0, x), soliton_value(1.0, -x));
  }
  EXPECT_EQ(soliton_value(1.0, 1e4), 0.0);
}

TEST(Soliton, ProfileOnGrid) {
  const Grid g(512, 4, 64.0);
  const RealField q = soliton_profile({1.0, 0.0}, g);
  EXPECT_DOUBLE_EQ(q.at(256, 0), 3.0);
  EXPECT_DOUBLE_EQ(q.at(256, 3), 3.0);
  for (int i = 1; i < 256; ++i) EXPECT_DOUBLE_EQ(q.at(256 + i, 1), q.at(256 - i, 1));
  double integral = 0.0;
  for (int i = 0; i < g.nx(); ++i) integral += q.at(i, 0) * g.dx();
  const double quad = kplab::testing::simpson(
      [](double x) { return 3.0 / std::pow(std::cosh(x / 2.0), 2); }, -40.0, 40.0, 20000);
  EXPECT_NEAR(integral, quad, 1e-10);
  EXPECT_NEAR(quad, 12.0, 1e-9);
}

TEST(Soliton, ShiftedCenter) {
  const Grid g(512, 4, 64.0);
  const RealField q = soliton_profile({2.0, 4.0}, g);
  EXPECT_DOUBLE_EQ(q.at(256 + 32, 0), 6.0);  // x = 4 at i = 288
}

TEST(Soliton, BoxTooSmall) {
  EXPECT_THROW(soliton_profile({1.0, 0.0}, Grid(256, 4, 20.0)), DomainTooSmall);
  EXPECT_THROW(soliton_profile({1.0, 25.0}, Grid(256, 4, 64.0)), DomainTooSmall);
  EXPECT_NO_THROW(soliton_profile({0.5, 0.0}, Grid(256, 4, 64.0 * kPi)));
  EXPECT_THROW(soliton_profile({0.0, 0.0}, Grid(256, 4, 64.0)), InvalidArgument);
}

TEST(OrbitalDistance, ExactSolitonAndTranslate) {
  const Grid g(256, 8, 64.0);
  const OrbitalDistance d0 = orbital_distance(soliton_profile({1.0, 0.0}, g), 1.0);
  EXPECT_LT(d0.distance, 1e-10);
  EXPECT_NEAR(d0.best_shift, 0.0, 1e-8);

  const double a = 1.2345;
  const OrbitalDistance d1 = orbital_distance(soliton_profile({1.0, a}, g), 1.0);
  EXPECT_LT(d1.distance, 1e-8);
  EXPECT_NEAR(d1.best_shift, a, 1e-5);

  const Grid wide(512, 8, 128.0);
  const OrbitalDistance d2 = orbital_distance(soliton_profile({1.0, -20.0}, wide), 1.0);
  EXPECT_NEAR(d2.best_shift, -20.0, 1e-5);
}

TEST(OrbitalDistance, SmallPerturbationAgainstFineScan) {
  const Grid g(256, 8, 64.0);
  const RealField q = soliton_profile({1.0, 0.0}, g);
  const RealField p = transverse_perturbation(g, {2.0 * kPi / 64.0 * 3.0, 1.0});
  const double delta = 1e-3;
  const RealField u = add(q, p, delta);
  const OrbitalDistance d = orbital_distance(u, 1.0);
  EXPECT_GE(d.distance, 0.0);
  EXPECT_LE(d.distance, delta * spectral::energy_norm(p) * (1.0 + 1e-12));
  const double brute = scan_distance(u, 1.0, g.dx() / 10.0);
  EXPECT_LE(d.distance, brute + 1e-12);
  EXPECT_GE(d.distance, brute - 1e-6);
}

TEST(OrbitalDistance, AsymmetricDataAgainstFineScan) {
  const Grid g(256, 8, 64.0);
  const RealField q = soliton_profile({1.0, 0.7}, g);
  const RealField p = kplab::testing::random_field(g, 3);
  const RealField u = add(q, p, 0.2 / kplab::testing::max_abs(p));
  const OrbitalDistance d = orbital_distance(u, 1.0);
  const double brute = scan_distance(u, 1.0, g.dx() / 10.0);
  EXPECT_LE(d.distance, brute + 1e-12);
  EXPECT_GE(d.distance, brute - 1e-4);
}

TEST(OrbitalDistance, TranslationInvariant) {
  const Grid g(256, 8, 64.0);
  const RealField base = add(soliton_profile({1.0, 0.0}, g), kplab::testing::random_field(g, 4),
                             0.01);
  const double d = orbital_distance(base, 1.0).distance;
  for (double a : {0.37, -5.21, 13.9}) {
    const RealField moved = inverse_transform(spectral::shift_x(forward_transform(base), a));
    EXPECT_NEAR(orbital_distance(moved, 1.0).distance, d, 1e-8) << a;
  }
}

TEST(OrbitalDistance, MeterRejectsOtherGrid) {
  const OrbitMeter meter(Grid(256, 8, 64.0), 1.0);
  EXPECT_THROW(meter(RealField(Grid(128, 8, 64.0))), InvalidArgument);
  EXPECT_DOUBLE_EQ(meter.speed(), 1.0);
}

TEST(Perturbation, UnitEnergyNormAndLattice) {
  const Grid g(256, 16, 64.0);
  const RealField p = transverse_perturbation(g, {2.0 * kPi / 64.0, 1.0});
  EXPECT_NEAR(spectral::energy_norm(p), 1.0, 1e-13);
  EXPECT_THROW(transverse_perturbation(g, {0.1, 1.0}), GridIncompatible);
  EXPECT_THROW(transverse_perturbation(g, {2.0 * kPi / 64.0, 0.5}), GridIncompatible);
  EXPECT_THROW(transverse_perturbation(g, {0.0, 1.0}), InvalidArgument);
}

TEST(StabilityRun, UnperturbedSolitonStaysPut) {
  StabilityRunConfig cfg;
  cfg.c = 1.0;
  cfg.delta = 0.0;
  cfg.t_end = 20.0;
  cfg.solver.dt = 0.01;
  cfg.solver.record_every = 100;
  const StabilityRun run = run_stability_experiment(cfg);
  EXPECT_FALSE(run.blew_up);
  ASSERT_EQ(run.records.size(), 21u);
  for (const auto& r : run.records) {
    ASSERT_TRUE(r.orbital_distance.has_value());
    EXPECT_LT(*r.orbital_distance, 1e-6);
  }
}

TEST(StabilityRun, SmallPerturbationShortRun) {
  StabilityRunConfig cfg;
  cfg.c = 1.0;
  cfg.delta = 1e-2;
  cfg.perturbation_mode = {2.0 * kPi / 64.0, 1.0};
  cfg.t_end = 2.0;
  cfg.solver.dt = 0.01;
  cfg.solver.record_every = 20;
  const StabilityRun run = run_stability_experiment(cfg);
  EXPECT_NEAR(run.records.front().orbital_distance.value(), 1e-2, 1e-3);
  EXPECT_LE(run.sup_distance(), 0.1);
  EXPECT_FALSE(run.first_exceedance(0.1).has_value());
}

TEST(StabilityRun, RejectsDelta) {
  StabilityRunConfig cfg;
  cfg.delta = 1.0;
  EXPECT_THROW(run_stability_experiment(cfg), InvalidArgument);
  cfg.delta = -0.1;
  EXPECT_THROW(run_stability_experiment(cfg), InvalidArgument);
}

TEST(StabilityRun, Summaries) {
  StabilityRun run;
  for (double t : {0.0, 1.0, 2.0, 3.0}) {
    solver::DiagnosticsRecord r;
    r.t = t;
    r.orbital_distance = 0.01 * std::exp(t);
    run.records.push_back(r);
  }
  EXPECT_DOUBLE_EQ(run.sup_distance(), 0.01 * std::exp(3.0));
  EXPECT_EQ(run.first_exceedance(0.05), std::optional<double>(2.0));
  EXPECT_FALSE(run.first_exceedance(1.0).has_value());
}
