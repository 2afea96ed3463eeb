#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "kdv_oracle.hpp"
#include "kplab/errors.hpp"
#include "kplab/soliton.hpp"
#include "kplab/solver.hpp"
#include "test_fields.hpp"

using namespace kplab;
using namespace kplab::solver;
using kplab::spectral::sample;
using kplab::testing::max_abs;
using kplab::testing::max_abs_diff;
using kplab::testing::random_field;

namespace {
constexpr double kPi = std::numbers::pi;

SolverConfig config(double dt, double t_end, double frame = 0.0) {
  SolverConfig c;
  c.dt = dt;
  c.t_end = t_end;
  c.moving_frame_speed = frame;
  return c;
}

RealField scaled(RealField u, double a) {
  for (double& v : u.values) v *= a;
  return u;
}

RealField soliton(const Grid& g, double c, double x0 = 0.0) {
  return stability::soliton_profile({c, x0}, g);
}
}  // namespace

TEST(SolverConfig, Validation) {
  EXPECT_NO_THROW(config(0.1, 1.0).validate());
  EXPECT_EQ(config(0.1, 1.0).steps(), 10);
  EXPECT_THROW(config(0.0, 1.0).validate(), InvalidArgument);
  EXPECT_THROW(config(-1.0, 1.0).validate(), InvalidArgument);
  EXPECT_THROW(config(0.3, 1.0).validate(), InvalidArgument);
  EXPECT_THROW(config(0.1, 0.0).validate(), InvalidArgument);
  SolverConfig c = config(0.1, 1.0);
  c.record_every = 0;
  EXPECT_THROW(c.validate(), InvalidArgument);
  c = config(0.1, 1.0);
  c.epsilon_sign = 0;
  EXPECT_THROW(c.validate(), InvalidArgument);
}

TEST(NonlinearTerm, ZeroAndCosine) {
  const Grid g(64, 4, 2.0 * kPi);
  EXPECT_EQ(max_abs(nonlinear_term(SpectralField(g))), 0.0);
  const SpectralField u =
      spectral::forward_transform(sample(g, [](double x, double) { return std::cos(x); }));
  const RealField n = spectral::inverse_transform(nonlinear_term(u));
  const RealField expect = sample(g, [](double x, double) { return 0.5 * std::sin(2.0 * x); });
  EXPECT_LT(max_abs_diff(n, expect), 1e-13);
}

TEST(NonlinearTerm, OutputHasZeroXMean) {
  const Grid g(64, 16, 10.0);
  const SpectralField n = nonlinear_term(spectral::forward_transform(random_field(g, 3)));
  for (int j = 0; j < g.ny(); ++j) EXPECT_EQ(std::abs(n.at(0, j)), 0.0);
}

TEST(NonlinearTerm, DealiasingRemovesTopThird) {
  const Grid g(64, 16, 10.0);
  const SpectralField n = nonlinear_term(spectral::forward_transform(random_field(g, 4)), true);
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      if (3 * std::abs(g.kx(i)) > g.nx() || 3 * std::abs(g.ky(j)) > g.ny()) {
        EXPECT_EQ(std::abs(n.at(i, j)), 0.0);
      }
    }
  }
}

TEST(Step, LinearPartIsExact) {
  const Grid g(64, 16, 12.0, 2.0);
  const RealField u0 = random_field(g, 5);
  SpectralField f = spectral::forward_transform(u0);
  spectral::zero_nyquist(f);
  for (int sign : {-1, 1}) {
    for (double t : {0.37, 2.9}) {
      SolverConfig c = config(t / 5.0, t);
      c.nonlinear = false;
      c.epsilon_sign = sign;
      const RealField evolved = evolve(u0, c).final_field;
      const RealField exact = spectral::inverse_transform(spectral::apply_linear_group(f, t, sign));
      EXPECT_LT(max_abs_diff(evolved, exact), 1e-13 * max_abs(u0)) << t;
    }
  }
}

TEST(Step, FourthOrderConvergence) {
  const Grid g(128, 8, 64.0);
  RealField u0 = soliton(g, 1.0);
  const RealField p = random_field(g, 6);
  const double s = 0.3 / max_abs(p);
  for (std::size_t k = 0; k < u0.values.size(); ++k) u0.values[k] += s * p.values[k];
  const double t = 1.0;
  const RealField ref = evolve(u0, config(t / 320, t)).final_field;
  const double e1 = max_abs_diff(evolve(u0, config(t / 20, t)).final_field, ref);
  const double e2 = max_abs_diff(evolve(u0, config(t / 40, t)).final_field, ref);
  EXPECT_GE(e1 / e2, 14.0);
  EXPECT_LE(e1 / e2, 18.0);
}

TEST(Step, SolitonIsStationaryInMovingFrame) {
  const Grid g(512, 4, 64.0);
  const RealField q = soliton(g, 1.0);
  const RealField r = evolve(q, config(1e-3, 1.0, 1.0)).final_field;
  EXPECT_LT(max_abs_diff(r, q), 1e-8);
}

TEST(Step, ConstraintIsReprojected) {
  const Grid g(64, 16, 10.0);
  SpectralField f = spectral::forward_transform(random_field(g, 8));
  const std::complex<double> mean = f.at(0, 0);
  const SolverConfig c = config(0.01, 0.05);
  Integrator it(g, c);
  for (int n = 0; n < 5; ++n) {
    it.advance(f);
    for (int j = 1; j < g.ny(); ++j) EXPECT_EQ(std::abs(f.at(0, j)), 0.0);
    EXPECT_EQ(f.at(0, 0), mean);
  }
}

TEST(Step, BlowupIsReportedWithTime) {
  const Grid g(32, 4, 10.0);
  const RealField u = scaled(random_field(g, 9), 1e7 / max_abs(random_field(g, 9)));
  try {
    evolve(u, config(0.01, 0.1));
    FAIL() << "expected BlowupDetected";
  } catch (const BlowupDetected& e) {
    EXPECT_NEAR(e.time(), 0.01, 1e-15);
  }
}

TEST(Evolve, ZeroStaysZero) {
  const Grid g(32, 8, 10.0);
  const EvolveResult r = evolve(RealField(g), config(0.1, 1.0));
  EXPECT_EQ(max_abs(r.final_field), 0.0);
  EXPECT_EQ(r.records.size(), 11u);
}

TEST(Evolve, RecordCadence) {
  const Grid g(32, 8, 10.0);
  SolverConfig c = config(0.1, 1.0);
  c.record_every = 3;
  const EvolveResult r = evolve(random_field(g, 10), c);
  ASSERT_EQ(r.records.size(), 5u);  // 0, 3, 6, 9, 10
  EXPECT_DOUBLE_EQ(r.records[1].t, 0.30000000000000004);
  EXPECT_DOUBLE_EQ(r.records.back().t, 1.0);
}

TEST(Evolve, SolitonTravelsAtItsSpeed) {
  const Grid g(512, 4, 80.0);
  const double x0 = -3.0;
  const RealField r = evolve(soliton(g, 1.0, x0), config(1e-3, 1.0)).final_field;
  int best = 0;
  for (int i = 1; i < g.nx(); ++i) {
    if (r.at(i, 0) > r.at(best, 0)) best = i;
  }
  EXPECT_LE(std::abs(g.x(best) - (x0 + 1.0)), g.dx());
}

TEST(Evolve, LabAndMovingFramesAgree) {
  const Grid g(512, 4, 64.0);
  const double c = 1.5;
  const RealField lab = evolve(soliton(g, c), config(1e-3, 1.0)).final_field;
  const RealField moving = evolve(soliton(g, c), config(1e-3, 1.0, c)).final_field;
  const RealField back =
      spectral::inverse_transform(spectral::shift_x(spectral::forward_transform(lab), -c));
  EXPECT_LT(max_abs_diff(back, moving), 1e-8);
}

TEST(Evolve, YIndependentDataMatchesKdvReference) {
  const Grid g(128, 8, 30.0);
  const RealField line = random_field(g, 11, false);
  const RealField u0 = scaled(line, 1.0 / max_abs(line));
  const double dt = 1e-3;
  const RealField u = evolve(u0, config(dt, 1.0)).final_field;

  double spread = 0.0;
  for (int j = 1; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) spread = std::max(spread, std::abs(u.at(i, j) - u.at(i, 0)));
  }
  EXPECT_LT(spread, 1e-10);

  const std::vector<double> row(u0.values.begin(), u0.values.begin() + g.nx());
  const auto ref = kplab::testing::KdvReference(g.nx(), g.length_x(), dt).run(row, 1000);
  double diff = 0.0;
  for (int i = 0; i < g.nx(); ++i) diff = std::max(diff, std::abs(u.at(i, 0) - ref[i]));
  EXPECT_LT(diff, 1e-6);
}

TEST(Evolve, ShortRunConservation) {
  const Grid g(256, 16, 64.0);
  const EvolveResult r = evolve(soliton(g, 1.0), config(1e-3, 0.5));
  const auto& a = r.records.front();
  const auto& b = r.records.back();
  EXPECT_LT(std::abs(b.mass - a.mass) / a.mass, 1e-8);
  EXPECT_LT(std::abs(b.energy - a.energy) / std::abs(a.energy), 1e-6);
}

TEST(Evolve, EnergyNormIdentityAndChain) {
  const Grid g(64, 16, 20.0);
  const RealField u0 = scaled(random_field(g, 12), 0.05 / max_abs(random_field(g, 12)));
  SolverConfig c = config(0.01, 1.0);
  c.record_every = 10;
  const EvolveResult r = evolve(u0, c);
  for (const auto& rec : r.records) {
    const double e2 = rec.energy_norm * rec.energy_norm;
    EXPECT_LE(e2, rec.mass + rec.energy + 2.0 * rec.mass * e2);
  }
  const RealField& u = r.final_field;
  double cube = 0.0;
  for (double v : u.values) cube += v * v * v;
  cube *= g.dx() * g.dy();
  const double n = spectral::energy_norm(u);
  EXPECT_NEAR(n * n, spectral::mass(u) + spectral::energy(u) + cube / 3.0, 1e-10 * n * n);
}

TEST(Stationarity, SolitonResidualIsSmall) {
  const Grid g(1024, 4, 64.0 * kPi);
  for (double c : {0.5, 1.0, 2.0}) {
    EXPECT_LT(stationarity_residual(soliton(g, c), c), 1e-8) << c;
  }
  EXPECT_GT(stationarity_residual(scaled(soliton(g, 1.0), 2.0), 1.0), 1e-2);
  EXPECT_EQ(stationarity_residual(RealField(g), 1.0), 0.0);
}

TEST(Rescale, IdentityAmplitudeAndGrid) {
  const Grid g(64, 8, 20.0);
  const RealField u = random_field(g, 13);
  EXPECT_EQ(max_abs_diff(rescale(u, 1.0), u), 0.0);
  const RealField r = rescale(u, 4.0);
  EXPECT_DOUBLE_EQ(r.grid.length_x(), 40.0);
  EXPECT_DOUBLE_EQ(r.grid.lambda_y(), 4.0);
  EXPECT_DOUBLE_EQ(spectral::linf_norm(r), spectral::linf_norm(u) / 4.0);
  EXPECT_THROW(rescale(u, 2.0), GridIncompatible);
  EXPECT_THROW(rescale(u, 3.0), GridIncompatible);
  EXPECT_THROW(rescale(u, 0.25), GridIncompatible);
}

TEST(Rescale, CommutesWithEvolution) {
  const Grid g(64, 16, 20.0);
  const RealField u0 = scaled(random_field(g, 14), 1.0 / max_abs(random_field(g, 14)));
  const double T = 0.8;
  const double dt = 0.01;
  const RealField a = evolve(rescale(u0, 4.0), config(dt, T)).final_field;
  const RealField b = rescale(evolve(u0, config(dt / 8.0, T / 8.0)).final_field, 4.0);
  EXPECT_LT(max_abs_diff(a, b), 1e-6);
}

TEST(Rescale, NormRatioBounded) {
  const Grid g(64, 16, 20.0);
  for (unsigned s : {15u, 16u, 17u}) {
    const RealField u = random_field(g, s);
    for (double lam : {1.0, 4.0, 16.0}) EXPECT_LE(scaling_norm_ratio(u, lam), 1.0 + 1e-12);
  }
}

TEST(Diagnostics, CsvLayout) {
  std::vector<DiagnosticsRecord> recs(2);
  recs[0] = {0.0, 1.5, -2.0, 1.0, 3.0, 0.5, std::nullopt};
  recs[1] = {0.1, 1.5, -2.0, 1.0, 3.0, 0.5, 0.25};
  std::ostringstream out;
  write_diagnostics_csv(out, recs);
  EXPECT_EQ(out.str(),
            "t,mass,energy,hamiltonian_c,energy_norm,linf,orbital_distance\n"
            "0,1.5,-2,1,3,0.5,\n"
            "0.1,1.5,-2,1,3,0.5,0.25\n");
}

TEST(Diagnostics, HamiltonianUsesGivenSpeed) {
  const Grid g(256, 4, 64.0);
  const RealField q = soliton(g, 1.0);
  const DiagnosticsRecord d = diagnose(q, 0.0, 2.0);
  EXPECT_DOUBLE_EQ(d.hamiltonian_c, d.energy + 2.0 * d.mass);
  EXPECT_DOUBLE_EQ(d.linf, 3.0);
}
