#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "rvdp/analysis.hpp"
#include "rvdp/ode.hpp"
#include "rvdp/pde.hpp"

using namespace rvdp;

namespace {

ModelParams make(double omega0, double epsilon, double delta, double mu, double amp = 1.0) {
  ModelParams p;
  p.omega0 = omega0;
  p.epsilon = epsilon;
  p.delta = delta;
  p.mu = mu;
  p.amp = amp;
  return p;
}

std::vector<double> random_values(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  std::vector<double> out(n);
  for (auto& x : out) x = d(rng);
  return out;
}

double max_abs_field(const Field& f) {
  double m = 0.0;
  for (double v : f.values()) m = std::max(m, std::fabs(v));
  return m;
}

}  // namespace

TEST(StabilityCheck, LongDomainGridPasses) {
  const auto p = make(2.0, 1.0, 0.25, std::numbers::sqrt2);
  const auto r = stability_check(p, Grid1D(22.0, 1.0, 0.05, 0.01));
  EXPECT_NEAR(r.courant, 0.0566, 5e-5);
  EXPECT_TRUE(r.pass());
  EXPECT_NEAR(r.dt_limit, 0.1 * std::numbers::pi, 1e-15);
}

TEST(StabilityCheck, WarnsWithoutThrowing) {
  const auto p = make(1.0, 1.0, 1.0, 1.0);
  const auto r = stability_check(p, Grid1D(1.0, 10.0, 0.01, 0.02));
  EXPECT_NEAR(r.courant, 4.0, 1e-12);
  EXPECT_FALSE(r.courant_ok);
  EXPECT_TRUE(r.resolution_ok);
  EXPECT_NE(r.describe().find("warn"), std::string::npos);

  const auto coarse = stability_check(p, Grid1D(1.0, 10.0, 0.1, 1.0));
  EXPECT_FALSE(coarse.resolution_ok);
}

TEST(FirstStep, ZeroVelocityMatchesHalfStepTaylorOracle) {
  const auto p = make(1.2, 0.7, 0.3, 0.8);
  const Grid1D g(3.0, 1.0, 0.1, 0.01);
  const auto values = random_values(g.points(), 2);
  const Field u0(g, values, 0.0);
  const auto u1 = first_step(u0, InitialCondition{[](double) { return 0.0; }}, p, g, BoundarySpec::dirichlet_zero());
  EXPECT_EQ(u1[0], 0.0);
  EXPECT_EQ(u1[g.nx()], 0.0);
  const double dt = g.dt();
  for (std::size_t i = 1; i < g.nx(); ++i) {
    const double lap = (values[i + 1] - 2.0 * values[i] + values[i - 1]) / (g.dx() * g.dx());
    const double accel = (-p.omega0 * p.omega0 + 2.0 * p.mu) * values[i] + p.mu * lap;
    EXPECT_NEAR(u1[i], values[i] + 0.5 * dt * dt * accel, 1e-15);
  }
  EXPECT_DOUBLE_EQ(u1.time(), dt);
}

TEST(FirstStep, LocalErrorIsThirdOrderForExactWave) {
  const auto p = canonical_delta(make(1.0, 0.5, 0.0, 1.0));
  const auto spec = PlaneWaveSpec::travelling(p);
  const double length = spec.wavelength();
  const auto ic = wave_initial_condition(spec);
  std::vector<std::pair<double, double>> samples;
  for (double dt : {4e-3, 2e-3, 1e-3}) {
    // Very fine space so the time truncation dominates.
    const Grid1D g = Grid1D::from_counts(length, 1.0, 4096, static_cast<std::size_t>(std::llround(1.0 / dt)));
    const auto u0 = sample_initial(ic, g, BoundarySpec::periodic());
    const auto u1 = first_step(u0, ic, p, g, BoundarySpec::periodic());
    const auto e = error_norms(u1, [&](double x, double t) { return analytic_wave(spec, x, t); }, g);
    samples.emplace_back(dt, e.linf);
  }
  EXPECT_GT(convergence_order(samples), 2.7);
}

TEST(Step, ReducesToLeapfrogWithoutDamping) {
  const auto p = make(1.1, 0.0, 0.4, 0.6);
  const Grid1D g(2.0, 1.0, 0.1, 0.02);
  const auto a = random_values(g.points(), 7);
  const auto b = random_values(g.points(), 8);
  const Field prev(g, a, 0.0);
  const Field curr(g, b, g.dt());
  const auto next = step(prev, curr, SchemeCoefficients::from(p, g), BoundarySpec::dirichlet_zero(), g);
  const double dt2 = g.dt() * g.dt();
  for (std::size_t i = 1; i < g.nx(); ++i) {
    const double lap = (b[i + 1] - 2.0 * b[i] + b[i - 1]) / (g.dx() * g.dx());
    const double oracle = 2.0 * b[i] - a[i] + dt2 * ((-p.omega0 * p.omega0 + 2.0 * p.mu) * b[i] + p.mu * lap);
    EXPECT_NEAR(next[i], oracle, 1e-14);
  }
  EXPECT_DOUBLE_EQ(next.time(), 2.0 * g.dt());
}

TEST(Step, DampingTermUsesBackwardDifference) {
  const auto p = make(1.0, 0.9, 0.3, 0.0, 2.0);
  const Grid1D g(1.0, 1.0, 0.25, 0.1);
  const Field prev(g, {0.0, 0.2, 0.4, 0.1, 0.0}, 0.0);
  const Field curr(g, {0.0, 0.3, 0.1, 0.2, 0.0}, 0.1);
  const auto next = step(prev, curr, SchemeCoefficients::from(p, g), BoundarySpec::dirichlet_zero(), g);
  const double u = 0.3, w = (0.3 - 0.2) / 0.1, dt2 = 0.01;
  const double oracle = 2 * u - 0.2 + dt2 * (-u + 0.9 * (2.0 - u * u - 0.3 * w * w) * w);
  EXPECT_NEAR(next[1], oracle, 1e-15);
}

TEST(Step, RejectsMismatchedFields) {
  const Grid1D g(1.0, 1.0, 0.25, 0.1);
  const Grid1D other(1.0, 1.0, 0.5, 0.1);
  const Field a(g, std::vector<double>(5, 0.0), 0.0);
  const Field b(other, std::vector<double>(3, 0.0), 0.1);
  try {
    step(a, b, SchemeCoefficients::from(make(1, 0, 0, 0), g), BoundarySpec::periodic(), g);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::GridMismatch);
  }
}

TEST(Solve, DirichletEndsFollowTheirFunctions) {
  const auto p = make(1.0, 0.5, 1.0, 0.5);
  const Grid1D g(4.0, 2.0, 0.1, 0.01);
  const InitialCondition ic{[](double x) { return std::sin(x); }};
  const auto zero = solve(p, g, ic, BoundarySpec::dirichlet_zero(), 10);
  for (const auto& f : zero.snapshots) {
    if (f.time() == 0.0) continue;
    EXPECT_EQ(f[0], 0.0);
    EXPECT_EQ(f[g.nx()], 0.0);
  }
  const auto moving = solve(p, g, ic, BoundarySpec::dirichlet([](double t) { return t; },
                                                              [](double t) { return -2.0 * t; }), 10);
  for (const auto& f : moving.snapshots) {
    if (f.time() == 0.0) continue;
    EXPECT_EQ(f[0], f.time());
    EXPECT_EQ(f[g.nx()], -2.0 * f.time());
  }
}

TEST(Solve, PeriodicEndpointsStayIdentical) {
  const auto p = make(1.0, 0.5, 1.0, 0.5);
  const Grid1D g(2.0 * std::numbers::pi, 2.0, 0.05, 0.01);
  const InitialCondition ic{[](double x) { return std::exp(std::cos(x)) - 1.0; }};
  const auto r = solve(p, g, ic, BoundarySpec::periodic(), 7);
  for (const auto& f : r.snapshots) EXPECT_EQ(f[0], f[g.nx()]);
}

TEST(Solve, NeumannPreservesSymmetricProfile) {
  // A profile symmetric about the middle stays symmetric under mirrored ends.
  const auto p = make(1.0, 0.5, 1.0, 0.5);
  const Grid1D g(2.0, 2.0, 0.05, 0.01);
  const InitialCondition ic{[](double x) { return std::cos(std::numbers::pi * x); }};
  const auto r = solve(p, g, ic, BoundarySpec::neumann_zero(), g.nt());
  const auto& f = r.snapshots.back();
  for (std::size_t i = 0; i <= g.nx(); ++i) EXPECT_NEAR(f[i], f[g.nx() - i], 1e-12);
}

TEST(Solve, SnapshotScheduleIncludesFinalLevel) {
  const auto p = make(1.0, 0.1, 1.0, 0.1);
  const Grid1D g = Grid1D::from_counts(1.0, 1.0, 10, 25);
  const auto r = solve(p, g, InitialCondition{[](double x) { return x; }}, BoundarySpec::neumann_zero(), 10);
  ASSERT_EQ(r.snapshots.size(), 4u);  // levels 0, 10, 20, 25
  EXPECT_DOUBLE_EQ(r.snapshots[1].time(), 0.4);
  EXPECT_DOUBLE_EQ(r.snapshots.back().time(), 1.0);
}

TEST(Solve, Deterministic) {
  const auto p = canonical_delta(make(2.0, 1.0, 0.0, std::numbers::sqrt2));
  const Grid1D g(22.0, 1.0, 0.05, 0.001);
  const auto ic = wave_initial_condition(PlaneWaveSpec::travelling(p));
  const auto a = solve(p, g, ic, BoundarySpec::periodic(), 50);
  const auto b = solve(p, g, ic, BoundarySpec::periodic(), 50);
  EXPECT_EQ(a.snapshots, b.snapshots);
}

TEST(Solve, UniformFieldWithoutCouplingFollowsSingleOscillator) {
  const auto p = make(1.0, 0.5, 1.0, 0.0);
  const double duration = 5.0;
  const Grid1D g(1.0, duration, 0.1, 1e-4);
  const auto r = solve(p, g, InitialCondition{[](double) { return 0.5; }}, BoundarySpec::periodic(), g.nt());
  const auto& f = r.snapshots.back();
  for (std::size_t i = 1; i <= g.nx(); ++i) EXPECT_EQ(f[i], f[0]);

  const auto ode = integrate(bind_params(&rhs_homogeneous, p), OscState{0.5, 0.0}, 1e-3,
                             static_cast<std::size_t>(duration / 1e-3));
  EXPECT_NEAR(f[0], ode.states.back().u, 2e-3);
}

TEST(Solve, LongDomainWaveStaysBounded) {
  const auto p = canonical_delta(make(2.0, 1.0, 0.0, std::numbers::sqrt2));
  const Grid1D g(22.0, 1.0, 0.05, 0.001);
  const auto r = solve(p, g, wave_initial_condition(PlaneWaveSpec::travelling(p)), BoundarySpec::periodic(), 20);
  for (const auto& f : r.snapshots) {
    ASSERT_TRUE(f.all_finite());
    EXPECT_LE(max_abs_field(f), 1.5) << "t=" << f.time();
  }
}

TEST(Solve, ExactWaveErrorIsSmall) {
  const auto p = canonical_delta(make(1.0, 0.5, 0.0, 1.0));
  const auto spec = PlaneWaveSpec::travelling(p);
  const Grid1D g(spec.wavelength(), 2.0 * std::numbers::pi, spec.wavelength() / 512, 1e-3);
  const auto r = solve(p, g, wave_initial_condition(spec), BoundarySpec::periodic(), g.nt());
  const auto e = error_norms(r.snapshots.back(), [&](double x, double t) { return analytic_wave(spec, x, t); }, g);
  EXPECT_LT(e.linf, 5e-3);
}

TEST(Solve, BlowupReportsLevelAndSite) {
  // 2 mu >> omega0^2 with a coarse step: the k = 0 mode grows until it overflows.
  const auto p = make(1.0, 0.0, 0.0, 50.0);
  const Grid1D g(1.0, 200.0, 0.25, 0.1);
  try {
    solve(p, g, InitialCondition{[](double) { return 1.0; }}, BoundarySpec::periodic());
    FAIL();
  } catch (const BlowupError& e) {
    EXPECT_EQ(e.code(), ErrorCode::NumericalBlowup);
    EXPECT_GT(e.step(), 1u);
    EXPECT_TRUE(e.site().has_value());
  }
}

TEST(Solve, RejectsInvalidParameters) {
  const Grid1D g(1.0, 1.0, 0.25, 0.1);
  EXPECT_THROW(solve(make(-1.0, 0, 0, 0), g, InitialCondition{[](double) { return 0.0; }}, BoundarySpec::periodic()), Error);
  EXPECT_THROW(solve(make(1.0, 0, 0, 0), g, InitialCondition{}, BoundarySpec::periodic()), Error);
}
