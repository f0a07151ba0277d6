#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "rvdp/analysis.hpp"

using namespace rvdp;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSqrt2 = std::numbers::sqrt2;

ModelParams make(double omega0, double epsilon, double mu, double amp = 1.0) {
  ModelParams p;
  p.omega0 = omega0;
  p.epsilon = epsilon;
  p.mu = mu;
  p.amp = amp;
  return canonical_delta(p);
}

TimeSeries sample_series(double (*fn)(double), double t_end, double dt) {
  TimeSeries ts;
  const auto n = static_cast<std::size_t>(std::llround(t_end / dt));
  for (std::size_t k = 0; k <= n; ++k) {
    const double t = static_cast<double>(k) * dt;
    ts.t.push_back(t);
    ts.u.push_back(fn(t));
  }
  return ts;
}

}  // namespace

TEST(AnalyticWave, HandValues) {
  const PlaneWaveSpec s{1.0, 1.0, kSqrt2, +1, 1};
  EXPECT_EQ(analytic_wave(s, 0.0, 0.0), 0.0);
  EXPECT_NEAR(analytic_wave(s, 0.0, kPi / 2), 1.0, 1e-15);
  EXPECT_NEAR(analytic_wave(s, kPi / (2 * kSqrt2), 0.0), 1.0, 1e-15);
  EXPECT_NEAR(analytic_wave(PlaneWaveSpec{1.0, 2.0, kSqrt2, +1, 1}, 0.0, kPi / 4), 1.0, 1e-15);
  EXPECT_NEAR(analytic_wave(s, std::array<double, 3>{0.1, 0.2, 0.3}, 0.5), std::sin(0.5 + kSqrt2 * 0.6), 1e-15);
}

TEST(AnalyticWave, DerivedQuantities) {
  const auto s = PlaneWaveSpec::travelling(make(2.0, 1.0, 1.0, 4.0));
  EXPECT_EQ(s.amplitude, 2.0);
  EXPECT_EQ(s.omega, 2.0);
  EXPECT_DOUBLE_EQ(s.phase_velocity(), -2.0 / kSqrt2);
  EXPECT_DOUBLE_EQ(PlaneWaveSpec::travelling(make(2.0, 1.0, 1.0), -1).phase_velocity(), 2.0 / kSqrt2);
  EXPECT_DOUBLE_EQ(s.wavelength(), kPi * kSqrt2);
}

TEST(Residual, ExactWaveVanishesForAnyCoupling) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> pos(-10.0, 10.0), w(0.2, 3.0), m(0.0, 3.0), e(0.0, 2.0);
  for (int k = 0; k < 500; ++k) {
    const auto p = make(w(rng), e(rng), m(rng));
    const auto s = PlaneWaveSpec::travelling(p, k % 2 ? 1 : -1);
    const double x = pos(rng), t = pos(rng);
    EXPECT_LT(std::fabs(residual_pointwise(s, p, x, t)), 1e-12);
    EXPECT_LT(std::fabs(residual_pointwise(s, p, std::array<double, 3>{x, t, x - t}, t)), 1e-12);
  }
}

TEST(Residual, WrongWavenumberDoesNotSatisfyModel) {
  const auto p = make(1.0, 0.5, 1.0);
  PlaneWaveSpec s = PlaneWaveSpec::travelling(p);
  s.k = 1.0;
  // sin(t + x) at x = 0, t = pi/2: residual = -mu (2 - k^2) u = -1.
  EXPECT_NEAR(residual_pointwise(s, p, 0.0, kPi / 2), -1.0, 1e-12);
}

TEST(Residual, NonCanonicalDeltaLeavesDampingResidual) {
  auto p = make(1.0, 0.5, 1.0);
  p.delta = 0.5;
  p.canonical = false;
  const auto s = PlaneWaveSpec::travelling(p);
  EXPECT_GT(std::fabs(residual_pointwise(s, p, 0.0, 0.0)), 0.1);
}

TEST(AmplitudeConsistency, ZeroOnlyAtSquareRoot) {
  EXPECT_EQ(amplitude_consistency(4.0, 2.0, 1.0), 0.0);
  EXPECT_EQ(amplitude_consistency(4.0, 0.0, 1.0), 0.0);
  EXPECT_NE(amplitude_consistency(4.0, 4.0, 1.0), 0.0);
  EXPECT_DOUBLE_EQ(amplitude_consistency(1.0, 0.5, 2.0), 0.75);
  EXPECT_THROW(amplitude_consistency(-1.0, 1.0, 1.0), Error);
}

TEST(ErrorNorms, ConstantOffset) {
  const Grid1D g(2.0, 1.0, 0.5, 0.5);
  const Field a(g, {1, 1, 1, 1, 1}, 0.0);
  const Field b(g, {1.5, 1.5, 1.5, 1.5, 1.5}, 0.0);
  const auto r = error_norms(a, b, g);
  EXPECT_DOUBLE_EQ(r.linf, 0.5);
  EXPECT_DOUBLE_EQ(r.l2, std::sqrt(0.5 * 5 * 0.25));
}

TEST(ErrorNorms, MismatchedGrid) {
  const Grid1D g(2.0, 1.0, 0.5, 0.5);
  const Grid1D h(2.0, 1.0, 1.0, 0.5);
  EXPECT_THROW(error_norms(Field(h, {0, 0, 0}, 0.0), Field(g, {0, 0, 0, 0, 0}, 0.0), g), Error);
}

TEST(ErrorNorms, ClosedFormUsesFieldTime) {
  const Grid1D g(1.0, 1.0, 0.5, 0.5);
  const Field f(g, {0.3, 0.3, 0.3}, 0.3);
  const auto r = error_norms(f, [](double, double t) { return t; }, g);
  EXPECT_EQ(r.linf, 0.0);
  EXPECT_EQ(r.at_time, 0.3);
}

TEST(ConvergenceOrder, ExactPowerLaws) {
  EXPECT_NEAR(convergence_order({{0.1, 1e-2}, {0.05, 2.5e-3}, {0.025, 6.25e-4}}), 2.0, 1e-12);
  EXPECT_NEAR(convergence_order({{0.4, 4.0}, {0.2, 2.0}}), 1.0, 1e-12);
}

TEST(ConvergenceOrder, DegenerateInputs) {
  const auto code = [](const std::vector<std::pair<double, double>>& s) {
    try {
      convergence_order(s);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::Io;
  };
  EXPECT_EQ(code({{0.1, 1.0}}), ErrorCode::DegenerateInput);
  EXPECT_EQ(code({{0.1, 1.0}, {0.05, 0.0}}), ErrorCode::DegenerateInput);
  EXPECT_EQ(code({{0.1, 1.0}, {0.1, 0.5}}), ErrorCode::DegenerateInput);
  EXPECT_EQ(code({{0.05, 1.0}, {0.1, 0.5}}), ErrorCode::DegenerateInput);
}

TEST(MeasureFrequency, PureSine) {
  const auto ts = sample_series([](double t) { return std::sin(2.0 * t); }, 20.0, 1e-2);
  EXPECT_NEAR(measure_frequency(ts), 2.0, 1e-3);
}

TEST(MeasureFrequency, AmplitudeInvariance) {
  const auto a = sample_series([](double t) { return std::sin(1.3 * t + 0.2); }, 30.0, 1e-2);
  auto b = a;
  for (auto& u : b.u) u *= 7.5;
  EXPECT_NEAR(measure_frequency(a), measure_frequency(b), 1e-12);
}

TEST(MeasureFrequency, TooFewCrossings) {
  const auto ts = sample_series([](double t) { return std::sin(t + 0.1); }, 4.0, 1e-2);
  try {
    measure_frequency(ts);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InsufficientCrossings);
  }
}

TEST(ZeroCrossings, LinearInterpolation) {
  const TimeSeries ts{{0.0, 1.0, 2.0}, {-1.0, 3.0, -1.0}};
  const auto c = zero_crossings(ts);
  ASSERT_EQ(c.size(), 2u);
  EXPECT_DOUBLE_EQ(c[0], 0.25);
  EXPECT_DOUBLE_EQ(c[1], 1.75);
}

TEST(PhaseVelocity, ClosedFormWaveAndReflection) {
  for (double omega0 : {1.0, 2.0}) {
    const auto p = make(omega0, 0.5, 1.0);
    const auto spec = PlaneWaveSpec::travelling(p);
    const Grid1D g = Grid1D::from_counts(spec.wavelength(), 1.0, 256, 100);
    const double t2 = 0.2;
    const auto s1 = Field::sample(g, [&](double x) { return analytic_wave(spec, x, 0.0); }, 0.0);
    const auto s2 = Field::sample(g, [&](double x) { return analytic_wave(spec, x, t2); }, t2);
    const double v = measure_phase_velocity(s1, s2, g);
    EXPECT_NEAR(v, -omega0 / kSqrt2, 1e-3 * omega0);

    // Mirroring x -> L - x flips the travel direction.
    std::vector<double> m1(g.points()), m2(g.points());
    for (std::size_t i = 0; i < g.points(); ++i) {
      m1[i] = s1[(g.nx() - i) % g.nx()];
      m2[i] = s2[(g.nx() - i) % g.nx()];
    }
    const double vm = measure_phase_velocity(Field(g, m1, 0.0), Field(g, m2, t2), g);
    EXPECT_NEAR(vm, -v, 1e-9);
  }
}

TEST(PhaseVelocity, TwoWavelengthsAreAmbiguous) {
  const PlaneWaveSpec spec{1.0, 1.0, kSqrt2, +1, 1};
  const Grid1D g = Grid1D::from_counts(2.0 * spec.wavelength(), 1.0, 256, 100);
  const auto s1 = Field::sample(g, [&](double x) { return analytic_wave(spec, x, 0.0); }, 0.0);
  const auto s2 = Field::sample(g, [&](double x) { return analytic_wave(spec, x, 0.3); }, 0.3);
  try {
    measure_phase_velocity(s1, s2, g);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::AmbiguousPeak);
  }
}

TEST(Superposition, ZeroAmplitudePartnerChangesNothing) {
  const auto p = make(2.0, 1.0, 1.0);
  const auto right = PlaneWaveSpec::travelling(p, +1);
  auto silent = PlaneWaveSpec::travelling(p, -1);
  silent.amplitude = 0.0;
  const Grid1D g = Grid1D::from_counts(right.wavelength(), 1.0, 64, 500);
  const auto r = superposition_deviation(p, g, BoundarySpec::periodic(), right, silent, 50);
  ASSERT_EQ(r.times.size(), r.deviation.size());
  for (std::size_t k = 0; k < r.times.size(); ++k) EXPECT_EQ(r.deviation[k], r.baseline[k]);
  EXPECT_FALSE(r.first_exceed_time.has_value());
}

TEST(Superposition, RejectsNonSolutions) {
  const auto p = make(2.0, 1.0, 1.0);
  auto bad = PlaneWaveSpec::travelling(p);
  bad.k = 1.0;
  const Grid1D g = Grid1D::from_counts(5.0, 0.1, 16, 10);
  EXPECT_THROW(superposition_deviation(p, g, BoundarySpec::periodic(), bad, PlaneWaveSpec::travelling(p, -1)),
               Error);
}
