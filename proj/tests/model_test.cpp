#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "rvdp/model.hpp"

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

ErrorCode code_of(const ModelParams& p) {
  try {
    validate_params(p);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an error";
  return ErrorCode::Io;
}

}  // namespace

TEST(ValidateParams, AcceptsLongDomainWaveSet) {
  const auto p = make(2.0, 1.0, 0.25, std::numbers::sqrt2);
  EXPECT_EQ(validate_params(p), p);
}

TEST(ValidateParams, AcceptsUncoupledCase) {
  const auto p = make(1.0, 1.0, 1.0, 0.0);
  EXPECT_EQ(validate_params(p), p);
}

TEST(ValidateParams, RejectsNonPositiveOmega) {
  EXPECT_EQ(code_of(make(0.0, 1.0, 1.0, 0.0)), ErrorCode::NonPositiveOmega);
  EXPECT_EQ(code_of(make(-1.0, 1.0, 1.0, 0.0)), ErrorCode::NonPositiveOmega);
}

TEST(ValidateParams, RejectsNegativeCoefficientsAndNamesField) {
  EXPECT_EQ(code_of(make(1.0, -0.1, 1.0, 0.0)), ErrorCode::NegativeCoefficient);
  EXPECT_EQ(code_of(make(1.0, 0.1, 1.0, 0.0, -2.0)), ErrorCode::NegativeCoefficient);
  try {
    validate_params(make(1.0, 0.1, 1.0, -3.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("mu"), std::string::npos);
  }
}

TEST(ValidateParams, RejectsNonFinite) {
  EXPECT_EQ(code_of(make(1.0, std::numeric_limits<double>::quiet_NaN(), 1.0, 0.0)), ErrorCode::NonFinite);
  EXPECT_EQ(code_of(make(std::numeric_limits<double>::infinity(), 1.0, 1.0, 0.0)), ErrorCode::NonFinite);
}

TEST(ValidateParams, CanonicalFlagRequiresMatchingDelta) {
  auto p = canonical_delta(make(2.0, 1.0, 0.0, 1.0));
  EXPECT_NO_THROW(validate_params(p));
  p.delta = 0.3;
  EXPECT_EQ(code_of(p), ErrorCode::InvalidArgument);
}

TEST(CanonicalDelta, ReplacesDelta) {
  EXPECT_EQ(canonical_delta(make(2.0, 1.0, 7.0, 0.0)).delta, 0.25);
  EXPECT_EQ(canonical_delta(make(1.0, 1.0, 7.0, 0.0)).delta, 1.0);
  EXPECT_DOUBLE_EQ(canonical_delta(make(3.0, 1.0, 7.0, 0.0)).delta, 1.0 / 9.0);
  EXPECT_TRUE(canonical_delta(make(3.0, 1.0, 7.0, 0.0)).canonical);
}

TEST(Grid1D, RecomputesStepsFromRoundedCounts) {
  const Grid1D g(22.0, 1.0, 0.03, 0.0007);
  EXPECT_EQ(g.nx(), 733u);
  EXPECT_EQ(g.nt(), 1429u);
  EXPECT_DOUBLE_EQ(g.dx(), 22.0 / 733.0);
  EXPECT_DOUBLE_EQ(g.dt(), 1.0 / 1429.0);
  EXPECT_EQ(g.points(), 734u);
}

TEST(Grid1D, ReconstructionCoversDomainProperty) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> len(0.5, 50.0), step(1e-3, 0.2);
  for (int k = 0; k < 200; ++k) {
    const double length = len(rng);
    const double duration = len(rng);
    const double dx = step(rng) * length / 10.0;
    const double dt = step(rng) * duration / 10.0;
    const Grid1D g(length, duration, dx, dt);
    EXPECT_NEAR(static_cast<double>(g.nx()) * g.dx(), length, 4 * std::numeric_limits<double>::epsilon() * length);
    EXPECT_NEAR(static_cast<double>(g.nt()) * g.dt(), duration,
                4 * std::numeric_limits<double>::epsilon() * duration);
  }
}

TEST(Grid1D, RejectsDegenerateMeshes) {
  EXPECT_THROW(Grid1D(1.0, 1.0, 0.9, 0.1), Error);  // one interval
  EXPECT_THROW(Grid1D(1.0, 1.0, 0.1, 5.0), Error);  // zero time steps
  EXPECT_THROW(Grid1D(-1.0, 1.0, 0.1, 0.1), Error);
  EXPECT_THROW(Grid1D(1.0, 1.0, 0.0, 0.1), Error);
}

TEST(Field, LengthMustMatchGrid) {
  const Grid1D g(1.0, 1.0, 0.25, 0.5);
  EXPECT_NO_THROW(Field(g, std::vector<double>(5, 0.0), 0.0));
  try {
    Field(g, std::vector<double>(4, 0.0), 0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::GridMismatch);
  }
}

TEST(Field, SampleAndFiniteness) {
  const Grid1D g(1.0, 1.0, 0.5, 0.5);
  const auto f = Field::sample(g, [](double x) { return 2.0 * x; }, 0.25);
  EXPECT_EQ(f[2], 2.0);
  EXPECT_EQ(f.time(), 0.25);
  EXPECT_TRUE(f.all_finite());
  EXPECT_FALSE(Field(g, {0.0, NAN, 0.0}, 0.0).all_finite());
}

TEST(BoundarySpec, DirichletNeedsBothFunctions) {
  EXPECT_THROW(BoundarySpec::dirichlet([](double) { return 0.0; }, {}), Error);
  const auto bc = BoundarySpec::dirichlet([](double t) { return t; }, [](double t) { return -t; });
  EXPECT_EQ(bc.kind, BoundaryKind::DirichletFunction);
  EXPECT_EQ(bc.right(2.0), -2.0);
}
