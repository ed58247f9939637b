#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "paultrap/numerics.hpp"
#include "paultrap/signal.hpp"

using namespace paultrap;

TEST(UniformGrid, PointsComeFromTheIndex) {
  const UniformGrid g(0.0, 0.1, 1001);
  EXPECT_DOUBLE_EQ(g[1000], std::fma(1000.0, 0.1, 0.0));
  EXPECT_EQ(g.size(), 1001u);
  EXPECT_NEAR(g.back(), 100.0, 1e-12);
}

TEST(UniformGrid, RejectsDegenerateInput) {
  EXPECT_THROW(UniformGrid(0.0, 0.1, 0), Error);
  EXPECT_THROW(UniformGrid(0.0, 0.1, 1), Error);
  EXPECT_THROW(UniformGrid(0.0, 0.0, 5), Error);
  try {
    UniformGrid(0.0, 1.0, 0);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::EmptyGrid);
  }
}

TEST(UniformGrid, TimeGridHitsTheEnd) {
  const auto g = make_time_grid_intervals(4.0 * std::numbers::pi, 4096);
  EXPECT_EQ(g.size(), 4097u);
  EXPECT_NEAR(g.back(), 4.0 * std::numbers::pi, 1e-12);
}

TEST(SampledFunction, RejectsLengthMismatchAndNonFinite) {
  const UniformGrid g(0.0, 1.0, 3);
  EXPECT_THROW(SampledFunction<double>(g, {1.0, 2.0}), Error);
  EXPECT_THROW(SampledFunction<double>(g, {1.0, NAN, 2.0}), Error);
}

TEST(Rk4, ConstantStaysConstant) {
  auto rhs = [](double, const StateVector<1>&) { return StateVector<1>{0.0}; };
  const auto out = rk4_integrate<1>(rhs, {3.0}, UniformGrid(0.0, 0.1, 11));
  for (const auto& y : out) EXPECT_EQ(y[0], 3.0);
}

TEST(Rk4, ExponentialGrowth) {
  auto rhs = [](double, const StateVector<1>& y) { return y; };
  const auto out = rk4_integrate<1>(rhs, {1.0}, make_time_grid_intervals(1.0, 1000));
  EXPECT_NEAR(out.back()[0], std::numbers::e, 1e-10);
}

TEST(Rk4, HarmonicOscillatorReturnsAfterOnePeriod) {
  auto rhs = [](double, const StateVector<2>& y) { return StateVector<2>{y[1], -y[0]}; };
  const auto out = rk4_integrate<2>(rhs, {1.0, 0.0}, make_time_grid_intervals(2.0 * std::numbers::pi, 6000));
  EXPECT_NEAR(out.back()[0], 1.0, 1e-9);
  EXPECT_NEAR(out.back()[1], 0.0, 1e-9);
}

TEST(Rk4, EnergyErrorIsFourthOrder) {
  auto energy_error = [](double h) {
    auto rhs = [](double, const StateVector<2>& y) { return StateVector<2>{y[1], -4.0 * y[0]}; };
    const auto out = rk4_integrate<2>(rhs, {1.0, 0.0}, make_time_grid_intervals(std::numbers::pi, static_cast<std::size_t>(std::llround(std::numbers::pi / h))));
    const auto& y = out.back();
    return std::abs(0.5 * (y[1] * y[1] + 4.0 * y[0] * y[0]) - 2.0);
  };
  EXPECT_GT(energy_error(0.02) / energy_error(0.01), 12.0);
}

TEST(Rk4, NonFiniteStageThrows) {
  auto rhs = [](double, const StateVector<1>& y) { return StateVector<1>{1.0 / (y[0] - 1.0)}; };
  EXPECT_THROW(rk4_integrate<1>(rhs, {1.0}, UniformGrid(0.0, 0.1, 3)), Error);
}

TEST(Simpson, ConstantAndCubic) {
  const UniformGrid g(0.0, 0.01, 101);
  std::vector<double> one(101, 1.0), cube(101), sq(101);
  for (std::size_t i = 0; i < 101; ++i) {
    cube[i] = g[i] * g[i] * g[i];
    sq[i] = g[i] * g[i];
  }
  EXPECT_NEAR(simpson<double>(one, g.step()).value, 1.0, 1e-14);
  EXPECT_NEAR(simpson<double>(sq, g.step()).value, 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(simpson<double>(cube, g.step()).value, 0.25, 1e-12);
  EXPECT_FALSE(simpson<double>(one, g.step()).degraded);
}

TEST(Simpson, GaussianIntegral) {
  const UniformGrid g(-8.0, 16.0 / 2000.0, 2001);
  std::vector<double> f(g.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::exp(-g[i] * g[i]);
  EXPECT_NEAR(simpson(SampledFunction<double>(g, f)).value, std::sqrt(std::numbers::pi), 1e-10);
}

TEST(Simpson, EvenCountIsFlaggedDegraded) {
  std::vector<double> f(10, 2.0);
  const auto r = simpson<double>(f, 0.1);
  EXPECT_TRUE(r.degraded);
  EXPECT_NEAR(r.value, 1.8, 1e-14);
  EXPECT_THROW(simpson<double>(std::vector<double>{1.0, 2.0}, 0.1), Error);
}

TEST(CumulativeSimpson, MatchesClosedFormIntegral) {
  const UniformGrid g = make_time_grid_intervals(3.0, 3000);
  std::vector<double> f(g.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::cos(g[i]);
  const auto I = cumulative_simpson<double>(f, g.step());
  double worst = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) worst = std::max(worst, std::abs(I[i] - std::sin(g[i])));
  EXPECT_LT(worst, 1e-11);
}

TEST(CentralDiff, LinearFunctionIsExact) {
  const UniformGrid g(0.0, 0.1, 11);
  std::vector<double> f(g.points());
  const auto d = central_diff(SampledFunction<double>(g, f), 1);
  for (double v : d.derivative.values) EXPECT_NEAR(v, 1.0, 1e-12);
  EXPECT_EQ(d.accuracy_order, 2);
}

TEST(CentralDiff, QuadraticSecondDerivative) {
  const UniformGrid g(-1.0, 0.05, 41);
  std::vector<double> f(g.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = g[i] * g[i];
  for (double v : central_diff(SampledFunction<double>(g, f), 2).derivative.values) EXPECT_NEAR(v, 2.0, 1e-9);
}

TEST(CentralDiff, SecondOrderConvergence) {
  auto max_error = [](std::size_t n) {
    const UniformGrid g = make_time_grid_intervals(3.0, n);
    std::vector<double> f(g.size());
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::sin(g[i]);
    const auto d = central_diff(SampledFunction<double>(g, f), 1).derivative.values;
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < f.size(); ++i) worst = std::max(worst, std::abs(d[i] - std::cos(g[i])));
    return worst;
  };
  const double order = std::log2(max_error(100) / max_error(200));
  EXPECT_GE(order, 1.95);
  EXPECT_NEAR(max_error(100) / max_error(200), 4.0, 0.05);
}

TEST(CentralDiff, ErrorsAndThreePointEnds) {
  const UniformGrid g(0.0, 1.0, 3);
  EXPECT_THROW(central_diff(SampledFunction<double>(UniformGrid(0.0, 1.0, 2), {1.0, 2.0}), 1), Error);
  EXPECT_THROW(central_diff(SampledFunction<double>(g, {1.0, 2.0, 3.0}), 3), Error);
  EXPECT_EQ(central_diff(SampledFunction<double>(g, {0.0, 1.0, 4.0}), 2).accuracy_order, 0);
}

TEST(SpaceGrid, Examples) {
  const auto a = build_space_grid(0.0, 1.0, 4);
  EXPECT_EQ(a.points(), (std::vector<double>{-1.0, -0.5, 0.0, 0.5}));
  const auto b = build_space_grid(5.0, 10.0, 1024);
  EXPECT_DOUBLE_EQ(b.start(), -5.0);
  EXPECT_DOUBLE_EQ(b.step(), 20.0 / 1024.0);
  EXPECT_THROW(build_space_grid(0.0, 1.0, 100), Error);
  EXPECT_THROW(build_space_grid(0.0, -1.0, 128), Error);
}

TEST(Signal, UnwrapAndBranchJump) {
  const std::vector<double> raw{3.0, -3.1, -2.9};
  const auto u = unwrap_phase(raw);
  EXPECT_NEAR(u[1], -3.1 + 2.0 * std::numbers::pi, 1e-15);
  EXPECT_TRUE(u[2] > u[1]);
  const std::vector<double> ambiguous{0.0, std::numbers::pi};
  try {
    unwrap_phase(ambiguous);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::BranchJump);
  }
}

TEST(Signal, PeriodOfCosine) {
  const UniformGrid g = make_time_grid_intervals(40.0, 40000);
  std::vector<double> s(g.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = std::cos(g[i]) + 0.3 * std::cos(2.0 * g[i]);
  EXPECT_NEAR(fundamental_period(s, g.step()), 2.0 * std::numbers::pi, 1e-4);
}

TEST(Signal, MaximaAndSignChanges) {
  const std::vector<double> v{0.0, 1.0, 0.0, 2.0, 0.0, 1e-20, 0.0};
  EXPECT_EQ(count_local_maxima(v), 2u);
  const std::vector<double> w{1.0, -1.0, 1e-30, -2.0, 3.0};
  EXPECT_EQ(count_sign_changes(w), 2u);
}
