#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "paultrap/classical.hpp"

using namespace paultrap;

namespace {

constexpr double pi = std::numbers::pi;
const TrapParameters kTrap(0.25, 0.05);
const ClassicalInit kSoliton{1.0, 1.0, 0.0, -pi / 2.0};
const ClassicalInit kCollapse{0.02, 10.0, 0.0, -pi / 2.0};

double sup_picard_rk4(int iterations, std::size_t points) {
  const PolarTrack oracle(solve_classical(kTrap, kSoliton, make_time_grid_intervals(4.0 * pi, 125664)));
  return sup_distance(picard_iterate(kTrap, kSoliton, iterations, make_time_grid_intervals(4.0 * pi, points - 1)), oracle);
}

}  // namespace

TEST(TrapParameters, InvariantsAndWarning) {
  EXPECT_THROW(TrapParameters(0.0, 0.1), Error);
  EXPECT_THROW(TrapParameters(-1.0, 0.1), Error);
  EXPECT_FALSE(kTrap.stability_warning().has_value());
  EXPECT_TRUE(TrapParameters(0.25, 0.5).stability_warning().has_value());
  EXPECT_DOUBLE_EQ(TrapParameters::from_U(0.5, 0.05).U2(), 0.25);
  EXPECT_DOUBLE_EQ(kTrap.spring(0.0), 0.3);
}

TEST(Unperturbed, Examples) {
  const auto s0 = unperturbed_solution(kSoliton, kTrap, 0.0);
  EXPECT_EQ(s0.phi1, 1.0);
  EXPECT_EQ(s0.dphi1, 0.0);
  EXPECT_NEAR(s0.phi2, 0.0, 1e-16);
  EXPECT_NEAR(s0.dphi2, 0.5, 1e-16);
  EXPECT_NEAR(unperturbed_solution(kSoliton, kTrap, pi).phi1, 0.0, 1e-16);
}

TEST(FirstIntegral, TrigIdentityOracle) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(0.0, 20.0);
  const TrapParameters free(0.25, 0.0);
  for (int i = 0; i < 10; ++i) {
    const double t = dist(rng);
    EXPECT_NEAR(first_integral(unperturbed_solution(kSoliton, free, t)), 0.5, 1e-15);
    EXPECT_NEAR(first_integral(unperturbed_solution(kCollapse, free, t)), 0.1, 1e-15);
  }
  const ClassicalInit degenerate{1.0, 1.0, 0.3, 0.3};
  EXPECT_NEAR(first_integral(unperturbed_solution(degenerate, free, 1.0)), 0.0, 1e-16);
}

TEST(Picard, ZeroDriveEqualsUnperturbed) {
  const TrapParameters free(0.25, 0.0);
  const auto grid = make_time_grid_intervals(4.0 * pi, 1000);
  const auto traj = picard_iterate(free, kSoliton, 3, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto u = unperturbed_solution(kSoliton, free, grid[i]);
    ASSERT_NEAR(traj[i].phi1, u.phi1, 1e-15);
    ASSERT_NEAR(traj[i].dphi2, u.dphi2, 1e-15);
  }
}

TEST(Picard, PreconditionErrors) {
  try {
    picard_iterate(kTrap, kSoliton, 1, UniformGrid(0.5, 0.1, 10));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NonZeroStart);
  }
  EXPECT_THROW(picard_iterate(kTrap, kSoliton, -1, make_time_grid_intervals(1.0, 10)), Error);
  EXPECT_THROW(picard_iterate(kTrap, kSoliton, 1, UniformGrid(0.0, 0.1, 2)), Error);
}

// RK4 oracle at step 1e-4 over [0, 4 pi].
TEST(Picard, ConvergesToTheRk4Oracle) {
  std::vector<double> d;
  for (int k = 0; k <= 4; ++k) d.push_back(sup_picard_rk4(k, 8193));
  for (int k = 1; k <= 4; ++k) EXPECT_LT(d[k], d[k - 1]) << k;
  EXPECT_LT(d[4], 1e-6);
  EXPECT_LT(sup_picard_rk4(4, 4097), 1e-6);
}

TEST(Picard, MathieuResidualDecreasesWithIterations) {
  const auto grid = make_time_grid_intervals(4.0 * pi, 8192);
  double previous = mathieu_residual(picard_iterate(kTrap, kSoliton, 0, grid));
  for (int k = 1; k <= 3; ++k) {
    const double r = mathieu_residual(picard_iterate(kTrap, kSoliton, k, grid));
    EXPECT_LT(r, previous) << k;
    previous = r;
  }
}

TEST(FirstOrderReference, HandEvaluatedValues) {
  const auto [a0, b0] = first_order_reference(0.0);
  EXPECT_EQ(a0, 1.0);
  EXPECT_EQ(b0, 0.0);
  EXPECT_NEAR(first_order_reference(pi).first, 0.0, 1e-16);
  // t = pi/2: sin 2t = 0, 1 - cos 2t = 2, so both components equal 1.05 sqrt(2)/2
  const auto [a, b] = first_order_reference(pi / 2.0);
  EXPECT_NEAR(a, 0.74246212024587489, 1e-15);
  EXPECT_NEAR(b, 0.74246212024587489, 1e-15);
}

TEST(SolveClassical, FreeOscillator) {
  const TrapParameters unit(1.0, 0.0);
  const ClassicalInit init{1.0, 1.0, 0.0, -pi / 2.0};
  const auto traj = solve_classical(unit, init, 2.0 * pi, 1e-3);
  double worst = 0.0;
  for (const auto& s : traj.samples()) worst = std::max(worst, std::abs(s.phi1 - std::cos(s.t)));
  EXPECT_LT(worst, 1e-11);
}

// Reference states from an adaptive eighth-order integration at rtol 1e-13.
TEST(SolveClassical, FrozenIndependentStates) {
  const PolarTrack sol(solve_classical(kTrap, kSoliton, 4.0 * pi, 1e-3));
  const auto s = sol.state_at(pi);
  EXPECT_NEAR(s.phi1, -0.00130897875851674, 1e-11);
  EXPECT_NEAR(s.phi2, 1.03322169441159, 1e-11);
  EXPECT_NEAR(s.dphi1, -0.483922420514055, 1e-11);
  const auto e = sol.state_at(4.0 * pi);
  EXPECT_NEAR(e.phi1, 0.999986292620362, 1e-10);
  EXPECT_NEAR(e.phi2, 0.00540984246449853, 1e-10);
  EXPECT_NEAR(e.dphi2, 0.499993146310181, 1e-10);

  const PolarTrack col(solve_classical(kTrap, kCollapse, 2.0 * pi, 1e-3));
  const auto c = col.state_at(pi);
  EXPECT_NEAR(c.phi2, 10.332216944116, 1e-9);
  EXPECT_NEAR(c.dphi1, -0.00967844841028128, 1e-11);
}

TEST(SolveClassical, FirstIntegralConservation) {
  const auto sol = solve_classical(kTrap, kSoliton, 4.0 * pi, 1e-3);
  EXPECT_NEAR(sol.c0(), 0.5, 1e-15);
  EXPECT_LT(sol.max_relative_c0_drift(), 1e-8);
  const auto col = solve_classical(kTrap, kCollapse, 4.0 * pi, 1e-3);
  EXPECT_NEAR(col.c0(), 0.1, 1e-15);
  EXPECT_LT(col.max_relative_c0_drift(), 1e-8);
}

TEST(SolveClassical, CollapseExtremes) {
  const PolarTrack col(solve_classical(kTrap, kCollapse, 2.0 * pi, 1e-3));
  double lo = 1e300, hi = 0.0;
  for (const auto& p : col.polar()) {
    lo = std::min(lo, p.rho);
    hi = std::max(hi, p.rho);
  }
  EXPECT_NEAR(lo, 0.02, 1e-9);
  EXPECT_NEAR(hi, 10.3322238538, 1e-6);
}

TEST(Polar, UnitCircle) {
  const TrapParameters free(0.25, 0.0);
  const PolarTrack track(picard_iterate(free, kSoliton, 0, make_time_grid_intervals(10.0, 1000)));
  for (const auto& p : track.polar()) {
    EXPECT_NEAR(p.rho, 1.0, 1e-15);
    EXPECT_NEAR(p.theta, 0.5 * p.t, 1e-13);
    EXPECT_NEAR(p.drho, 0.0, 1e-15);
    EXPECT_NEAR(p.dtheta, 0.5, 1e-15);
  }
}

TEST(Polar, CollapseStartAndMonotonePhase) {
  const PolarTrack col(solve_classical(kTrap, kCollapse, 2.0 * pi, 1e-3));
  EXPECT_NEAR(col.polar().front().rho, 0.02, 1e-16);
  EXPECT_NEAR(col.polar().front().theta, 0.0, 1e-13);
  for (std::size_t i = 1; i < col.polar().size(); ++i) ASSERT_GT(col.polar()[i].theta, col.polar()[i - 1].theta);
  for (const auto& p : col.polar()) ASSERT_NEAR(p.rho * p.rho * p.dtheta, col.c0(), 1e-8 * col.c0());
}

TEST(Polar, OriginCrossingAndBranchJump) {
  const TrapParameters free(0.25, 0.0);
  const ClassicalInit origin{0.0, 0.0, 0.0, 0.0};
  try {
    polar_decompose(picard_iterate(free, origin, 0, make_time_grid_intervals(2.0 * pi, 2)));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::OriginCrossing);
  }
  // a rotation of pi per sample cannot be unwrapped
  const TrapParameters fast(1.0, 0.0);
  EXPECT_THROW(polar_decompose(picard_iterate(fast, kSoliton, 0, UniformGrid(0.0, pi, 4))), Error);
}

TEST(Polar, PhaseEquationsConvergeAtSecondOrder) {
  auto worst = [](double step) {
    const auto traj = solve_classical(kTrap, kSoliton, 4.0 * pi, step);
    const auto r = polar_residuals(traj, polar_decompose(traj));
    return std::max(r.theta_equation, r.rho_equation);
  };
  EXPECT_GE(std::log2(worst(2e-2) / worst(1e-2)), 1.9);
}

TEST(Riccati, Values) {
  const PolarState unit{0.0, 1.0, 0.0, 0.0, 1.0};
  EXPECT_EQ(riccati_c(unit), std::complex<double>(0.5, 0.0));
  const PolarTrack sol(solve_classical(kTrap, kSoliton, 1.0, 1e-3));
  const auto p = sol.polar().front();
  EXPECT_NEAR(riccati_c(p).imag(), -p.drho / (2.0 * p.rho), 1e-18);
  EXPECT_NEAR(riccati_c(p).real(), 0.25, 1e-15);
}

TEST(PolarTrack, OffGridStatesAgreeWithFinerIntegration) {
  const PolarTrack coarse(solve_classical(kTrap, kSoliton, 4.0 * pi, 1e-3));
  const PolarTrack fine(solve_classical(kTrap, kSoliton, 4.0 * pi, 1e-4));
  for (double t : {0.12345, 3.3, 11.0}) {
    EXPECT_NEAR(coarse.state_at(t).phi1, fine.state_at(t).phi1, 1e-12);
    EXPECT_NEAR(coarse.polar_at(t).theta, fine.polar_at(t).theta, 1e-12);
  }
  EXPECT_THROW(coarse.state_at(-1.0), Error);
  EXPECT_THROW(coarse.state_at(20.0), Error);
}
