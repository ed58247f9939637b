#pragma once

// Classical Mathieu motion phi'' = -(U^2 + V cos 2t) phi for the complex
// solution phi = phi1 + i phi2: the Picard-iterated integral equations, a
// direct RK4 reference solver, the polar form phi = rho e^{i theta} and the
// first integral c0 = rho^2 theta' = phi1 phi2' - phi2 phi1'.

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "paultrap/error.hpp"
#include "paultrap/numerics.hpp"
#include "paultrap/signal.hpp"

namespace paultrap {

/// Dimensionless drive k(t) = U^2 + V cos 2t of a Paul trap.
///
/// Units follow m = hbar = 1, time measured in 2/omega (omega the rf drive
/// frequency) and length in the oscillator length l_h = sqrt(hbar/(m omega)).
/// All of those constants are 1 in this representation and are not stored.
class TrapParameters {
 public:
  TrapParameters(double U2, double V) : U2_(U2), V_(V) {
    if (!(U2 > 0.0) || !std::isfinite(U2)) throw Error(Errc::InvalidArgument, "U^2 must be positive");
    if (!std::isfinite(V)) throw Error(Errc::InvalidArgument, "V must be finite");
  }

  static TrapParameters from_U(double U, double V) { return TrapParameters(U * U, V); }

  double U2() const noexcept { return U2_; }
  double U() const noexcept { return std::sqrt(U2_); }
  double V() const noexcept { return V_; }

  double spring(double t) const noexcept { return U2_ + V_ * std::cos(2.0 * t); }
  double max_spring() const noexcept { return U2_ + std::abs(V_); }

  /// Non-empty when the parameters leave the first stability region
  /// (U^2 < 1, V < 1, V no larger than U^2). The computation still proceeds.
  std::optional<std::string> stability_warning() const {
    if (U2_ < 1.0 && std::abs(V_) < 1.0 && std::abs(V_) <= U2_) return std::nullopt;
    return "trap parameters U^2=" + std::to_string(U2_) + ", V=" + std::to_string(V_) +
           " lie outside the first stability region (U^2 < 1, V < 1, V <~ U^2)";
  }

 private:
  double U2_;
  double V_;
};

/// Constants of the unperturbed solution phi1 = A cos(Ut + alpha), phi2 = B cos(Ut + beta).
struct ClassicalInit {
  double A = 1.0;
  double B = 1.0;
  double alpha = 0.0;
  double beta = -std::numbers::pi / 2.0;
};

struct ClassicalState {
  double t = 0.0;
  double phi1 = 0.0;
  double phi2 = 0.0;
  double dphi1 = 0.0;
  double dphi2 = 0.0;
};

struct PolarState {
  double t = 0.0;
  double rho = 1.0;
  double theta = 0.0;  // unwrapped, continuous in t
  double drho = 0.0;
  double dtheta = 0.0;
};

inline double first_integral(const ClassicalState& s) noexcept { return s.phi1 * s.dphi2 - s.phi2 * s.dphi1; }

/// Samples of a classical solution on a uniform time grid starting at 0.
/// Immutable once built; c0 is taken from the first sample.
class Trajectory {
 public:
  Trajectory(TrapParameters params, ClassicalInit init, UniformGrid grid, std::vector<ClassicalState> samples)
      : params_(params), init_(init), grid_(grid), samples_(std::move(samples)) {
    if (samples_.size() != grid_.size()) throw Error(Errc::InvalidCount, "trajectory sample count does not match its grid");
    for (std::size_t i = 0; i < samples_.size(); ++i) samples_[i].t = grid_[i];
    c0_ = first_integral(samples_.front());
  }

  const TrapParameters& params() const noexcept { return params_; }
  const ClassicalInit& init() const noexcept { return init_; }
  const UniformGrid& grid() const noexcept { return grid_; }
  const std::vector<ClassicalState>& samples() const noexcept { return samples_; }
  std::size_t size() const noexcept { return samples_.size(); }
  const ClassicalState& operator[](std::size_t i) const noexcept { return samples_[i]; }
  double c0() const noexcept { return c0_; }

  /// max_i |c0(t_i) - c0| / |c0|
  double max_relative_c0_drift() const {
    double worst = 0.0;
    for (const auto& s : samples_) worst = std::max(worst, std::abs(first_integral(s) - c0_));
    return worst / std::abs(c0_);
  }

 private:
  TrapParameters params_;
  ClassicalInit init_;
  UniformGrid grid_;
  std::vector<ClassicalState> samples_;
  double c0_ = 0.0;
};

/// V = 0 solution: phi1 = A cos(Ut + alpha), phi2 = B cos(Ut + beta).
inline ClassicalState unperturbed_solution(const ClassicalInit& init, const TrapParameters& params, double t) {
  const double U = params.U();
  return ClassicalState{
      t,
      init.A * std::cos(U * t + init.alpha),
      init.B * std::cos(U * t + init.beta),
      -init.A * U * std::sin(U * t + init.alpha),
      -init.B * U * std::sin(U * t + init.beta),
  };
}

/// Picard iteration of the Volterra form of the Mathieu equation,
///
///   phi(t) = a cos(Ut + alpha) - (V/U) [ sin Ut \int_0^t cos Us cos 2s phi ds
///                                      - cos Ut \int_0^t sin Us cos 2s phi ds ],
///
/// applied to each real component. Iteration 0 is the unperturbed solution.
/// The running integrals use cumulative Simpson quadrature on `grid`, and the
/// derivative follows in closed form from the same integrals:
///
///   phi'(t) = -a U sin(Ut + alpha) - V [ cos Ut I_c(t) + sin Ut I_s(t) ].
inline Trajectory picard_iterate(const TrapParameters& params, const ClassicalInit& init, int iterations,
                                 const UniformGrid& grid) {
  if (iterations < 0) throw Error(Errc::InvalidArgument, "iteration count must be non-negative");
  if (grid.start() != 0.0) throw Error(Errc::NonZeroStart, "Picard grid must start at t = 0");
  if (grid.size() < 3) throw Error(Errc::TooFewPoints, "Picard grid needs at least 3 points");

  const std::size_t n = grid.size();
  const double U = params.U();
  const double V = params.V();
  const double h = grid.step();

  std::vector<double> cos_u(n), sin_u(n), cos_2t(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = grid[i];
    cos_u[i] = std::cos(U * t);
    sin_u[i] = std::sin(U * t);
    cos_2t[i] = std::cos(2.0 * t);
  }

  auto iterate_component = [&](double amplitude, double phase, std::vector<double>& phi, std::vector<double>& dphi) {
    phi.resize(n);
    dphi.resize(n);
    std::vector<double> base(n), dbase(n);
    for (std::size_t i = 0; i < n; ++i) {
      base[i] = amplitude * std::cos(U * grid[i] + phase);
      dbase[i] = -amplitude * U * std::sin(U * grid[i] + phase);
    }
    phi = base;
    dphi = dbase;
    std::vector<double> fc(n), fs(n);
    for (int k = 0; k < iterations; ++k) {
      for (std::size_t i = 0; i < n; ++i) {
        fc[i] = cos_u[i] * cos_2t[i] * phi[i];
        fs[i] = sin_u[i] * cos_2t[i] * phi[i];
      }
      const auto Ic = cumulative_simpson<double>(fc, h);
      const auto Is = cumulative_simpson<double>(fs, h);
      for (std::size_t i = 0; i < n; ++i) {
        phi[i] = base[i] - (V / U) * (sin_u[i] * Ic[i] - cos_u[i] * Is[i]);
        dphi[i] = dbase[i] - V * (cos_u[i] * Ic[i] + sin_u[i] * Is[i]);
      }
    }
  };

  std::vector<double> p1, d1, p2, d2;
  iterate_component(init.A, init.alpha, p1, d1);
  iterate_component(init.B, init.beta, p2, d2);

  std::vector<ClassicalState> samples(n);
  for (std::size_t i = 0; i < n; ++i) samples[i] = ClassicalState{grid[i], p1[i], p2[i], d1[i], d2[i]};
  return Trajectory(params, init, grid, std::move(samples));
}

/// Closed-form first-order approximation quoted for U = 0.5, V = 0.05,
/// A = B = 1, alpha = 0, beta = -pi/2. Test fixture only.
inline std::pair<double, double> first_order_reference(double t) {
  const double c = std::cos(0.5 * t);
  const double s = std::sin(0.5 * t);
  const double phi1 = c + 0.05 * s * std::sin(2.0 * t) + 0.025 * c * (1.0 - std::cos(2.0 * t));
  const double phi2 = s + 0.025 * s * (1.0 - std::cos(2.0 * t));
  return {phi1, phi2};
}

namespace detail {

using MathieuState = StateVector<4>;  // phi1, phi1', phi2, phi2'

inline auto mathieu_rhs(const TrapParameters& params) {
  return [params](double t, const MathieuState& y) {
    const double k = params.spring(t);
    return MathieuState{y[1], -k * y[0], y[3], -k * y[2]};
  };
}

}  // namespace detail

/// Direct RK4 integration of the Mathieu equation on `grid` (which starts at
/// 0). Initial data are the unperturbed solution at t = 0, shared with the
/// Picard iteration.
inline Trajectory solve_classical(const TrapParameters& params, const ClassicalInit& init, const UniformGrid& grid) {
  if (grid.start() != 0.0) throw Error(Errc::NonZeroStart, "classical integration starts at t = 0");
  const ClassicalState s0 = unperturbed_solution(init, params, 0.0);
  const auto states = rk4_integrate<4>(detail::mathieu_rhs(params), {s0.phi1, s0.dphi1, s0.phi2, s0.dphi2}, grid);
  std::vector<ClassicalState> samples(states.size());
  for (std::size_t i = 0; i < states.size(); ++i) {
    samples[i] = ClassicalState{grid[i], states[i][0], states[i][2], states[i][1], states[i][3]};
  }
  return Trajectory(params, init, grid, std::move(samples));
}

/// Grid steps are the nearest multiple of t_end to `step`, so the last sample sits at t_end.
inline Trajectory solve_classical(const TrapParameters& params, const ClassicalInit& init, double t_end, double step) {
  if (!(step > 0.0) || !(t_end > 0.0)) throw Error(Errc::InvalidArgument, "time span and step must be positive");
  const auto intervals = std::max<long long>(1, std::llround(t_end / step));
  return solve_classical(params, init, make_time_grid_intervals(t_end, static_cast<std::size_t>(intervals)));
}

namespace detail {

inline PolarState polar_of(const ClassicalState& s, double theta) {
  const double rho = std::hypot(s.phi1, s.phi2);
  if (!(rho > 0.0)) throw Error(Errc::OriginCrossing, "phi passes through the origin at t=" + std::to_string(s.t));
  return PolarState{
      s.t,
      rho,
      theta,
      (s.phi1 * s.dphi1 + s.phi2 * s.dphi2) / rho,
      (s.phi1 * s.dphi2 - s.phi2 * s.dphi1) / (rho * rho),
  };
}

}  // namespace detail

/// Polar form of every sample. theta(0) is atan2(phi2(0), phi1(0)); later
/// samples continue onto the nearest branch.
inline std::vector<PolarState> polar_decompose(const Trajectory& traj) {
  std::vector<double> raw(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const auto& s = traj[i];
    if (s.phi1 == 0.0 && s.phi2 == 0.0) {
      throw Error(Errc::OriginCrossing, "phi passes through the origin at t=" + std::to_string(s.t));
    }
    raw[i] = std::atan2(s.phi2, s.phi1);
  }
  const auto theta = unwrap_phase(raw);
  std::vector<PolarState> out(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) out[i] = detail::polar_of(traj[i], theta[i]);
  return out;
}

/// Riccati variable c = phi'/(2 i phi) = theta'/2 - i rho'/(2 rho).
inline std::complex<double> riccati_c(const PolarState& p) {
  return {0.5 * p.dtheta, -0.5 * p.drho / p.rho};
}

/// A trajectory together with its polar decomposition, evaluable at any time
/// in its range. Off-grid states come from one RK4 sub-step of the Mathieu
/// equation from the preceding sample, so their error matches the sampled data.
class PolarTrack {
 public:
  explicit PolarTrack(Trajectory traj) : traj_(std::move(traj)), polar_(polar_decompose(traj_)) {}

  const Trajectory& trajectory() const noexcept { return traj_; }
  const std::vector<PolarState>& polar() const noexcept { return polar_; }
  double c0() const noexcept { return traj_.c0(); }
  const TrapParameters& params() const noexcept { return traj_.params(); }

  ClassicalState state_at(double t) const {
    const auto [index, offset] = locate(t);
    const ClassicalState& base = traj_[index];
    if (offset == 0.0) return base;
    const auto y = rk4_step<4>(detail::mathieu_rhs(traj_.params()), base.t,
                               detail::MathieuState{base.phi1, base.dphi1, base.phi2, base.dphi2}, offset);
    return ClassicalState{t, y[0], y[2], y[1], y[3]};
  }

  PolarState polar_at(double t) const {
    const auto [index, offset] = locate(t);
    if (offset == 0.0) return polar_[index];
    const ClassicalState s = state_at(t);
    const double base_theta = polar_[index].theta;
    double delta = std::atan2(s.phi2, s.phi1) - base_theta;
    delta -= 2.0 * std::numbers::pi * std::round(delta / (2.0 * std::numbers::pi));
    return detail::polar_of(s, base_theta + delta);
  }

 private:
  std::pair<std::size_t, double> locate(double t) const {
    const auto& g = traj_.grid();
    const double tol = 1e-9 * g.step();
    if (!(t >= g.start() - tol) || !(t <= g.back() + tol)) {
      throw Error(Errc::InvalidArgument, "time " + std::to_string(t) + " outside the trajectory range");
    }
    const double pos = (t - g.start()) / g.step();
    const auto nearest = static_cast<std::size_t>(std::llround(std::max(pos, 0.0)));
    if (std::abs(pos - static_cast<double>(nearest)) * g.step() <= tol && nearest < g.size()) return {nearest, 0.0};
    std::size_t index = static_cast<std::size_t>(std::floor(std::max(pos, 0.0)));
    index = std::min(index, g.size() - 2);
    return {index, t - g[index]};
  }

  Trajectory traj_;
  std::vector<PolarState> polar_;
};

/// Residuals of the phase and module equations theta'' = -2 theta' rho'/rho
/// and rho'' = rho theta'^2 - k rho, with theta'' and rho'' from central
/// differences of the sampled theta and rho.
struct PolarResiduals {
  double theta_equation = 0.0;
  double rho_equation = 0.0;
};

inline PolarResiduals polar_residuals(const Trajectory& traj, const std::vector<PolarState>& polar) {
  std::vector<double> theta(polar.size()), rho(polar.size());
  for (std::size_t i = 0; i < polar.size(); ++i) {
    theta[i] = polar[i].theta;
    rho[i] = polar[i].rho;
  }
  const auto theta_dd = central_diff(SampledFunction<double>(traj.grid(), theta), 2).derivative.values;
  const auto rho_dd = central_diff(SampledFunction<double>(traj.grid(), rho), 2).derivative.values;
  PolarResiduals out;
  for (std::size_t i = 0; i < polar.size(); ++i) {
    const auto& p = polar[i];
    out.theta_equation = std::max(out.theta_equation, std::abs(theta_dd[i] + 2.0 * p.dtheta * p.drho / p.rho));
    out.rho_equation = std::max(out.rho_equation,
                                std::abs(rho_dd[i] - p.rho * p.dtheta * p.dtheta + traj.params().spring(p.t) * p.rho));
  }
  return out;
}

/// max_i |phi_j'' + k phi_j| over both components, phi'' by central
/// differences of the sampled derivative.
inline double mathieu_residual(const Trajectory& traj) {
  std::vector<double> d1(traj.size()), d2(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    d1[i] = traj[i].dphi1;
    d2[i] = traj[i].dphi2;
  }
  const auto dd1 = central_diff(SampledFunction<double>(traj.grid(), d1), 1).derivative.values;
  const auto dd2 = central_diff(SampledFunction<double>(traj.grid(), d2), 1).derivative.values;
  double worst = 0.0;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const double k = traj.params().spring(traj[i].t);
    worst = std::max({worst, std::abs(dd1[i] + k * traj[i].phi1), std::abs(dd2[i] + k * traj[i].phi2)});
  }
  return worst;
}

/// Largest |phi_j(t) - psi_j(t)| over the samples of `a`, evaluating `b` at
/// those times.
inline double sup_distance(const Trajectory& a, const PolarTrack& b) {
  double worst = 0.0;
  for (const auto& s : a.samples()) {
    const auto r = b.state_at(s.t);
    worst = std::max({worst, std::abs(s.phi1 - r.phi1), std::abs(s.phi2 - r.phi2)});
  }
  return worst;
}

}  // namespace paultrap
