#pragma once

// Direct evolution of i psi_t = -psi_xx/2 + k(t) x^2 psi/2 by Strang
// split-step Fourier propagation, plus finite-difference residuals and
// density distances used to certify the closed-form trains against it.

#include <array>
#include <bit>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "paultrap/classical.hpp"
#include "paultrap/error.hpp"
#include "paultrap/fft.hpp"
#include "paultrap/numerics.hpp"
#include "paultrap/wavetrain.hpp"

namespace paultrap {

enum class SplitScheme { Strang };

struct PropagatorConfig {
  UniformGrid grid;
  double dt = 1e-3;
  SplitScheme scheme = SplitScheme::Strang;
};

/// Largest |x| on the grid, where the potential phase per step is largest.
inline double grid_edge(const UniformGrid& grid) { return std::max(std::abs(grid.start()), std::abs(grid.back())); }

/// Largest dt with |k_max x_edge^2 dt / 2| < pi/2.
inline double max_guarded_dt(const TrapParameters& params, const UniformGrid& grid) {
  const double edge = grid_edge(grid);
  return std::numbers::pi / (params.max_spring() * edge * edge);
}

inline void validate(const PropagatorConfig& config, const TrapParameters& params) {
  if (!std::has_single_bit(config.grid.size())) throw Error(Errc::InvalidCount, "propagator grid must have a power-of-two count");
  if (!(config.dt > 0.0)) throw Error(Errc::InvalidArgument, "time step must be positive");
  const double edge = grid_edge(config.grid);
  const double edge_phase = 0.5 * params.max_spring() * edge * edge * config.dt;
  if (!(edge_phase < 0.5 * std::numbers::pi)) {
    throw Error(Errc::AliasingRisk, "potential phase per step at the grid edge is " + std::to_string(edge_phase) + " rad");
  }
}

/// Owns the FFT buffers and phase tables of one evolution. Per step of size
/// dt it applies exp(-i p^2 dt/4), exp(-i k(t + dt/2) x^2 dt/2) and
/// exp(-i p^2 dt/4) again; consecutive half kinetic steps are fused.
class SplitStepPropagator {
 public:
  static constexpr double kNormDriftLimit = 1e-8;

  SplitStepPropagator(const TrapParameters& params, const PropagatorConfig& config)
      : params_(params), config_(config), buffer_(config.grid.size()) {
    validate(config, params);
    const std::size_t n = config.grid.size();
    const double dx = config.grid.step();
    const double inv_n = 1.0 / static_cast<double>(n);
    half_kinetic_.resize(n);
    full_kinetic_.resize(n);
    half_dt_x2_.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
      // FFTW frequency ordering: 0, 1, ..., n/2 - 1, -n/2, ..., -1
      const double index = j < n / 2 ? static_cast<double>(j) : static_cast<double>(j) - static_cast<double>(n);
      const double p = 2.0 * std::numbers::pi * index / (static_cast<double>(n) * dx);
      half_kinetic_[j] = std::polar(inv_n, -p * p * config.dt / 4.0);
      full_kinetic_[j] = std::polar(inv_n, -p * p * config.dt / 2.0);
      const double x = config.grid[j];
      half_dt_x2_[j] = 0.5 * x * x * config.dt;
    }
  }

  /// Evolves `psi0` (sampled at time t0 on the configured grid) through
  /// `steps` steps and returns the state at t0 + steps*dt.
  std::vector<Complex> evolve(const std::vector<Complex>& psi0, double t0, std::size_t steps) {
    auto& psi = buffer_.data();
    psi = psi0;
    if (steps == 0) return psi;
    double previous_norm = plain_norm();
    buffer_.forward();
    multiply(half_kinetic_);
    for (std::size_t s = 0; s < steps; ++s) {
      buffer_.backward();
      const double k = params_.spring(t0 + (static_cast<double>(s) + 0.5) * config_.dt);
      for (std::size_t j = 0; j < psi.size(); ++j) {
        const double angle = -k * half_dt_x2_[j];
        psi[j] *= Complex(std::cos(angle), std::sin(angle));
      }
      const double current = plain_norm();
      if (std::abs(current - previous_norm) > kNormDriftLimit * previous_norm) {
        throw Error(Errc::NormDrift, "norm changed by " + std::to_string(current - previous_norm) + " in one step");
      }
      previous_norm = current;
      buffer_.forward();
      multiply(s + 1 == steps ? half_kinetic_ : full_kinetic_);
    }
    buffer_.backward();
    return psi;
  }

  const PropagatorConfig& config() const noexcept { return config_; }

 private:
  void multiply(const std::vector<Complex>& factors) {
    auto& psi = buffer_.data();
    for (std::size_t j = 0; j < psi.size(); ++j) psi[j] *= factors[j];
  }

  // Discrete norm sum |psi|^2 dx, which the DFT preserves exactly.
  double plain_norm() const {
    double acc = 0.0;
    for (const auto& v : buffer_.data()) acc += std::norm(v);
    return acc * config_.grid.step();
  }

  TrapParameters params_;
  PropagatorConfig config_;
  FftBuffer buffer_;
  std::vector<Complex> half_kinetic_;
  std::vector<Complex> full_kinetic_;
  std::vector<double> half_dt_x2_;
};

/// Evolves psi0 from psi0.t to t_final; t_final - psi0.t must be an integer
/// multiple of config.dt.
inline FieldGrid split_step_evolve(const FieldGrid& psi0, const TrapParameters& params, const PropagatorConfig& config,
                                   double t_final) {
  if (!psi0.grid.matches(config.grid)) throw Error(Errc::GridMismatch, "initial state is not on the propagator grid");
  if (std::abs(psi0.norm - 1.0) > 1e-6) throw Error(Errc::InvalidArgument, "initial state is not normalized");
  const double span = t_final - psi0.t;
  if (span < 0.0) throw Error(Errc::InvalidArgument, "cannot evolve backwards in time");
  const double ratio = span / config.dt;
  const auto steps = static_cast<std::size_t>(std::llround(ratio));
  if (std::abs(ratio - static_cast<double>(steps)) > 1e-6) {
    throw Error(Errc::InvalidArgument, "evolution span is not a whole number of time steps");
  }
  SplitStepPropagator propagator(params, config);
  auto values = propagator.evolve(psi0.values, psi0.t, steps);
  return make_field(config.grid, t_final, std::move(values));
}

/// Evolves through each checkpoint in turn; segment i uses the largest step
/// not exceeding `max_dt` that divides it evenly, refined by `refinement`.
inline std::vector<FieldGrid> evolve_checkpoints(const FieldGrid& psi0, const TrapParameters& params,
                                                 const UniformGrid& grid, const std::vector<double>& times, double max_dt,
                                                 std::size_t refinement = 1) {
  std::vector<FieldGrid> out;
  FieldGrid current = psi0;
  for (double t : times) {
    const double span = t - current.t;
    if (span < 0.0) throw Error(Errc::InvalidArgument, "checkpoint times must be increasing");
    if (span == 0.0) {
      out.push_back(current);
      continue;
    }
    const auto steps = static_cast<std::size_t>(std::ceil(span / max_dt - 1e-9)) * refinement;
    current = split_step_evolve(current, params, PropagatorConfig{grid, span / static_cast<double>(steps)}, t);
    out.push_back(current);
  }
  return out;
}

/// L2 distance between the densities of two fields on a common grid.
inline double l2_density_distance(const FieldGrid& a, const FieldGrid& b) {
  require_same_grid(a, b, false);
  std::vector<double> d(a.values.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double diff = std::norm(a.values[i]) - std::norm(b.values[i]);
    d[i] = diff * diff;
  }
  return std::sqrt(std::max(0.0, simpson<double>(d, a.grid.step()).value));
}

/// Relative residual ||i psi_t + psi_xx/2 - k x^2 psi/2|| / ||psi|| at the
/// middle of three equally spaced time samples. psi_t is the three-point
/// central difference; psi_xx the five-point fourth-order central stencil,
/// so the norms run over the interior points that stencil reaches.
inline double tdse_residual(const std::array<FieldGrid, 3>& fields, const TrapParameters& params) {
  require_same_grid(fields[0], fields[1], false);
  require_same_grid(fields[1], fields[2], false);
  const double dt = fields[1].t - fields[0].t;
  if (!(dt > 0.0) || std::abs((fields[2].t - fields[1].t) - dt) > 1e-9 * dt) {
    throw Error(Errc::GridMismatch, "fields must be at three equally spaced increasing times");
  }
  const auto& grid = fields[1].grid;
  const std::size_t n = grid.size();
  if (n < 7) throw Error(Errc::TooFewPoints, "residual needs at least 7 space points");
  const double dx = grid.step();
  const double k = params.spring(fields[1].t);
  const auto& prev = fields[0].values;
  const auto& mid = fields[1].values;
  const auto& next = fields[2].values;
  const Complex I(0.0, 1.0);

  std::vector<double> residual, reference;
  residual.reserve(n - 4);
  reference.reserve(n - 4);
  for (std::size_t j = 2; j + 2 < n; ++j) {
    const Complex dpsi_dt = (next[j] - prev[j]) / (2.0 * dt);
    const Complex d2psi_dx2 =
        (-mid[j + 2] + 16.0 * mid[j + 1] - 30.0 * mid[j] + 16.0 * mid[j - 1] - mid[j - 2]) / (12.0 * dx * dx);
    const double x = grid[j];
    const Complex r = I * dpsi_dt + 0.5 * d2psi_dx2 - 0.5 * k * x * x * mid[j];
    residual.push_back(std::norm(r));
    reference.push_back(std::norm(mid[j]));
  }
  const double num = simpson<double>(residual, dx).value;
  const double den = simpson<double>(reference, dx).value;
  return std::sqrt(num / den);
}

/// Space grid for the split-step oracle, sized in phase space: it must hold
/// the train in position (center excursion plus xi_margin widths rho/sqrt(c0))
/// and in momentum (center momentum plus xi_margin widths |phi'|/sqrt(c0))
/// over the run. The momentum extent must fit in half the Nyquist band so
/// that |psi|^2 is resolved too and Simpson norms stay exact. For a given
/// count the margin is the largest value meeting both, capped at `max_margin`.
struct PdeGrid {
  UniformGrid grid;
  double xi_margin = 0.0;
};

inline PdeGrid pde_space_grid(const PolarTrack& track, const TrainSpec& spec, std::size_t count, double max_margin = 12.0) {
  if (!std::has_single_bit(count)) throw Error(Errc::InvalidCount, "space grid count must be a power of two");
  double xc_max = 0.0, pc_max = 0.0, width_x = 0.0, width_p = 0.0;
  const double ratio = spec.b0() / spec.c0();
  const double sc = std::sqrt(spec.c0());
  for (const auto& s : track.trajectory().samples()) {
    xc_max = std::max(xc_max, std::abs(ratio * s.phi1));
    pc_max = std::max(pc_max, std::abs(ratio * s.dphi1));
    width_x = std::max(width_x, std::hypot(s.phi1, s.phi2) / sc);
    width_p = std::max(width_p, std::hypot(s.dphi1, s.dphi2) / sc);
  }
  // half-width X = xc + m wx, dx = 2X/N, and pi/(2 dx) >= pc + m wp:
  // (xc + m wx)(pc + m wp) = pi N / 4
  const double a = width_x * width_p;
  const double b = xc_max * width_p + pc_max * width_x;
  const double c = xc_max * pc_max - std::numbers::pi * static_cast<double>(count) / 4.0;
  double margin = (-b + std::sqrt(b * b - 4.0 * a * c)) / (2.0 * a);
  margin = std::min(margin, max_margin);
  const double half = xc_max + margin * width_x;
  return {build_space_grid(0.0, half, count), margin};
}

/// Smallest power-of-two count (at least `minimum`) whose oracle grid has a
/// margin of at least `required_margin`.
inline std::size_t pde_grid_count(const PolarTrack& track, const TrainSpec& spec, double required_margin,
                                  std::size_t minimum = 4096) {
  std::size_t count = minimum;
  while (pde_space_grid(track, spec, count).xi_margin < required_margin) {
    count *= 2;
    if (count > (std::size_t{1} << 22)) throw Error(Errc::InvalidCount, "oracle grid would exceed 2^22 points");
  }
  return count;
}

/// Margin beyond which the two tails of h_n^2 hold less than `mass`.
inline double hermite_tail_margin(int n, double mass = 1e-15) {
  // integrate the tail from the outside in with Simpson panels
  const double step = 1e-3;
  double xi = std::sqrt(2.0 * n + 1.0) + 20.0;
  double tail = 0.0;
  while (xi > 0.0) {
    const double a = hermite_scaled(n, xi - step), m = hermite_scaled(n, xi - 0.5 * step), b = hermite_scaled(n, xi);
    const double panel = step / 6.0 * (a * a + 4.0 * m * m + b * b);
    if (2.0 * (tail + panel) > mass) return xi;
    tail += panel;
    xi -= step;
  }
  return 0.0;
}

}  // namespace paultrap
