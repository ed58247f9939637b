#pragma once

// Exact wave-packet-train solutions of i psi_t = -psi_xx/2 + k(t) x^2 psi/2
// built from a classical solution phi = rho e^{i theta} with first integral c0:
//
//   psi_n = R_n exp(i Theta_n),
//   R_n   = (c0)^{1/4} rho^{-1/2} h_n(xi),
//   xi    = sqrt(c0) x / rho - (b0 / sqrt(c0)) cos theta,
//   Theta_n = rho' x^2 / (2 rho) - (b0 x / rho) sin theta
//             + (b0^2 / (4 c0)) sin 2 theta - (n + 1/2) theta,
//
// where h_n is the normalized Hermite function.

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <numbers>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "paultrap/classical.hpp"
#include "paultrap/error.hpp"
#include "paultrap/hermite.hpp"
#include "paultrap/numerics.hpp"
#include "paultrap/signal.hpp"

namespace paultrap {

using Complex = std::complex<double>;

/// Quantum number n, free constant b0, and the first integral c0 of the
/// underlying classical solution. The normalization A0 is always recomputed.
class TrainSpec {
 public:
  TrainSpec(int n, double b0, double c0) : n_(n), b0_(b0), c0_(c0) {
    if (n < 0) throw Error(Errc::NegativeIndex, "quantum number must be non-negative");
    if (!(c0 > 0.0) || !std::isfinite(c0)) {
      throw Error(Errc::NonPositiveC0, "first integral c0 = " + std::to_string(c0) + " must be positive");
    }
    if (!std::isfinite(b0)) throw Error(Errc::InvalidArgument, "b0 must be finite");
  }

  int n() const noexcept { return n_; }
  double b0() const noexcept { return b0_; }
  double c0() const noexcept { return c0_; }

  /// A0 = [sqrt(c0) / (sqrt(pi) 2^n n!)]^{1/2}, evaluated in log form.
  double A0() const {
    const double log_a0 = 0.5 * (0.5 * std::log(c0_) - 0.5 * std::log(std::numbers::pi) -
                                 n_ * std::numbers::ln2 - std::lgamma(n_ + 1.0));
    return std::exp(log_a0);
  }

  TrainSpec with_n(int n) const { return TrainSpec(n, b0_, c0_); }

 private:
  int n_;
  double b0_;
  double c0_;
};

struct CoefficientSet {
  double t = 0.0;
  Complex b;
  double e = 0.0;
  double f = 0.0;
  Complex a_n;
};

/// The classical data needed to evaluate psi_n at one instant.
struct TrainFrame {
  TrainFrame(const PolarState& p, const TrainSpec& s)
      : t(p.t), rho(p.rho), theta(p.theta), drho(p.drho), dtheta(p.dtheta), spec(s) {
    if (!(rho > 0.0)) throw Error(Errc::OriginCrossing, "frame requires rho > 0");
  }

  double t;
  double rho;
  double theta;
  double drho;
  double dtheta;
  TrainSpec spec;
};

inline TrainFrame frame_at(const PolarTrack& track, const TrainSpec& spec, double t) {
  return TrainFrame(track.polar_at(t), spec);
}

inline double xi_of(const TrainFrame& frame, double x) {
  const double sc = std::sqrt(frame.spec.c0());
  return sc * x / frame.rho - (frame.spec.b0() / sc) * std::cos(frame.theta);
}

/// Coefficient functions b, e, f, a_n of the Gaussian-Hermite ansatz.
inline CoefficientSet coefficients(const PolarState& p, const TrainSpec& spec) {
  if (!(spec.c0() > 0.0)) throw Error(Errc::NonPositiveC0, "c0 must be positive");
  if (!(p.rho > 0.0)) throw Error(Errc::OriginCrossing, "coefficients require rho > 0");
  const double c0 = spec.c0();
  const double b0 = spec.b0();
  const double sc = std::sqrt(c0);
  CoefficientSet out;
  out.t = p.t;
  out.b = b0 * std::exp(Complex(0.0, -p.theta)) / p.rho;
  out.e = sc / p.rho;
  out.f = (b0 / sc) * std::cos(p.theta);
  const double phase = (0.5 + spec.n()) * p.theta - (b0 * b0 / (4.0 * c0)) * std::sin(2.0 * p.theta);
  out.a_n = (spec.A0() / std::sqrt(p.rho)) * std::exp(Complex(0.0, -phase));
  return out;
}

inline double amplitude(const TrainFrame& frame, double x) {
  return std::pow(frame.spec.c0(), 0.25) / std::sqrt(frame.rho) * hermite_scaled(frame.spec.n(), xi_of(frame, x));
}

inline double phase(const TrainFrame& frame, double x) {
  const double b0 = frame.spec.b0();
  return frame.drho * x * x / (2.0 * frame.rho) - (b0 * x / frame.rho) * std::sin(frame.theta) +
         (b0 * b0 / (4.0 * frame.spec.c0())) * std::sin(2.0 * frame.theta) - (0.5 + frame.spec.n()) * frame.theta;
}

inline Complex psi(const TrainFrame& frame, double x) {
  const double r = amplitude(frame, x);
  const double th = phase(frame, x);
  return {r * std::cos(th), r * std::sin(th)};
}

/// Complex wavefunction samples on a space grid at one time.
struct FieldGrid {
  UniformGrid grid;
  double t = 0.0;
  std::vector<Complex> values;
  double norm = 0.0;          // Simpson value of \int |psi|^2 dx at construction
  bool norm_deficit = false;  // |norm - 1| exceeded the tolerance of the producer

  std::vector<double> density() const {
    std::vector<double> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) out[i] = std::norm(values[i]);
    return out;
  }
};

inline double norm_of(std::span<const Complex> values, const UniformGrid& grid) {
  std::vector<double> d(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) d[i] = std::norm(values[i]);
  return simpson<double>(d, grid.step()).value;
}

inline FieldGrid make_field(const UniformGrid& grid, double t, std::vector<Complex> values, double norm_tolerance = 1e-6) {
  if (values.size() != grid.size()) throw Error(Errc::GridMismatch, "field sample count does not match grid");
  for (const auto& v : values) {
    if (!is_finite(v)) throw Error(Errc::NonFiniteValue, "field contains a non-finite value");
  }
  FieldGrid out{grid, t, std::move(values)};
  out.norm = norm_of(out.values, grid);
  out.norm_deficit = std::abs(out.norm - 1.0) > norm_tolerance;
  return out;
}

inline FieldGrid psi_on_grid(const TrainFrame& frame, const UniformGrid& grid, double norm_tolerance = 1e-6) {
  std::vector<Complex> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) values[i] = psi(frame, grid[i]);
  return make_field(grid, frame.t, std::move(values), norm_tolerance);
}

/// Orbit of the train center (xi = 0): x_c = (b0/c0) phi1(t).
inline double center_orbit(const PolarTrack& track, const TrainSpec& spec, double t) {
  return spec.b0() / spec.c0() * track.state_at(t).phi1;
}

inline double center_of(const TrainFrame& frame) {
  return frame.spec.b0() / frame.spec.c0() * frame.rho * std::cos(frame.theta);
}

inline void require_same_grid(const FieldGrid& a, const FieldGrid& b, bool same_time) {
  if (!a.grid.matches(b.grid)) throw Error(Errc::GridMismatch, "fields live on different grids");
  if (same_time && std::abs(a.t - b.t) > 1e-12 * (1.0 + std::abs(a.t))) {
    throw Error(Errc::GridMismatch, "fields are sampled at different times");
  }
}

/// <a|b> = \int conj(a) b dx by Simpson quadrature.
inline Complex overlap(const FieldGrid& a, const FieldGrid& b) {
  require_same_grid(a, b, true);
  std::vector<Complex> integrand(a.values.size());
  for (std::size_t i = 0; i < integrand.size(); ++i) integrand[i] = std::conj(a.values[i]) * b.values[i];
  return simpson<Complex>(integrand, a.grid.step()).value;
}

/// dTheta_n/dt = quad x^2 + lin x + constant, in closed form with
/// rho'' = rho theta'^2 - k rho.
struct PhaseRate {
  double quad = 0.0;
  double lin = 0.0;
  double constant = 0.0;

  double at(double x) const { return (quad * x + lin) * x + constant; }
};

inline PhaseRate phase_rate(const TrainFrame& frame, double spring) {
  const double rho = frame.rho;
  const double drho = frame.drho;
  const double dtheta = frame.dtheta;
  const double ddrho = rho * dtheta * dtheta - spring * rho;
  const double b0 = frame.spec.b0();
  PhaseRate r;
  r.quad = 0.5 * (ddrho / rho - drho * drho / (rho * rho));
  r.lin = -b0 * (std::cos(frame.theta) * dtheta / rho - std::sin(frame.theta) * drho / (rho * rho));
  r.constant = (b0 * b0 / (2.0 * frame.spec.c0())) * std::cos(2.0 * frame.theta) * dtheta - (0.5 + frame.spec.n()) * dtheta;
  return r;
}

/// dTheta_n/dx, the local wavenumber carried by the phase.
inline double phase_gradient(const TrainFrame& frame, double x) {
  return (frame.drho * x - frame.spec.b0() * std::sin(frame.theta)) / frame.rho;
}

/// Mean energy E_n = <psi_n| i d/dt |psi_n> = -\int R_n^2 dTheta_n/dt dx.
inline double mean_energy(const PolarTrack& track, const TrainSpec& spec, double t, const UniformGrid& grid) {
  const TrainFrame frame = frame_at(track, spec, t);
  const PhaseRate rate = phase_rate(frame, track.params().spring(t));
  std::vector<double> integrand(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid[i];
    const double r = amplitude(frame, x);
    integrand[i] = r * r * rate.at(x);
  }
  return -simpson<double>(integrand, grid.step()).value;
}

/// Largest residual of each coefficient equation over the trajectory samples:
///   i c' = 2c^2 - k/2,  i b' = 2bc,  i e' = 2ce - e^3,  i f' = be - e^2 f,
///   i a_n'/a_n = i f f' - b^2/2 + c + n e^2,
/// with time derivatives by central differences of the sampled coefficients;
/// a_n'/a_n is the derivative of log|a_n| + i arg a_n (phase unwrapped).
struct CoefficientResiduals {
  double c = 0.0;
  double b = 0.0;
  double e = 0.0;
  double f = 0.0;
  double a = 0.0;

  double max() const { return std::max({c, b, e, f, a}); }
};

inline CoefficientResiduals coefficient_residuals(const PolarTrack& track, const TrainSpec& spec) {
  const auto& polar = track.polar();
  const UniformGrid& grid = track.trajectory().grid();
  const std::size_t n = polar.size();
  std::vector<Complex> cs(n), bs(n);
  std::vector<double> es(n), fs(n), log_mod(n), raw_arg(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto co = coefficients(polar[i], spec);
    cs[i] = riccati_c(polar[i]);
    bs[i] = co.b;
    es[i] = co.e;
    fs[i] = co.f;
    log_mod[i] = std::log(std::abs(co.a_n));
    raw_arg[i] = std::arg(co.a_n);
  }
  const auto arg = unwrap_phase(raw_arg);
  const auto dc = central_diff(SampledFunction<Complex>(grid, cs), 1).derivative.values;
  const auto db = central_diff(SampledFunction<Complex>(grid, bs), 1).derivative.values;
  const auto de = central_diff(SampledFunction<double>(grid, es), 1).derivative.values;
  const auto df = central_diff(SampledFunction<double>(grid, fs), 1).derivative.values;
  const auto dlog = central_diff(SampledFunction<double>(grid, log_mod), 1).derivative.values;
  const auto darg = central_diff(SampledFunction<double>(grid, arg), 1).derivative.values;

  const Complex I(0.0, 1.0);
  CoefficientResiduals out;
  for (std::size_t i = 0; i < n; ++i) {
    const double k = track.params().spring(polar[i].t);
    const Complex c = cs[i], b = bs[i];
    const double e = es[i], f = fs[i];
    out.c = std::max(out.c, std::abs(I * dc[i] - 2.0 * c * c + 0.5 * k));
    out.b = std::max(out.b, std::abs(I * db[i] - 2.0 * b * c));
    out.e = std::max(out.e, std::abs(I * de[i] - 2.0 * c * e + e * e * e));
    out.f = std::max(out.f, std::abs(I * df[i] - b * e + e * e * f));
    const Complex log_derivative(dlog[i], darg[i]);
    const Complex rhs = I * f * df[i] - 0.5 * b * b + c + static_cast<double>(spec.n()) * e * e;
    out.a = std::max(out.a, std::abs(I * log_derivative - rhs));
  }
  return out;
}

/// Interior zeros of R_n(., t) counted as sign changes on the grid.
inline std::size_t count_nodes(const TrainFrame& frame, const UniformGrid& grid) {
  std::vector<double> r(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) r[i] = amplitude(frame, grid[i]);
  return count_sign_changes(r);
}

inline std::size_t count_density_maxima(const FieldGrid& field) {
  const auto d = field.density();
  return count_local_maxima(d);
}

/// Local wavelength of R_n near the train center in x units.
inline double oscillation_length(const TrainFrame& frame) {
  return 2.0 * std::numbers::pi * frame.rho / (std::sqrt(frame.spec.c0()) * std::sqrt(2.0 * frame.spec.n() + 1.0));
}

/// True when the grid has more than 16 points per oscillation of R_n.
inline bool resolves_oscillations(const TrainFrame& frame, const UniformGrid& grid) {
  return grid.step() * 16.0 < oscillation_length(frame);
}

/// Half-width w = 8 (rho / sqrt(c0)) sqrt(2n+1) of a train's support.
inline double support_half_width(double rho, double c0, int n) {
  return 8.0 * (rho / std::sqrt(c0)) * std::sqrt(2.0 * n + 1.0);
}

/// Run-wide space grid: [min x_c - w, max x_c + w] with w built from the
/// largest rho of the run. Unless `count` is given, the point count is the
/// smallest power of two (at least 1024) with more than 16 points per
/// oscillation at the smallest rho of the run.
inline UniformGrid auto_space_grid(const PolarTrack& track, const TrainSpec& spec, std::optional<std::size_t> count = {}) {
  double xmin = 0.0, xmax = 0.0, rho_max = 0.0, rho_min = std::numeric_limits<double>::infinity();
  bool first = true;
  for (const auto& p : track.polar()) {
    const double xc = spec.b0() / spec.c0() * p.rho * std::cos(p.theta);
    xmin = first ? xc : std::min(xmin, xc);
    xmax = first ? xc : std::max(xmax, xc);
    first = false;
    rho_max = std::max(rho_max, p.rho);
    rho_min = std::min(rho_min, p.rho);
  }
  const double w = support_half_width(rho_max, spec.c0(), spec.n());
  const double half = 0.5 * (xmax - xmin) + w;
  const double center = 0.5 * (xmax + xmin);
  if (count) return build_space_grid(center, half, *count);
  const double wavelength = 2.0 * std::numbers::pi * rho_min / (std::sqrt(spec.c0()) * std::sqrt(2.0 * spec.n() + 1.0));
  std::size_t points = 1024;
  while (2.0 * half / static_cast<double>(points) * 16.0 >= wavelength) points *= 2;
  return build_space_grid(center, half, points);
}

/// Grid centered on the train at one instant, covering x_c(t) +/- w(t).
inline UniformGrid local_space_grid(const TrainFrame& frame, std::size_t count = 2048) {
  return build_space_grid(center_of(frame), support_half_width(frame.rho, frame.spec.c0(), frame.spec.n()), count);
}

}  // namespace paultrap
