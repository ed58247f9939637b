#pragma once

// Generic numerical kernels shared by the classical, quantum and PDE layers:
// uniform grids, fixed-step RK4, composite Simpson quadrature and central
// finite differences.

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "paultrap/error.hpp"

namespace paultrap {

inline bool is_finite(double v) noexcept { return std::isfinite(v); }
inline bool is_finite(const std::complex<double>& v) noexcept {
  return std::isfinite(v.real()) && std::isfinite(v.imag());
}

/// Equally spaced points start + i*step, i = 0..count-1. Points are computed
/// directly from the index, never by accumulation.
class UniformGrid {
 public:
  UniformGrid(double start, double step, std::size_t count) : start_(start), step_(step), count_(count) {
    if (count == 0) throw Error(Errc::EmptyGrid, "grid has no points");
    if (count < 2) throw Error(Errc::TooFewPoints, "grid needs at least 2 points");
    if (!(step > 0.0) || !std::isfinite(step)) throw Error(Errc::InvalidArgument, "grid step must be positive");
    if (!std::isfinite(start)) throw Error(Errc::NonFiniteValue, "grid start is not finite");
  }

  double start() const noexcept { return start_; }
  double step() const noexcept { return step_; }
  std::size_t size() const noexcept { return count_; }
  double operator[](std::size_t i) const noexcept { return std::fma(static_cast<double>(i), step_, start_); }
  double back() const noexcept { return (*this)[count_ - 1]; }
  double span() const noexcept { return step_ * static_cast<double>(count_ - 1); }

  std::vector<double> points() const {
    std::vector<double> out(count_);
    for (std::size_t i = 0; i < count_; ++i) out[i] = (*this)[i];
    return out;
  }

  /// Grids compare equal when every point coincides to a few ulps.
  bool matches(const UniformGrid& other) const noexcept {
    if (count_ != other.count_) return false;
    const double tol = 8.0 * 2.220446049250313e-16 * (std::abs(start_) + std::abs(back()) + step_);
    return std::abs(start_ - other.start_) <= tol && std::abs(step_ - other.step_) <= tol / static_cast<double>(count_);
  }

 private:
  double start_;
  double step_;
  std::size_t count_;
};

/// Uniform grid over [0, t_end] with the given step; the number of steps is
/// rounded to the nearest integer and the step is kept exactly.
inline UniformGrid make_time_grid(double t_end, double step) {
  if (!(step > 0.0)) throw Error(Errc::InvalidArgument, "time step must be positive");
  if (!(t_end > 0.0)) throw Error(Errc::InvalidArgument, "time span must be positive");
  const auto steps = static_cast<std::size_t>(std::llround(t_end / step));
  return UniformGrid(0.0, step, std::max<std::size_t>(steps, 1) + 1);
}

/// Uniform grid over [0, t_end] with exactly `intervals` equal intervals.
inline UniformGrid make_time_grid_intervals(double t_end, std::size_t intervals) {
  if (intervals == 0) throw Error(Errc::InvalidCount, "need at least one interval");
  return UniformGrid(0.0, t_end / static_cast<double>(intervals), intervals + 1);
}

/// Values sampled on a uniform grid.
template <class T>
struct SampledFunction {
  SampledFunction(UniformGrid g, std::vector<T> v) : grid(g), values(std::move(v)) {
    if (values.size() != grid.size()) throw Error(Errc::InvalidCount, "sample count does not match grid");
    for (const T& value : values) {
      if (!is_finite(value)) throw Error(Errc::NonFiniteValue, "sampled function has a non-finite value");
    }
  }

  UniformGrid grid;
  std::vector<T> values;
};

template <class T>
struct QuadratureResult {
  T value{};
  bool degraded = false;  // even sample count: last interval used the trapezoid rule
};

/// Composite Simpson rule on equally spaced samples. Summation is sequential
/// in index order so results do not depend on any parallel decomposition.
template <class T>
QuadratureResult<T> simpson(std::span<const T> f, double h) {
  const std::size_t n = f.size();
  if (n < 3) throw Error(Errc::TooFewPoints, "Simpson rule needs at least 3 points");
  const bool even_count = (n % 2 == 0);
  const std::size_t last = even_count ? n - 2 : n - 1;  // index ending the Simpson part
  T odd{}, even{};
  for (std::size_t i = 1; i < last; i += 2) odd += f[i];
  for (std::size_t i = 2; i < last; i += 2) even += f[i];
  T value = (f[0] + f[last] + 4.0 * odd + 2.0 * even) * (h / 3.0);
  if (even_count) value += (f[n - 2] + f[n - 1]) * (h / 2.0);
  return {value, even_count};
}

template <class T>
QuadratureResult<T> simpson(const SampledFunction<T>& samples) {
  return simpson(std::span<const T>(samples.values), samples.grid.step());
}

/// Running integral I[i] = \int_{x_0}^{x_i} f on equally spaced samples.
/// Even nodes use composite Simpson; odd nodes add the third-order one-interval
/// rule h/12 (-f_{i-2} + 8 f_{i-1} + 5 f_i) to the preceding even node.
template <class T>
std::vector<T> cumulative_simpson(std::span<const T> f, double h) {
  const std::size_t n = f.size();
  if (n < 3) throw Error(Errc::TooFewPoints, "cumulative Simpson needs at least 3 points");
  std::vector<T> out(n);
  out[0] = T{};
  out[1] = (5.0 * f[0] + 8.0 * f[1] - f[2]) * (h / 12.0);
  for (std::size_t i = 2; i < n; ++i) {
    if (i % 2 == 0) {
      out[i] = out[i - 2] + (f[i - 2] + 4.0 * f[i - 1] + f[i]) * (h / 3.0);
    } else {
      out[i] = out[i - 1] + (-f[i - 2] + 8.0 * f[i - 1] + 5.0 * f[i]) * (h / 12.0);
    }
  }
  return out;
}

template <class T>
struct DiffResult {
  SampledFunction<T> derivative;
  int accuracy_order = 2;
};

/// First or second derivative by second-order central differences in the
/// interior and second-order one-sided stencils at both ends.
template <class T>
DiffResult<T> central_diff(const SampledFunction<T>& samples, int order) {
  const auto& f = samples.values;
  const std::size_t n = f.size();
  const double h = samples.grid.step();
  if (n < 3) throw Error(Errc::TooFewPoints, "central differences need at least 3 points");
  if (order != 1 && order != 2) throw Error(Errc::InvalidArgument, "derivative order must be 1 or 2");
  std::vector<T> d(n);
  int accuracy = 2;
  if (order == 1) {
    for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
    d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
    d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
  } else {
    const double h2 = h * h;
    for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - 2.0 * f[i] + f[i - 1]) / h2;
    if (n >= 4) {
      d[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / h2;
      d[n - 1] = (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]) / h2;
    } else {
      d[0] = d[1];
      d[n - 1] = d[1];
      accuracy = 0;  // three points: ends just copy the single central value
    }
  }
  return {SampledFunction<T>(samples.grid, std::move(d)), accuracy};
}

/// Symmetric grid about `center` with a power-of-two point count; the right
/// end point is excluded so the grid is also a periodic FFT grid.
inline UniformGrid build_space_grid(double center, double half_width, std::size_t count) {
  if (count < 2 || !std::has_single_bit(count)) throw Error(Errc::InvalidCount, "space grid count must be a power of two >= 2");
  if (!(half_width > 0.0) || !std::isfinite(half_width)) throw Error(Errc::InvalidArgument, "half width must be positive");
  return UniformGrid(center - half_width, 2.0 * half_width / static_cast<double>(count), count);
}

template <std::size_t N>
using StateVector = std::array<double, N>;

namespace detail {

template <std::size_t N>
StateVector<N> axpy(const StateVector<N>& y, double a, const StateVector<N>& k) {
  StateVector<N> out;
  for (std::size_t i = 0; i < N; ++i) out[i] = y[i] + a * k[i];
  return out;
}

template <std::size_t N>
void require_finite(const StateVector<N>& v, double t) {
  for (double x : v) {
    if (!std::isfinite(x)) throw Error(Errc::NonFiniteValue, "RK4 stage became non-finite at t=" + std::to_string(t));
  }
}

}  // namespace detail

/// One classical fourth-order Runge-Kutta step of size h from (t, y).
template <std::size_t N, class Rhs>
StateVector<N> rk4_step(const Rhs& rhs, double t, const StateVector<N>& y, double h) {
  const StateVector<N> k1 = rhs(t, y);
  detail::require_finite(k1, t);
  const StateVector<N> k2 = rhs(t + 0.5 * h, detail::axpy(y, 0.5 * h, k1));
  detail::require_finite(k2, t);
  const StateVector<N> k3 = rhs(t + 0.5 * h, detail::axpy(y, 0.5 * h, k2));
  detail::require_finite(k3, t);
  const StateVector<N> k4 = rhs(t + h, detail::axpy(y, h, k3));
  detail::require_finite(k4, t);
  StateVector<N> out;
  for (std::size_t i = 0; i < N; ++i) out[i] = y[i] + (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  detail::require_finite(out, t + h);
  return out;
}

/// Fixed-step RK4 over every interval of `grid`; result[i] is the state at grid[i].
template <std::size_t N, class Rhs>
std::vector<StateVector<N>> rk4_integrate(const Rhs& rhs, const StateVector<N>& y0, const UniformGrid& grid) {
  detail::require_finite(y0, grid.start());
  std::vector<StateVector<N>> out;
  out.reserve(grid.size());
  out.push_back(y0);
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    out.push_back(rk4_step(rhs, grid[i], out.back(), grid.step()));
  }
  return out;
}

}  // namespace paultrap
