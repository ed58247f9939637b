#pragma once

// Small analysis helpers over sampled signals: phase unwrapping, period
// estimation, and counting of maxima and sign changes.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "paultrap/error.hpp"

namespace paultrap {

/// Continues `raw` (values in (-pi, pi]) onto the branch nearest to the
/// previous sample. A raw jump of pi or more means the sampling is too coarse
/// to decide the branch, which is reported instead of guessed.
inline std::vector<double> unwrap_phase(std::span<const double> raw, double first_offset = 0.0) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  std::vector<double> out(raw.size());
  if (raw.empty()) return out;
  out[0] = raw[0] + first_offset;
  for (std::size_t i = 1; i < raw.size(); ++i) {
    double delta = raw[i] - raw[i - 1];
    delta -= two_pi * std::round(delta / two_pi);
    if (std::abs(delta) >= std::numbers::pi * (1.0 - 1e-12)) {
      throw Error(Errc::BranchJump, "adjacent phases differ by >= pi at sample " + std::to_string(i));
    }
    out[i] = out[i - 1] + delta;
  }
  return out;
}

/// Fundamental period of a sampled signal, from the mean squared difference
/// D(T) = <(s(t+T) - s(t))^2>. The period is the location of the minimum of
/// the first basin (after the zero-lag basin) where D drops below
/// `basin_fraction * max D`. Lags are searched up to 3/4 of the record.
/// Returns NaN when no such basin exists.
inline double fundamental_period(std::span<const double> s, double step, double basin_fraction = 0.1) {
  const std::size_t n = s.size();
  if (n < 8) throw Error(Errc::TooFewPoints, "period estimation needs at least 8 samples");
  const std::size_t max_lag = (3 * n) / 4;
  std::vector<double> d(max_lag + 1, 0.0);
  for (std::size_t lag = 1; lag <= max_lag; ++lag) {
    double acc = 0.0;
    for (std::size_t i = 0; i + lag < n; ++i) {
      const double diff = s[i + lag] - s[i];
      acc += diff * diff;
    }
    d[lag] = acc / static_cast<double>(n - lag);
  }
  const double dmax = *std::max_element(d.begin(), d.end());
  if (!(dmax > 0.0)) return std::nan("");
  const double threshold = basin_fraction * dmax;
  std::size_t lag = 1;
  while (lag <= max_lag && d[lag] < threshold) ++lag;  // leave the zero-lag basin
  while (lag <= max_lag && d[lag] >= threshold) ++lag;  // reach the next basin
  if (lag > max_lag) return std::nan("");
  std::size_t best = lag;
  while (lag <= max_lag && d[lag] < threshold) {
    if (d[lag] < d[best]) best = lag;
    ++lag;
  }
  double refined = static_cast<double>(best);
  if (best >= 1 && best < max_lag) {
    const double a = d[best - 1], b = d[best], c = d[best + 1];
    const double denom = a - 2.0 * b + c;
    if (denom > 0.0) refined += 0.5 * (a - c) / denom;
  }
  return refined * step;
}

/// Strict interior local maxima whose value exceeds `relative_floor * max`.
inline std::size_t count_local_maxima(std::span<const double> v, double relative_floor = 1e-10) {
  if (v.size() < 3) return 0;
  const double vmax = *std::max_element(v.begin(), v.end());
  const double floor = relative_floor * vmax;
  std::size_t count = 0;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    if (v[i] > floor && v[i] > v[i - 1] && v[i] >= v[i + 1]) ++count;
  }
  return count;
}

/// Sign changes between adjacent samples, ignoring samples whose magnitude is
/// below `relative_floor * max|v|` (underflowed tails carry no sign).
inline std::size_t count_sign_changes(std::span<const double> v, double relative_floor = 1e-10) {
  double vmax = 0.0;
  for (double x : v) vmax = std::max(vmax, std::abs(x));
  const double floor = relative_floor * vmax;
  std::size_t count = 0;
  int previous = 0;
  for (double x : v) {
    if (std::abs(x) <= floor) continue;
    const int sign = x > 0.0 ? 1 : -1;
    if (previous != 0 && sign != previous) ++count;
    previous = sign;
  }
  return count;
}

}  // namespace paultrap
