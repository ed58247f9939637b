#pragma once

#include <cmath>
#include <numbers>

#include "paultrap/error.hpp"

namespace paultrap {

/// Normalized Hermite function h_n(xi) = H_n(xi) exp(-xi^2/2) / sqrt(sqrt(pi) 2^n n!).
///
/// Uses the scaled three-term recurrence
///   h_{k+1} = xi sqrt(2/(k+1)) h_k - sqrt(k/(k+1)) h_{k-1},
/// run without the Gaussian factor and rescaled whenever the iterate grows
/// large; the Gaussian and the accumulated scale are applied once at the end,
/// so neither overflow nor premature underflow occurs for large n or |xi|.
inline double hermite_scaled(int n, double xi) {
  if (n < 0) throw Error(Errc::NegativeIndex, "Hermite index must be non-negative");
  constexpr double big = 1e150;
  constexpr double log_big = 345.38776394910684;  // ln(1e150)
  double log_scale = -0.5 * xi * xi;
  double previous = 0.0;
  double current = 1.0 / std::sqrt(std::sqrt(std::numbers::pi));
  for (int k = 0; k < n; ++k) {
    const double next = xi * std::sqrt(2.0 / (k + 1.0)) * current - std::sqrt(k / (k + 1.0)) * previous;
    previous = current;
    current = next;
    if (std::abs(current) > big) {
      current /= big;
      previous /= big;
      log_scale += log_big;
    }
  }
  if (current == 0.0) return 0.0;
  if (log_scale > -700.0 && log_scale < 700.0) return current * std::exp(log_scale);
  return std::copysign(std::exp(std::log(std::abs(current)) + log_scale), current);
}

}  // namespace paultrap
