#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "kcert/checkpoint.hpp"
#include "kcert/field.hpp"
#include "kcert/logdepth.hpp"
#include "kcert/recursive.hpp"

namespace kcert {

// Predicted Verifier costs (field operations) for each protocol, used by the
// bench report and the acceptance gates.

/// Delegated variant: 2mu + 10Kn + ceil(delta/K)(2K + 6n).
inline u64 dense_cost_bound(u64 n, u64 delta, u64 mu, u64 k) {
  return 2 * mu + 10 * k * n + ceil_div(delta, k) * (2 * k + 6 * n);
}

/// Recursive bound for a k-level run with the given (decreasing) strides:
/// each delegated level pays its own block checks, the combination test and
/// one extra block, plus the two sub-levels.
inline u64 klevel_cost_bound(u64 n, u64 delta, u64 mu, std::span<const u64> strides) {
  const u64 k = strides[0];
  if (k <= kDirectStrideLimit) return checkpoint_cost_bound(n, delta, mu, k) + 2 * n;
  if (strides.size() == 1) return dense_cost_bound(n, delta, mu, k) + 2 * n;
  const u64 sub = strides[1];
  const u64 z_delta = sub == 1 ? k : k - 1;
  const u64 own = (ceil_div(delta, k) + 1) * (2 * k + 6 * n) + 2 * k + 2 * n;
  return own + klevel_cost_bound(n, z_delta, mu, strides.subspan(1)) +
         klevel_cost_bound(n, k - 1, mu, strides.subspan(1));
}

inline double log2d(u64 x) { return std::log2(static_cast<double>(x)); }

/// Power certificate, log variant: (mu + 8n) log2 d + mu.
inline double power_log_cost_bound(u64 n, u64 d, u64 mu) { return (mu + 8.0 * n) * log2d(d) + mu; }

/// Power certificate, single variant: mu + 8n + 12n log2 d.
inline double power_single_cost_bound(u64 n, u64 d, u64 mu) { return mu + 8.0 * n + 12.0 * n * log2d(d); }

/// Sequence certificate, log variant: mu/2 log2^2 d + 4n log2^2 d.
inline double sequence_log_cost_bound(u64 n, u64 d, u64 mu) {
  const double l = log2d(d);
  return 0.5 * mu * l * l + 4.0 * n * l * l;
}

/// Sequence certificate, single variant: mu log2 d + 6n log2^2 d.
inline double sequence_single_cost_bound(u64 n, u64 d, u64 mu) {
  const double l = log2d(d);
  return mu * l + 6.0 * n * l * l;
}

/// Least-squares slope of log y against log x.
inline double loglog_slope(std::span<const double> x, std::span<const double> y) {
  const std::size_t m = std::min(x.size(), y.size());
  if (m < 2) return std::nan("");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double den = m * sxx - sx * sx;
  return den == 0 ? std::nan("") : (m * sxy - sx * sy) / den;
}

}  // namespace kcert
