#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

namespace bdsep::detail {

struct PoissonWindow {
  std::int64_t lo = 0;
  std::int64_t hi = 0;
  std::vector<double> weights;  // weights[k - lo] = pmf(k)
};

// Poisson(a) probabilities over a window whose complement carries mass below
// budget.  Weights spread by recurrence from the mode, so the window stays
// usable far beyond the range where e^{-a} underflows.
inline PoissonWindow poisson_window(double a, double budget) {
  PoissonWindow win;
  if (a <= 0.0) {
    win.weights = {1.0};
    return win;
  }
  const std::int64_t mode = static_cast<std::int64_t>(a);
  const double log_mode =
      static_cast<double>(mode) * std::log(a) - a -
      std::lgamma(static_cast<double>(mode) + 1.0);
  double half = 16.0 + 8.0 * std::sqrt(a);
  for (;;) {
    const std::int64_t lo =
        std::max<std::int64_t>(0, mode - static_cast<std::int64_t>(half));
    const std::int64_t hi = mode + static_cast<std::int64_t>(half);
    std::vector<double> w(static_cast<std::size_t>(hi - lo + 1));
    w[static_cast<std::size_t>(mode - lo)] = std::exp(log_mode);
    for (std::int64_t k = mode; k > lo; --k) {
      w[static_cast<std::size_t>(k - 1 - lo)] =
          w[static_cast<std::size_t>(k - lo)] * static_cast<double>(k) / a;
    }
    for (std::int64_t k = mode; k < hi; ++k) {
      w[static_cast<std::size_t>(k + 1 - lo)] =
          w[static_cast<std::size_t>(k - lo)] * a / static_cast<double>(k + 1);
    }
    long double total = 0.0L;
    for (double x : w) total += x;
    const bool saturated =
        lo == 0 && w.back() < std::numeric_limits<double>::min();
    if (1.0L - total <= static_cast<long double>(budget) || saturated) {
      win.lo = lo;
      win.hi = hi;
      win.weights = std::move(w);
      return win;
    }
    half *= 2.0;
  }
}

}  // namespace bdsep::detail
