#include "bdsep/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace bdsep {

namespace {

constexpr int kMaxBisectIter = 200;

// Bisection runs in long double down to a few ulps relative so that small
// eigenvalues keep full relative precision; tail evaluations multiply any
// eigenvalue error by the time horizon, so absolute-only precision is not
// enough.  The absolute floor exists for the zero mode.
constexpr long double kBisectRelTol =
    4.0L * std::numeric_limits<long double>::epsilon();
constexpr long double kBisectAbsFloor = 1e-30L;

// Number of eigenvalues of the tridiagonal (d, e) not exceeding x, read off
// the signs of the LDL^T pivots.  Near-zero pivots are forced negative,
// which keeps the count monotone in x.
int sturm_count(const std::vector<long double>& d,
                const std::vector<long double>& e2, long double x,
                long double pivmin) {
  int count = 0;
  long double q = d[0] - x;
  for (std::size_t i = 0;;) {
    if (std::fabs(q) < pivmin) q = -pivmin;
    if (q < 0.0L) ++count;
    if (++i == d.size()) break;
    q = d[i] - x - e2[i - 1] / q;
  }
  return count;
}

}  // namespace

Spectrum::Spectrum(std::vector<double> lambdas) : lambdas_(std::move(lambdas)) {
  if (lambdas_.empty()) {
    throw InvalidParams("a spectrum needs at least one rate");
  }
  double prev = 0.0;
  for (double v : lambdas_) {
    if (!std::isfinite(v) || v <= 0.0) {
      throw InvalidParams("rates must be finite and positive");
    }
    if (v < prev) {
      throw InvalidParams("rates must be sorted ascending");
    }
    prev = v;
  }
  if (lambdas_.back() > 2.0 + 1e-9) {
    throw InvalidParams("rates of a probability kernel cannot exceed 2");
  }
}

Spectrum eigenvalues(const BirthDeathChain& chain) {
  auto& cache = chain.spectrum_cache();
  std::call_once(cache.once, [&chain, &cache] {
    const SymmetricTridiagonal tri = symmetrize(chain);
    const std::size_t n = tri.diag.size();
    std::vector<long double> d(n);
    std::vector<long double> e2(n - 1);
    long double e2max = 1.0L;
    for (std::size_t i = 0; i < n; ++i) d[i] = tri.diag[i];
    for (std::size_t i = 0; i + 1 < n; ++i) {
      e2[i] = static_cast<long double>(tri.off[i]) * tri.off[i];
      e2max = std::max(e2max, e2[i]);
    }
    const long double pivmin =
        static_cast<long double>(std::numeric_limits<double>::min()) * e2max;

    long double lo = std::numeric_limits<long double>::infinity();
    long double hi = -lo;
    for (std::size_t i = 0; i < n; ++i) {
      long double radius = 0.0L;
      if (i > 0) radius += std::fabs(tri.off[i - 1]);
      if (i + 1 < n) radius += std::fabs(tri.off[i]);
      lo = std::min(lo, d[i] - radius);
      hi = std::max(hi, d[i] + radius);
    }
    const long double margin =
        1e-8L * std::max({1.0L, std::fabs(lo), std::fabs(hi)});
    lo -= margin;
    hi += margin;

    auto bisect = [&](int k) {
      long double a = lo;
      long double b = hi;
      auto tol = [&] {
        return kBisectRelTol * (std::fabs(a) + std::fabs(b)) + kBisectAbsFloor;
      };
      for (int it = 0; it < kMaxBisectIter && (b - a) > tol(); ++it) {
        const long double mid = 0.5L * (a + b);
        if (sturm_count(d, e2, mid, pivmin) >= k + 1) {
          b = mid;
        } else {
          a = mid;
        }
      }
      if (b - a > tol()) {
        throw ConvergenceFailure("eigenvalue " + std::to_string(k) +
                                 " did not converge");
      }
      return static_cast<double>(0.5L * (a + b));
    };

    std::vector<double> lam(n);
    for (int k = 0; k < static_cast<int>(n); ++k) {
      lam[static_cast<std::size_t>(k)] = bisect(k);
    }
    const double lam_top = lam[n - 1];
    for (std::size_t i = 1; i < n; ++i) {
      lam[i] = std::max(lam[i], lam[i - 1]);
    }

    const double zero_tol = 1e-9 * std::max(1.0, lam_top);
    if (std::fabs(lam[0]) > zero_tol) {
      throw ConvergenceFailure("constant mode missing from the spectrum");
    }
    if (lam[1] <= std::fabs(lam[0]) || lam[1] <= 0.0) {
      throw ConvergenceFailure("spectral gap not resolvable");
    }
    cache.lambdas.assign(lam.begin() + 1, lam.end());
    for (double& v : cache.lambdas) v = std::min(v, 2.0);
  });
  return Spectrum(cache.lambdas);
}

}  // namespace bdsep
