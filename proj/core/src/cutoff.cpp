#include "bdsep/cutoff.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <future>
#include <utility>

#include "bdsep/errors.hpp"

namespace bdsep {

namespace {

void check_offset(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw InvalidParams("time offset fraction must be positive and finite");
  }
}

void check_level(double eps) {
  if (!(eps > 0.0) || !(eps < 1.0)) {
    throw InvalidParams("separation level must sit in (0, 1)");
  }
}

}  // namespace

CutoffStats cutoff_stats(const Spectrum& spectrum, TimeMode mode) {
  const Moments mo = moments(spectrum, mode);
  CutoffStats st;
  st.gap = spectrum.gap();
  st.mean_hit = mo.mean;
  st.window = std::sqrt(std::max(0.0, mo.variance));
  st.product_n = st.gap * mo.mean;
  st.theta2 = theta(spectrum, 2);
  return st;
}

BoundPair chebyshev_bounds(const CutoffStats& stats, double c) {
  check_offset(c);
  const double u = 1.0 / (1.0 + c * c * stats.product_n);
  return {u, 1.0 - u};
}

BoundPair exponential_bounds(const CutoffStats& stats, double c) {
  check_offset(c);
  const double raw =
      std::exp(-0.5 * (c * std::sqrt(stats.product_n) - 0.5));
  return {std::min(1.0, raw), std::max(0.0, 1.0 - raw)};
}

MixingBracket mixing_bracket(const CutoffStats& stats, double eps) {
  check_level(eps);
  const double a = std::sqrt(1.0 / eps - 1.0);
  return {std::max(0.0, stats.mean_hit - stats.window / a),
          stats.mean_hit + a * stats.window};
}

double mixing_time(const Spectrum& spectrum, double eps, TimeMode mode) {
  check_level(eps);
  if (mode == TimeMode::Discrete) {
    return static_cast<double>(sep_discrete_crossing(spectrum, eps));
  }
  HypoexponentialTail ev(spectrum);
  const Moments mo = moments(spectrum, TimeMode::Continuous);
  const double sigma = std::sqrt(std::max(0.0, mo.variance));
  // One-sided Chebyshev encloses the crossing: tail(mean + s*sqrt(1/e-1))
  // <= e and tail(mean - s*sqrt(e/(1-e))) >= e, so the bracket holds before
  // any tail is evaluated; the doubling loop only absorbs rounding at the
  // boundary.  Keeping hi near the crossing keeps the uniformized horizon
  // near its minimum, which matters for small-gap spectra.
  double lo = std::max(0.0, mo.mean - sigma * std::sqrt(eps / (1.0 - eps)));
  double hi = mo.mean + sigma * std::sqrt(1.0 / eps - 1.0);
  hi += 1e-9 * std::max(1.0, hi);
  int guard = 0;
  while (ev.tail(hi) > eps) {
    lo = hi;
    hi *= 2.0;
    if (++guard > 200) {
      throw ConvergenceFailure("tail never reached the target level");
    }
  }
  for (int iter = 0; iter < 200 && hi - lo > 1e-9 * hi; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (ev.tail(mid) > eps) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Cutoff:
      return "cutoff";
    case Verdict::NoCutoff:
      return "no_cutoff";
    default:
      return "inconclusive";
  }
}

std::string shape_name(ShapeClass s) {
  switch (s) {
    case ShapeClass::Gaussian:
      return "gaussian";
    case ShapeClass::NonGaussian:
      return "non_gaussian";
    default:
      return "not_applicable";
  }
}

ScanReport scan_family(const std::vector<FamilySpec>& specs, TimeMode mode,
                       const ScanOptions& options) {
  if (specs.size() < 3) {
    throw TooFewPoints("a sweep needs at least three sizes");
  }
  if (options.jobs < 1) {
    throw InvalidParams("jobs must be at least 1");
  }
  for (std::size_t i = 0; i + 1 < specs.size(); ++i) {
    if (!(size_param(specs[i + 1]) > size_param(specs[i]))) {
      throw InvalidParams("sweep sizes must strictly increase");
    }
  }

  ScanReport report;
  report.options = options;
  report.points.resize(specs.size());
  auto eval = [&](std::size_t i) {
    const Spectrum s = family_spectrum(specs[i]);
    ScanPoint& p = report.points[i];
    p.param = size_param(specs[i]);
    p.m = s.count();
    p.stats = cutoff_stats(s, mode);
    for (int k = 2; k <= 8; ++k) {
      p.theta_diag[static_cast<std::size_t>(k - 2)] = theta(s, k);
    }
  };
  const auto jobs = std::min<std::size_t>(
      static_cast<std::size_t>(options.jobs), specs.size());
  if (jobs <= 1) {
    for (std::size_t i = 0; i < specs.size(); ++i) eval(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::future<void>> workers;
    workers.reserve(jobs);
    for (std::size_t w = 0; w < jobs; ++w) {
      workers.push_back(std::async(std::launch::async, [&] {
        for (std::size_t i = next.fetch_add(1); i < specs.size();
             i = next.fetch_add(1)) {
          eval(i);
        }
      }));
    }
    for (auto& f : workers) f.get();
  }

  const std::size_t count = report.points.size();
  const std::size_t half = count / 2;
  auto climbing = [&](auto&& value) {
    for (std::size_t i = half; i + 1 < count; ++i) {
      if (!(value(report.points[i + 1]) > value(report.points[i]))) {
        return false;
      }
    }
    return true;
  };
  auto n_of = [](const ScanPoint& p) { return p.stats.product_n; };
  double n_min = n_of(report.points.front());
  double n_max = n_min;
  for (const auto& p : report.points) {
    n_min = std::min(n_min, n_of(p));
    n_max = std::max(n_max, n_of(p));
  }

  if (n_of(report.points.back()) > options.divergence_threshold &&
      climbing(n_of)) {
    report.verdict = Verdict::Cutoff;
  } else if (n_max / n_min < options.bounded_ratio) {
    report.verdict = Verdict::NoCutoff;
  } else {
    report.verdict = Verdict::Inconclusive;
  }

  if (report.verdict == Verdict::Cutoff) {
    auto t2_of = [](const ScanPoint& p) { return p.stats.theta2; };
    const bool gaussian =
        t2_of(report.points.back()) > options.shape_growth_threshold &&
        climbing(t2_of);
    report.shape =
        gaussian ? ShapeClass::Gaussian : ShapeClass::NonGaussian;
  } else {
    report.shape = ShapeClass::NotApplicable;
  }
  return report;
}

ShapeProfile shape_profile(const Spectrum& spectrum,
                           const std::vector<double>& c_grid) {
  if (c_grid.empty()) {
    throw TooFewPoints("profile grid is empty");
  }
  for (double c : c_grid) {
    if (!(std::fabs(c) <= 6.0)) {
      throw InvalidParams("profile grid must stay within |c| <= 6");
    }
  }
  const Moments mo = moments(spectrum, TimeMode::Continuous);
  ShapeProfile pr;
  pr.grid = c_grid;
  pr.mean_hit = mo.mean;
  pr.window = std::sqrt(std::max(0.0, mo.variance));
  pr.coupon_scale = 1.0 / spectrum.gap();
  constexpr double kEulerGamma = 0.57721566490153286;

  std::vector<double> gauss_times(c_grid.size());
  std::vector<double> gumbel_times(c_grid.size());
  for (std::size_t i = 0; i < c_grid.size(); ++i) {
    gauss_times[i] = std::max(0.0, pr.mean_hit + c_grid[i] * pr.window);
    gumbel_times[i] = std::max(
        0.0, pr.mean_hit + pr.coupon_scale * (c_grid[i] - kEulerGamma));
  }
  HypoexponentialTail ev(spectrum);
  pr.sep_values = ev.tail_grid(gauss_times);
  pr.gumbel_sep = ev.tail_grid(gumbel_times);

  pr.gaussian_ref.resize(c_grid.size());
  pr.gumbel_ref.resize(c_grid.size());
  for (std::size_t i = 0; i < c_grid.size(); ++i) {
    pr.gaussian_ref[i] = 0.5 * std::erfc(c_grid[i] / std::sqrt(2.0));
    pr.gumbel_ref[i] = -std::expm1(-std::exp(-c_grid[i]));
    pr.sup_dev_gaussian =
        std::max(pr.sup_dev_gaussian,
                 std::fabs(pr.sep_values[i] - pr.gaussian_ref[i]));
    pr.sup_dev_gumbel = std::max(
        pr.sup_dev_gumbel, std::fabs(pr.gumbel_sep[i] - pr.gumbel_ref[i]));
  }
  return pr;
}

}  // namespace bdsep
