#include "bdsep/hitting.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

#include "poisson_window.hpp"

namespace bdsep {

namespace {

constexpr double kPoissonBudget = 1e-13;
constexpr std::size_t kMaxUniformizedSteps = 50'000'000;

struct Kahan {
  double sum = 0.0;
  double carry = 0.0;
  void add(double x) {
    const double y = x - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  double value() const { return sum; }
};

using Wide = boost::multiprecision::cpp_bin_float_50;

// Signed phase-transfer state for the discrete tail, with a running
// first-order bound on the accumulated rounding error.  Rates above 1 make
// the weights alternate in sign, so per-step roundoff is amplified by the
// absolutized transfer; err_ propagates exactly that amplification and
// err_.back() bounds the error of tail().
template <typename F>
class SignedPhaseDp {
 public:
  explicit SignedPhaseDp(const std::vector<double>& lam)
      : lam_(&lam),
        half_ulp_(static_cast<double>(std::numeric_limits<F>::epsilon()) *
                  0.5),
        w_(lam.size() + 1, F(0)),
        err_(lam.size() + 1, 0.0) {
    w_[0] = F(1);
  }

  void step() {
    const std::vector<double>& lam = *lam_;
    for (std::size_t j = lam.size(); j-- > 0;) {
      const double mag = std::fabs(static_cast<double>(w_[j]));
      const F flow = w_[j] * F(lam[j]);
      err_[j + 1] += err_[j] * lam[j] + half_ulp_ * lam[j] * mag;
      w_[j + 1] += flow;
      err_[j + 1] += half_ulp_ * std::fabs(static_cast<double>(w_[j + 1]));
      w_[j] -= flow;
      err_[j] = err_[j] * std::fabs(1.0 - lam[j]) +
                half_ulp_ * (lam[j] * mag +
                             std::fabs(static_cast<double>(w_[j])));
    }
  }

  double tail() const {
    return std::clamp(1.0 - static_cast<double>(w_.back()), 0.0, 1.0);
  }
  double error_bound() const { return err_.back(); }

 private:
  const std::vector<double>* lam_;
  double half_ulp_;
  std::vector<F> w_;
  std::vector<double> err_;
};

// Escalate from long double to 50-digit floats once the rounding bound
// threatens the 1e-12 budget; refuse to return values looser than 1e-9.
constexpr double kDiscreteEscalate = 1e-12;
constexpr double kDiscreteGiveUp = 1e-9;

template <typename F>
double fill_discrete_grid(const std::vector<double>& lam, std::int64_t k_max,
                          std::vector<double>& out) {
  SignedPhaseDp<F> dp(lam);
  for (std::int64_t k = 1; k <= k_max; ++k) {
    dp.step();
    out[static_cast<std::size_t>(k)] = dp.tail();
  }
  return dp.error_bound();
}

[[noreturn]] void throw_discrete_precision() {
  throw PrecisionLoss(
      "discrete tail rounding bound exceeds 1e-9 even in wide arithmetic");
}

}  // namespace

HypoexponentialTail::HypoexponentialTail(const Spectrum& spectrum)
    : unif_rate_(spectrum.top()) {
  const auto& lam = spectrum.values();
  step_prob_.resize(lam.size());
  for (std::size_t i = 0; i < lam.size(); ++i) {
    step_prob_[i] = lam[i] / unif_rate_;
  }
  phase_.assign(lam.size() + 1, 0.0);
  phase_[0] = 1.0;
  survival_.push_back(1.0);
}

void HypoexponentialTail::extend(std::size_t steps) {
  if (steps >= kMaxUniformizedSteps) {
    throw ConvergenceFailure("uniformized horizon beyond " +
                             std::to_string(kMaxUniformizedSteps) + " steps");
  }
  const std::size_t m = step_prob_.size();
  while (survival_.size() <= steps) {
    for (std::size_t j = m; j-- > 0;) {
      const double flow = phase_[j] * step_prob_[j];
      phase_[j] -= flow;
      phase_[j + 1] += flow;
    }
    survival_.push_back(std::max(0.0, 1.0 - phase_[m]));
  }
}

double HypoexponentialTail::tail(double t) {
  if (!(t >= 0.0)) {
    throw std::invalid_argument("time must be nonnegative");
  }
  const auto win = detail::poisson_window(unif_rate_ * t, kPoissonBudget);
  extend(static_cast<std::size_t>(win.hi));
  long double acc = 0.0L;
  for (std::int64_t k = win.lo; k <= win.hi; ++k) {
    acc += static_cast<long double>(win.weights[static_cast<std::size_t>(
               k - win.lo)]) *
           survival_[static_cast<std::size_t>(k)];
  }
  return std::clamp(static_cast<double>(acc), 0.0, 1.0);
}

std::vector<double> HypoexponentialTail::tail_grid(
    const std::vector<double>& times) {
  std::vector<double> out;
  out.reserve(times.size());
  for (double t : times) out.push_back(tail(t));
  return out;
}

double sep_continuous(const Spectrum& spectrum, double t) {
  return HypoexponentialTail(spectrum).tail(t);
}

std::vector<double> sep_continuous_grid(const Spectrum& spectrum,
                                        const std::vector<double>& times) {
  return HypoexponentialTail(spectrum).tail_grid(times);
}

std::vector<double> sep_discrete_grid(const Spectrum& spectrum,
                                      std::int64_t k_max) {
  if (k_max < 0) {
    throw std::invalid_argument("step count must be nonnegative");
  }
  const auto& lam = spectrum.values();
  std::vector<double> out(static_cast<std::size_t>(k_max) + 1);
  out[0] = 1.0;
  if (fill_discrete_grid<long double>(lam, k_max, out) <= kDiscreteEscalate) {
    return out;
  }
  if (fill_discrete_grid<Wide>(lam, k_max, out) <= kDiscreteGiveUp) {
    return out;
  }
  throw_discrete_precision();
}

double sep_discrete(const Spectrum& spectrum, std::int64_t k) {
  if (k < 0) {
    throw std::invalid_argument("step count must be nonnegative");
  }
  const auto& lam = spectrum.values();
  SignedPhaseDp<long double> dp(lam);
  for (std::int64_t step = 0; step < k; ++step) dp.step();
  if (dp.error_bound() <= kDiscreteEscalate) return dp.tail();
  SignedPhaseDp<Wide> wide(lam);
  for (std::int64_t step = 0; step < k; ++step) wide.step();
  if (wide.error_bound() <= kDiscreteGiveUp) return wide.tail();
  throw_discrete_precision();
}

namespace {

// First k with tail <= eps, accepted only when the rounding bound cannot
// flip the comparison; nullopt asks for wider arithmetic.
template <typename F>
std::optional<std::int64_t> crossing_pass(const std::vector<double>& lam,
                                          double eps) {
  SignedPhaseDp<F> dp(lam);
  constexpr auto cap = static_cast<std::int64_t>(kMaxUniformizedSteps);
  for (std::int64_t k = 1; k <= cap; ++k) {
    dp.step();
    const double bound = dp.error_bound();
    if (dp.tail() <= eps) {
      if (bound <= kDiscreteEscalate || dp.tail() <= eps - bound) return k;
      return std::nullopt;
    }
    if (bound > 0.1 * eps) return std::nullopt;
  }
  throw ConvergenceFailure("discrete tail still above the target level after " +
                           std::to_string(kMaxUniformizedSteps) + " steps");
}

}  // namespace

std::int64_t sep_discrete_crossing(const Spectrum& spectrum, double eps) {
  if (!(eps > 0.0) || !(eps < 1.0)) {
    throw InvalidParams("separation level must sit in (0, 1)");
  }
  const auto& lam = spectrum.values();
  if (const auto k = crossing_pass<long double>(lam, eps)) return *k;
  if (const auto k = crossing_pass<Wide>(lam, eps)) return *k;
  throw_discrete_precision();
}

double lagrange_tail(const Spectrum& spectrum, double t, std::size_t cap) {
  using big = boost::multiprecision::cpp_bin_float_50;
  if (!(t >= 0.0)) {
    throw std::invalid_argument("time must be nonnegative");
  }
  const auto& lam = spectrum.values();
  if (lam.size() > cap) {
    throw InvalidParams("spectral sum capped at " + std::to_string(cap) +
                        " rates");
  }
  for (std::size_t i = 1; i < lam.size(); ++i) {
    if (lam[i] == lam[i - 1]) {
      throw InvalidParams("spectral sum needs distinct rates");
    }
  }
  big total = 0;
  big peak = 0;
  for (std::size_t i = 0; i < lam.size(); ++i) {
    big coef = 1;
    for (std::size_t j = 0; j < lam.size(); ++j) {
      if (j == i) continue;
      coef *= big(lam[j]) / (big(lam[j]) - big(lam[i]));
    }
    const big term = coef * exp(big(-t) * big(lam[i]));
    total += term;
    peak = std::max(peak, big(abs(term)));
  }
  const double cancellation =
      static_cast<double>(peak) *
      static_cast<double>(std::numeric_limits<big>::epsilon());
  if (cancellation > 1e-8) {
    throw PrecisionLoss("cancellation estimate " +
                        std::to_string(cancellation) + " beyond 1e-8");
  }
  return std::clamp(static_cast<double>(total), 0.0, 1.0);
}

Moments moments(const Spectrum& spectrum, TimeMode mode) {
  Kahan mean;
  Kahan var;
  for (double lam : spectrum.values()) {
    const double inv = 1.0 / lam;
    mean.add(inv);
    var.add(mode == TimeMode::Continuous ? inv * inv
                                         : (1.0 - lam) * inv * inv);
  }
  return {mean.value(), var.value()};
}

double standardized_log_mgf(const Spectrum& spectrum, double u) {
  const Moments mo = moments(spectrum, TimeMode::Continuous);
  const double sigma = std::sqrt(mo.variance);
  if (!(std::fabs(u) < sigma * spectrum.gap())) {
    throw OutsideRadius("|u| must stay below window * gap = " +
                        std::to_string(sigma * spectrum.gap()));
  }
  Kahan acc;
  for (double lam : spectrum.values()) {
    acc.add(-std::log1p(-u / (sigma * lam)));
  }
  return -u * mo.mean / sigma + acc.value();
}

double theta(const Spectrum& spectrum, int k) {
  if (k < 2) {
    throw InvalidParams("theta order starts at 2");
  }
  Kahan acc;
  const double gap = spectrum.gap();
  for (double lam : spectrum.values()) {
    acc.add(std::pow(gap / lam, k));
  }
  return acc.value();
}

}  // namespace bdsep
