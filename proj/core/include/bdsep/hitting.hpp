#pragma once

#include <cstdint>
#include <vector>

#include "bdsep/errors.hpp"
#include "bdsep/spectral.hpp"

namespace bdsep {

enum class TimeMode { Continuous, Discrete };

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
};

// Tail of the absorption time through phases with the spectrum's rates,
// which equals separation from an endpoint start.  The evaluator uniformizes
// the pure-birth phase process at the largest rate and keeps the survival
// sequence, so repeated queries extend one evolution instead of restarting.
// Absolute error is bounded by the 1e-13 Poisson truncation budget.
class HypoexponentialTail {
 public:
  explicit HypoexponentialTail(const Spectrum& spectrum);

  double tail(double t);
  std::vector<double> tail_grid(const std::vector<double>& times);

 private:
  void extend(std::size_t steps);

  std::vector<double> step_prob_;
  double unif_rate_;
  std::vector<double> phase_;
  std::vector<double> survival_;
};

double sep_continuous(const Spectrum& spectrum, double t);
std::vector<double> sep_continuous_grid(const Spectrum& spectrum,
                                        const std::vector<double>& times);

// Discrete-time tail P(T > k).  The transfer through each phase uses the
// coefficient pair (rate, 1 - rate) even when the rate exceeds 1; weights
// then leave [0, 1] but the absorbed mass reproduces the alternating
// spectral sum exactly, which is what separation equals on monotone chains.
// Sign-mixed transfers amplify roundoff, so evaluation carries a running
// error bound and escalates to 50-digit floats past 1e-12; PrecisionLoss
// signals a bound above 1e-9 even there.
double sep_discrete(const Spectrum& spectrum, std::int64_t k);
std::vector<double> sep_discrete_grid(const Spectrum& spectrum,
                                      std::int64_t k_max);

// First step count at which the discrete tail drops to eps or below.
std::int64_t sep_discrete_crossing(const Spectrum& spectrum, double eps);

// Explicit spectral sum for the continuous tail, evaluated in 50-digit
// floats.  Needs distinct rates, refuses spectra above the cap, and throws
// PrecisionLoss when the cancellation estimate exceeds 1e-8 absolute.
double lagrange_tail(const Spectrum& spectrum, double t,
                     std::size_t cap = 60);

Moments moments(const Spectrum& spectrum, TimeMode mode);

// log E exp(u (T - mean)/sigma) for the continuous absorption time;
// defined for |u| < sigma * gap.
double standardized_log_mgf(const Spectrum& spectrum, double u);

// Sum of (gap / lambda_i)^k, k >= 2.  theta(2) is the squared product of
// gap and window and controls the shape of the cutoff profile.
double theta(const Spectrum& spectrum, int k);

}  // namespace bdsep
