#include "bdsep/distances.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "poisson_window.hpp"

namespace bdsep {

namespace {

constexpr double kPoissonBudget = 1e-13;

void check_start(const BirthDeathChain& chain, int start) {
  if (start < 0 || start > chain.top()) {
    throw OutOfRange("start state " + std::to_string(start) +
                     " outside {0, ..., " + std::to_string(chain.top()) + "}");
  }
}

void kernel_step(const BirthDeathChain& chain, const std::vector<double>& cur,
                 std::vector<double>& next) {
  const int m = chain.top();
  for (int y = 0; y <= m; ++y) {
    double v = cur[static_cast<std::size_t>(y)] * chain.hold(y);
    if (y > 0) v += cur[static_cast<std::size_t>(y) - 1] * chain.up(y - 1);
    if (y < m) v += cur[static_cast<std::size_t>(y) + 1] * chain.down(y + 1);
    next[static_cast<std::size_t>(y)] = v;
  }
}

void check_match(const DistributionAtTime& dist,
                 const StationaryDistribution& target) {
  if (dist.probs.size() != target.nu.size()) {
    throw InvalidParams("distribution and stationary law differ in length");
  }
}

}  // namespace

DistributionAtTime evolve_discrete(const BirthDeathChain& chain,
                                   std::int64_t k, int start) {
  check_start(chain, start);
  if (k < 0) {
    throw std::invalid_argument("step count must be nonnegative");
  }
  std::vector<double> cur(chain.states(), 0.0);
  std::vector<double> next(chain.states());
  cur[static_cast<std::size_t>(start)] = 1.0;
  for (std::int64_t step = 0; step < k; ++step) {
    kernel_step(chain, cur, next);
    cur.swap(next);
  }
  return {std::move(cur), static_cast<double>(k), TimeMode::Discrete};
}

std::vector<DistributionAtTime> evolve_continuous_grid(
    const BirthDeathChain& chain, const std::vector<double>& times,
    int start) {
  check_start(chain, start);
  struct Target {
    detail::PoissonWindow window;
    std::vector<double> acc;
  };
  std::vector<Target> targets;
  targets.reserve(times.size());
  std::int64_t deepest = 0;
  for (double t : times) {
    if (!(t >= 0.0)) {
      throw std::invalid_argument("time must be nonnegative");
    }
    Target tg{detail::poisson_window(t, kPoissonBudget),
              std::vector<double>(chain.states(), 0.0)};
    deepest = std::max(deepest, tg.window.hi);
    targets.push_back(std::move(tg));
  }

  std::vector<double> cur(chain.states(), 0.0);
  std::vector<double> next(chain.states());
  cur[static_cast<std::size_t>(start)] = 1.0;
  for (std::int64_t k = 0;; ++k) {
    for (auto& tg : targets) {
      if (k < tg.window.lo || k > tg.window.hi) continue;
      const double w =
          tg.window.weights[static_cast<std::size_t>(k - tg.window.lo)];
      for (std::size_t y = 0; y < cur.size(); ++y) {
        tg.acc[y] += w * cur[y];
      }
    }
    if (k == deepest) break;
    kernel_step(chain, cur, next);
    cur.swap(next);
  }

  std::vector<DistributionAtTime> out;
  out.reserve(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    out.push_back(
        {std::move(targets[i].acc), times[i], TimeMode::Continuous});
  }
  return out;
}

DistributionAtTime evolve_continuous(const BirthDeathChain& chain, double t,
                                     int start) {
  return std::move(evolve_continuous_grid(chain, {t}, start).front());
}

double separation_direct(const DistributionAtTime& dist,
                         const StationaryDistribution& target) {
  check_match(dist, target);
  double worst = 0.0;
  for (std::size_t x = 0; x < dist.probs.size(); ++x) {
    if (!(target.nu[x] > 0.0)) continue;  // underflowed tail state
    worst = std::max(worst, 1.0 - dist.probs[x] / target.nu[x]);
  }
  return std::clamp(worst, 0.0, 1.0);
}

double total_variation(const DistributionAtTime& dist,
                       const StationaryDistribution& target) {
  check_match(dist, target);
  double sum = 0.0;
  for (std::size_t x = 0; x < dist.probs.size(); ++x) {
    sum += std::fabs(dist.probs[x] - target.nu[x]);
  }
  return std::clamp(0.5 * sum, 0.0, 1.0);
}

double l2_distance(const DistributionAtTime& dist,
                   const StationaryDistribution& target) {
  check_match(dist, target);
  double sum = 0.0;
  for (std::size_t x = 0; x < dist.probs.size(); ++x) {
    if (!(target.nu[x] > 0.0)) continue;
    const double rel = dist.probs[x] / target.nu[x] - 1.0;
    sum += rel * rel * target.nu[x];
  }
  return std::sqrt(sum);
}

}  // namespace bdsep
