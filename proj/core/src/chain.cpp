#include "bdsep/chain.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace bdsep {

namespace {

constexpr double kRowSlack = 1e-12;

void check_entries(const std::vector<double>& v, const char* name) {
  for (double x : v) {
    if (!std::isfinite(x) || x < 0.0 || x > 1.0 + kRowSlack) {
      throw NotStochastic(std::string(name) + " entry outside [0, 1]");
    }
  }
}

}  // namespace

BirthDeathChain::BirthDeathChain(std::vector<double> up,
                                 std::vector<double> down,
                                 std::vector<double> hold)
    : up_(std::move(up)),
      down_(std::move(down)),
      hold_(std::move(hold)),
      cache_(std::make_shared<detail::SpectrumCache>()) {
  const std::size_t m = up_.size();
  if (hold_.size() < 2 || down_.size() != m || hold_.size() != m + 1) {
    throw InvalidParams("rate arrays need sizes m, m, m+1 with m >= 1");
  }
  check_entries(up_, "up");
  check_entries(down_, "down");
  check_entries(hold_, "hold");
  for (int x = 0; x <= top(); ++x) {
    double s = hold_[static_cast<std::size_t>(x)];
    if (x < top()) s += up_[static_cast<std::size_t>(x)];
    if (x > 0) s += down_[static_cast<std::size_t>(x) - 1];
    if (std::fabs(s - 1.0) > kRowSlack) {
      throw NotStochastic("row " + std::to_string(x) + " sums to " +
                          std::to_string(s));
    }
    if (x < top()) up_[static_cast<std::size_t>(x)] /= s;
    if (x > 0) down_[static_cast<std::size_t>(x) - 1] /= s;
    hold_[static_cast<std::size_t>(x)] /= s;
  }
  for (int x = 0; x < top(); ++x) {
    if (!(this->up(x) > 0.0)) {
      throw Reducible("up rate vanishes at state " + std::to_string(x));
    }
  }
  for (int x = 1; x <= top(); ++x) {
    if (!(this->down(x) > 0.0)) {
      throw Reducible("down rate vanishes at state " + std::to_string(x));
    }
  }
}

StationaryDistribution stationary(const BirthDeathChain& chain) {
  const int m = chain.top();
  std::vector<double> logw(chain.states(), 0.0);
  for (int x = 1; x <= m; ++x) {
    logw[static_cast<std::size_t>(x)] = logw[static_cast<std::size_t>(x) - 1] +
                                        std::log(chain.up(x - 1)) -
                                        std::log(chain.down(x));
  }
  const double peak = *std::max_element(logw.begin(), logw.end());
  if (!std::isfinite(peak)) {
    throw Overflow("stationary log-weights left the representable range");
  }
  std::vector<double> nu(chain.states());
  long double total = 0.0L;
  for (std::size_t x = 0; x < nu.size(); ++x) {
    nu[x] = std::exp(logw[x] - peak);
    total += nu[x];
  }
  const double norm = static_cast<double>(total);
  for (double& v : nu) v /= norm;
  return {std::move(nu), std::move(logw)};
}

bool is_monotone(const BirthDeathChain& chain) {
  for (int x = 0; x < chain.top(); ++x) {
    if (chain.up(x) + chain.down(x + 1) > 1.0 + kRowSlack) return false;
  }
  return true;
}

SymmetricTridiagonal symmetrize(const BirthDeathChain& chain) {
  SymmetricTridiagonal tri;
  tri.diag.resize(chain.states());
  tri.off.resize(chain.states() - 1);
  for (int x = 0; x <= chain.top(); ++x) {
    tri.diag[static_cast<std::size_t>(x)] = 1.0 - chain.hold(x);
  }
  for (int x = 0; x < chain.top(); ++x) {
    tri.off[static_cast<std::size_t>(x)] =
        -std::sqrt(chain.up(x) * chain.down(x + 1));
  }
  return tri;
}

}  // namespace bdsep
