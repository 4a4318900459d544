#pragma once

#include <memory>
#include <mutex>
#include <vector>

#include "bdsep/errors.hpp"

namespace bdsep {

namespace detail {

// Written once by the eigensolver and shared between copies of a chain, so
// repeated spectral queries pay for the solve a single time.
struct SpectrumCache {
  std::once_flag once;
  std::vector<double> lambdas;
};

}  // namespace detail

// Nearest-neighbour walk on {0, ..., m}.  up(x) moves x -> x+1 for
// 0 <= x < m, down(x) moves x -> x-1 for 1 <= x <= m, hold(x) stays put.
// Construction rejects rows whose sums stray from 1 by more than 1e-12 and
// renormalizes the rest exactly; vanishing up or down rates are rejected
// because they disconnect the state space.
class BirthDeathChain {
 public:
  BirthDeathChain(std::vector<double> up, std::vector<double> down,
                  std::vector<double> hold);

  int top() const { return static_cast<int>(hold_.size()) - 1; }
  std::size_t states() const { return hold_.size(); }

  double up(int x) const { return up_[static_cast<std::size_t>(x)]; }
  double down(int x) const { return down_[static_cast<std::size_t>(x) - 1]; }
  double hold(int x) const { return hold_[static_cast<std::size_t>(x)]; }

  const std::vector<double>& up_rates() const { return up_; }
  const std::vector<double>& down_rates() const { return down_; }
  const std::vector<double>& hold_rates() const { return hold_; }

  detail::SpectrumCache& spectrum_cache() const { return *cache_; }

 private:
  std::vector<double> up_;
  std::vector<double> down_;
  std::vector<double> hold_;
  std::shared_ptr<detail::SpectrumCache> cache_;
};

// Stationary law nu plus the pre-normalization log-weights it was built
// from.  The log form stays finite on chains whose weights span more than
// the double range, where individual nu entries underflow to zero.
struct StationaryDistribution {
  std::vector<double> nu;
  std::vector<double> log_nu;
};

StationaryDistribution stationary(const BirthDeathChain& chain);

// up(x) + down(x+1) <= 1 on every edge; the discrete first-passage
// representation of separation needs this.
bool is_monotone(const BirthDeathChain& chain);

// Symmetric tridiagonal matrix sharing the spectrum of I - K, obtained by
// conjugating with sqrt(nu): diagonal 1 - hold(x), off-diagonal
// -sqrt(up(x) * down(x+1)).
struct SymmetricTridiagonal {
  std::vector<double> diag;
  std::vector<double> off;
};

SymmetricTridiagonal symmetrize(const BirthDeathChain& chain);

}  // namespace bdsep
