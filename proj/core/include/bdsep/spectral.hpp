#pragma once

#include <cstddef>
#include <vector>

#include "bdsep/chain.hpp"
#include "bdsep/errors.hpp"

namespace bdsep {

// Nonzero eigenvalues of I - K, sorted ascending, all inside (0, 2].  Ties
// are accepted because tightly clustered spectra collapse to equal doubles;
// distinctness holds exactly and is asserted where resolvable.
class Spectrum {
 public:
  explicit Spectrum(std::vector<double> lambdas);

  const std::vector<double>& values() const { return lambdas_; }
  std::size_t count() const { return lambdas_.size(); }
  double gap() const { return lambdas_.front(); }
  double top() const { return lambdas_.back(); }

 private:
  std::vector<double> lambdas_;
};

// Sturm-count bisection on the symmetrized tridiagonal matrix.  Each
// eigenvalue is bracketed to absolute tolerance 1e-13 * max(1, lambda_max)
// inside Gerschgorin bounds, the zero mode is verified present and dropped.
// The result is cached on the chain, so repeated calls are cheap.
Spectrum eigenvalues(const BirthDeathChain& chain);

}  // namespace bdsep
