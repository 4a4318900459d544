#pragma once

#include <string>
#include <variant>
#include <vector>

#include "bdsep/chain.hpp"
#include "bdsep/errors.hpp"
#include "bdsep/spectral.hpp"

namespace bdsep {

// Symmetric walk on {0, ..., n} with holding 1/2 at both ends.
struct SrwLazyEnds {
  int n = 1;
};

// Drift walk: up-rate p everywhere, down-rate 1-p, reflecting holds at the
// ends; requires 1/2 < p < 1.
struct BiasedWalk {
  double p = 0.75;
  int n = 1;
};

// Metropolis move from the lazy symmetric proposal towards an arbitrary
// positive target on {0, ..., n}.
struct MetropolisChain {
  std::vector<double> target;
};

// Two-urn exchange walk counting red balls in the left urn; r balls per
// draw side, n balls total, 0 < 2r <= n.  States {0, ..., r}.
struct BernoulliLaplace {
  int n = 2;
  int r = 1;
};

// Distance-from-a-word walk for length-r words over an n-letter alphabet.
struct HammingWalk {
  int n = 2;
  int r = 1;
};

// Biased hypercube distance walk with down-weight theta in (0, 1].
struct ThetaHypercube {
  double theta = 1.0;
  int r = 1;
};

// Distance walk on m-dimensional subspaces of an n-dimensional space over
// the field with q elements (q a prime power, 2m <= n).  Rates come from
// the Grassmann graph's intersection numbers; the builder checks the
// resulting spectrum against the known closed form and refuses mismatches.
struct QSubspace {
  int q = 2;
  int n = 2;
  int m = 1;
};

using FamilySpec = std::variant<SrwLazyEnds, BiasedWalk, MetropolisChain,
                                BernoulliLaplace, HammingWalk, ThetaHypercube,
                                QSubspace>;

BirthDeathChain build(const FamilySpec& spec);

BirthDeathChain metropolis(const std::vector<double>& target);

// Exact spectra for the families that have them; MetropolisChain throws
// NoClosedForm.
Spectrum closed_form_spectrum(const FamilySpec& spec);

// Closed form when available, otherwise the numeric eigensolver.
Spectrum family_spectrum(const FamilySpec& spec);

// The size knob a scan varies: n for the walks on {0..n}, r for the urn,
// word and hypercube families, m for the subspace walk.
double size_param(const FamilySpec& spec);

std::string family_kind(const FamilySpec& spec);

// Target generators for the Metropolis family.
std::vector<double> polynomial_target(int n, double degree);
std::vector<double> binomial_target(int n);

}  // namespace bdsep
