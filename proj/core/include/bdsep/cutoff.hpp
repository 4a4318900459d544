#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "bdsep/families.hpp"
#include "bdsep/hitting.hpp"
#include "bdsep/spectral.hpp"

namespace bdsep {

// Summary numbers a size sweep compares across chains.  product_n is
// gap * mean_hit and diverges along a sequence exactly when the separation
// profile sharpens into a cutoff; theta2 tracks how much of the variance
// the gap mode carries.
struct CutoffStats {
  double gap = 0.0;
  double mean_hit = 0.0;
  double window = 0.0;  // sqrt of the hitting-time variance, floored at 0
  double product_n = 0.0;
  double theta2 = 0.0;
};

CutoffStats cutoff_stats(const Spectrum& spectrum, TimeMode mode);

// A two-sided bound on separation around the mean hitting time t:
// sep((1+c) t) <= upper and sep((1-c) t) >= lower.
struct BoundPair {
  double upper = 1.0;
  double lower = 0.0;
};

// Cantelli's inequality applied to the hitting time, combined with
// window <= mean / sqrt(product_n): both sides evaluate to 1/(1 + c^2 N).
BoundPair chebyshev_bounds(const CutoffStats& stats, double c);

// Chernoff bound at twist 1/(2 window).  The twist stays inside the
// convergence radius because window * gap >= 1, and the centered log-MGF
// is at most (u * window)^2 there, giving exp(-(c sqrt(N) - 1/2)/2) on
// both tails.  Valid for the continuous-time kernel.
BoundPair exponential_bounds(const CutoffStats& stats, double c);

// Interval certain to contain the separation mixing time at level eps,
// from the same Cantelli tails.  lower is floored at 0.
struct MixingBracket {
  double lower = 0.0;
  double upper = 0.0;
};

MixingBracket mixing_bracket(const CutoffStats& stats, double eps);

// Smallest time with separation at most eps.  Continuous mode bisects to
// relative width 1e-9; discrete mode returns an integer step count.
double mixing_time(const Spectrum& spectrum, double eps, TimeMode mode);

enum class Verdict { Cutoff, NoCutoff, Inconclusive };
enum class ShapeClass { Gaussian, NonGaussian, NotApplicable };

std::string verdict_name(Verdict v);
std::string shape_name(ShapeClass s);

struct ScanOptions {
  // product_n beyond this, and still climbing, reads as divergence.
  double divergence_threshold = 5.0;
  // max/min ratio of product_n below this reads as bounded.
  double bounded_ratio = 2.0;
  // theta2 beyond this, and still climbing, reads as a dominant-mode-free
  // (gaussian) profile.
  double shape_growth_threshold = 20.0;
  int jobs = 1;
};

struct ScanPoint {
  double param = 0.0;      // the size knob of the family member
  std::size_t m = 0;       // number of nonconstant modes
  CutoffStats stats;
  std::array<double, 7> theta_diag{};  // theta_k for k = 2..8
};

struct ScanReport {
  std::vector<ScanPoint> points;
  Verdict verdict = Verdict::Inconclusive;
  ShapeClass shape = ShapeClass::NotApplicable;
  ScanOptions options;
};

// Evaluates a family at each size and classifies the sweep.  Specs must be
// ordered by strictly increasing size knob; fewer than three sizes cannot
// support a trend call.
ScanReport scan_family(const std::vector<FamilySpec>& specs, TimeMode mode,
                       const ScanOptions& options = {});

// Separation sampled on a c-grid under two centerings of the hitting law:
// mean + c * window, against the normal upper tail, and
// mean + (c - euler_gamma)/gap, against the doubly exponential tail.  The
// second centering absorbs the part of the mean the near-arithmetic modes
// do not carry; on an exactly arithmetic spectrum it reduces to the
// classic (log m + c)/gap.
struct ShapeProfile {
  std::vector<double> grid;
  std::vector<double> sep_values;    // at mean + c * window
  std::vector<double> gaussian_ref;  // 1 - Phi(c)
  std::vector<double> gumbel_sep;    // at mean + (c - euler_gamma)/gap
  std::vector<double> gumbel_ref;    // 1 - exp(-e^{-c})
  double sup_dev_gaussian = 0.0;
  double sup_dev_gumbel = 0.0;
  double mean_hit = 0.0;
  double window = 0.0;
  double coupon_scale = 0.0;  // 1/gap
};

// Continuous-time profile; the grid must stay within |c| <= 6 so the
// shifted times remain resolvable.
ShapeProfile shape_profile(const Spectrum& spectrum,
                           const std::vector<double>& c_grid);

}  // namespace bdsep
