#include "bdsep/families.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace bdsep {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidParams(what);
}

bool is_prime_power(int q) {
  if (q < 2) return false;
  int p = 0;
  for (int d = 2; d * d <= q; ++d) {
    if (q % d == 0) {
      p = d;
      break;
    }
  }
  if (p == 0) return true;  // q itself is prime
  int rest = q;
  while (rest % p == 0) rest /= p;
  return rest == 1;
}

// log of the q-bracket (q^k - 1)/(q - 1); valid for k >= 1.
double log_q_bracket(double log_q, double q, int k) {
  return k * log_q + std::log1p(-std::pow(q, -k)) - std::log(q - 1.0);
}

BirthDeathChain build_srw(const SrwLazyEnds& f) {
  require(f.n >= 1, "walk length must be at least 1");
  const std::size_t n = static_cast<std::size_t>(f.n);
  std::vector<double> up(n, 0.5);
  std::vector<double> down(n, 0.5);
  std::vector<double> hold(n + 1, 0.0);
  hold.front() = 0.5;
  hold.back() = 0.5;
  return {std::move(up), std::move(down), std::move(hold)};
}

BirthDeathChain build_biased(const BiasedWalk& f) {
  require(f.n >= 1, "walk length must be at least 1");
  require(f.p > 0.5 && f.p < 1.0, "drift needs 1/2 < p < 1");
  const std::size_t n = static_cast<std::size_t>(f.n);
  const double q = 1.0 - f.p;
  std::vector<double> up(n, f.p);
  std::vector<double> down(n, q);
  std::vector<double> hold(n + 1, 0.0);
  hold.front() = q;
  hold.back() = f.p;
  return {std::move(up), std::move(down), std::move(hold)};
}

BirthDeathChain build_bernoulli_laplace(const BernoulliLaplace& f) {
  require(f.r >= 1 && 2 * f.r <= f.n, "urn walk needs 0 < 2r <= n");
  const double scale = static_cast<double>(f.r) * (f.n - f.r);
  const std::size_t r = static_cast<std::size_t>(f.r);
  std::vector<double> up(r), down(r), hold(r + 1);
  for (std::size_t x = 0; x < r; ++x) {
    const double xf = static_cast<double>(x);
    up[x] = (f.r - xf) * (f.n - f.r - xf) / scale;
  }
  for (std::size_t x = 1; x <= r; ++x) {
    const double xf = static_cast<double>(x);
    down[x - 1] = xf * xf / scale;
  }
  for (std::size_t x = 0; x <= r; ++x) {
    double s = 0.0;
    if (x < r) s += up[x];
    if (x > 0) s += down[x - 1];
    hold[x] = std::max(0.0, 1.0 - s);
  }
  return {std::move(up), std::move(down), std::move(hold)};
}

BirthDeathChain build_hamming(const HammingWalk& f) {
  require(f.n >= 2 && f.r >= 1, "word walk needs n >= 2 and r >= 1");
  const std::size_t r = static_cast<std::size_t>(f.r);
  const double denom = static_cast<double>(f.r) * (f.n - 1);
  std::vector<double> up(r), down(r), hold(r + 1);
  for (std::size_t x = 0; x < r; ++x) {
    up[x] = static_cast<double>(f.r - static_cast<int>(x)) / f.r;
  }
  for (std::size_t x = 1; x <= r; ++x) {
    down[x - 1] = static_cast<double>(x) / denom;
  }
  for (std::size_t x = 0; x <= r; ++x) {
    hold[x] = static_cast<double>(x) * (f.n - 2) / denom;
  }
  return {std::move(up), std::move(down), std::move(hold)};
}

BirthDeathChain build_theta_hypercube(const ThetaHypercube& f) {
  require(f.r >= 1, "hypercube walk needs r >= 1");
  require(f.theta > 0.0 && f.theta <= 1.0, "down-weight must sit in (0, 1]");
  const std::size_t r = static_cast<std::size_t>(f.r);
  std::vector<double> up(r), down(r), hold(r + 1);
  for (std::size_t x = 0; x < r; ++x) {
    up[x] = static_cast<double>(f.r - static_cast<int>(x)) / f.r;
  }
  for (std::size_t x = 1; x <= r; ++x) {
    down[x - 1] = static_cast<double>(x) * f.theta / f.r;
  }
  for (std::size_t x = 0; x <= r; ++x) {
    hold[x] = static_cast<double>(x) * (1.0 - f.theta) / f.r;
  }
  return {std::move(up), std::move(down), std::move(hold)};
}

BirthDeathChain build_q_subspace(const QSubspace& f) {
  require(is_prime_power(f.q), "field order must be a prime power");
  require(f.m >= 1 && 2 * f.m <= f.n, "subspace walk needs 1 <= m and 2m <= n");
  const double q = f.q;
  const double lq = std::log(q);
  // Degree and intersection numbers of the Grassmann graph, handled in log
  // form because the q-brackets overflow quickly.
  const double log_degree =
      lq + log_q_bracket(lq, q, f.m) + log_q_bracket(lq, q, f.n - f.m);
  const std::size_t m = static_cast<std::size_t>(f.m);
  std::vector<double> up(m), down(m), hold(m + 1);
  for (std::size_t j = 0; j < m; ++j) {
    const int ji = static_cast<int>(j);
    const double log_b = (2.0 * ji + 1.0) * lq +
                         log_q_bracket(lq, q, f.m - ji) +
                         log_q_bracket(lq, q, f.n - f.m - ji);
    up[j] = std::exp(log_b - log_degree);
  }
  for (std::size_t j = 1; j <= m; ++j) {
    const double log_c = 2.0 * log_q_bracket(lq, q, static_cast<int>(j));
    down[j - 1] = std::exp(log_c - log_degree);
  }
  for (std::size_t j = 0; j <= m; ++j) {
    double s = 0.0;
    if (j < m) s += up[j];
    if (j > 0) s += down[j - 1];
    hold[j] = std::max(0.0, 1.0 - s);
  }
  BirthDeathChain chain{std::move(up), std::move(down), std::move(hold)};

  const Spectrum numeric = eigenvalues(chain);
  const Spectrum exact = closed_form_spectrum(FamilySpec{f});
  for (std::size_t i = 0; i < numeric.count(); ++i) {
    const double diff =
        std::fabs(numeric.values()[i] - exact.values()[i]);
    if (diff > 1e-8 * std::max(1.0, exact.values()[i])) {
      throw ConvergenceFailure(
          "derived subspace-walk rates disagree with the known spectrum");
    }
  }
  return chain;
}

}  // namespace

BirthDeathChain metropolis(const std::vector<double>& target) {
  if (target.size() < 2) {
    throw InvalidParams("target needs at least two states");
  }
  for (double v : target) {
    if (!std::isfinite(v) || !(v > 0.0)) {
      throw NonPositiveTarget("target weights must be positive and finite");
    }
  }
  const std::size_t m = target.size() - 1;
  std::vector<double> up(m), down(m), hold(target.size());
  for (std::size_t x = 0; x < m; ++x) {
    up[x] = 0.5 * std::min(1.0, target[x + 1] / target[x]);
  }
  for (std::size_t x = 1; x <= m; ++x) {
    down[x - 1] = 0.5 * std::min(1.0, target[x - 1] / target[x]);
  }
  for (std::size_t x = 0; x <= m; ++x) {
    double s = 0.0;
    if (x < m) s += up[x];
    if (x > 0) s += down[x - 1];
    hold[x] = 1.0 - s;
  }
  return {std::move(up), std::move(down), std::move(hold)};
}

BirthDeathChain build(const FamilySpec& spec) {
  return std::visit(
      [](const auto& f) -> BirthDeathChain {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, SrwLazyEnds>) return build_srw(f);
        if constexpr (std::is_same_v<T, BiasedWalk>) return build_biased(f);
        if constexpr (std::is_same_v<T, MetropolisChain>)
          return metropolis(f.target);
        if constexpr (std::is_same_v<T, BernoulliLaplace>)
          return build_bernoulli_laplace(f);
        if constexpr (std::is_same_v<T, HammingWalk>) return build_hamming(f);
        if constexpr (std::is_same_v<T, ThetaHypercube>)
          return build_theta_hypercube(f);
        if constexpr (std::is_same_v<T, QSubspace>)
          return build_q_subspace(f);
      },
      spec);
}

Spectrum closed_form_spectrum(const FamilySpec& spec) {
  return std::visit(
      [](const auto& f) -> Spectrum {
        using T = std::decay_t<decltype(f)>;
        std::vector<double> lam;
        if constexpr (std::is_same_v<T, SrwLazyEnds>) {
          require(f.n >= 1, "walk length must be at least 1");
          lam.resize(static_cast<std::size_t>(f.n));
          for (int j = 1; j <= f.n; ++j) {
            lam[j - 1] = 1.0 - std::cos(M_PI * j / (f.n + 1));
          }
        } else if constexpr (std::is_same_v<T, BiasedWalk>) {
          require(f.n >= 1, "walk length must be at least 1");
          require(f.p > 0.5 && f.p < 1.0, "drift needs 1/2 < p < 1");
          const double amp = 2.0 * std::sqrt(f.p * (1.0 - f.p));
          lam.resize(static_cast<std::size_t>(f.n));
          for (int j = 1; j <= f.n; ++j) {
            lam[j - 1] = 1.0 - amp * std::cos(M_PI * j / (f.n + 1));
          }
        } else if constexpr (std::is_same_v<T, BernoulliLaplace>) {
          require(f.r >= 1 && 2 * f.r <= f.n, "urn walk needs 0 < 2r <= n");
          const double scale = static_cast<double>(f.r) * (f.n - f.r);
          lam.resize(static_cast<std::size_t>(f.r));
          for (int i = 1; i <= f.r; ++i) {
            lam[i - 1] = static_cast<double>(i) * (f.n - i + 1) / scale;
          }
        } else if constexpr (std::is_same_v<T, HammingWalk>) {
          require(f.n >= 2 && f.r >= 1, "word walk needs n >= 2 and r >= 1");
          lam.resize(static_cast<std::size_t>(f.r));
          for (int i = 1; i <= f.r; ++i) {
            lam[i - 1] =
                static_cast<double>(i) * f.n / (static_cast<double>(f.r) * (f.n - 1));
          }
        } else if constexpr (std::is_same_v<T, ThetaHypercube>) {
          require(f.r >= 1, "hypercube walk needs r >= 1");
          require(f.theta > 0.0 && f.theta <= 1.0,
                  "down-weight must sit in (0, 1]");
          lam.resize(static_cast<std::size_t>(f.r));
          for (int i = 1; i <= f.r; ++i) {
            lam[i - 1] = static_cast<double>(i) * (1.0 + f.theta) / f.r;
          }
        } else if constexpr (std::is_same_v<T, QSubspace>) {
          require(is_prime_power(f.q), "field order must be a prime power");
          require(f.m >= 1 && 2 * f.m <= f.n,
                  "subspace walk needs 1 <= m and 2m <= n");
          const double q = f.q;
          const double denom = (1.0 - std::pow(q, f.m - f.n)) *
                               (1.0 - std::pow(q, -f.m));
          lam.resize(static_cast<std::size_t>(f.m));
          for (int i = 1; i <= f.m; ++i) {
            lam[i - 1] = (1.0 - std::pow(q, -i)) *
                         (1.0 - std::pow(q, i - f.n - 1)) / denom;
          }
        } else {
          throw NoClosedForm("metropolis spectra have no closed form");
        }
        return Spectrum(std::move(lam));
      },
      spec);
}

Spectrum family_spectrum(const FamilySpec& spec) {
  try {
    return closed_form_spectrum(spec);
  } catch (const NoClosedForm&) {
    return eigenvalues(build(spec));
  }
}

double size_param(const FamilySpec& spec) {
  return std::visit(
      [](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, SrwLazyEnds>) return f.n;
        if constexpr (std::is_same_v<T, BiasedWalk>) return f.n;
        if constexpr (std::is_same_v<T, MetropolisChain>)
          return static_cast<double>(f.target.size()) - 1.0;
        if constexpr (std::is_same_v<T, BernoulliLaplace>) return f.r;
        if constexpr (std::is_same_v<T, HammingWalk>) return f.r;
        if constexpr (std::is_same_v<T, ThetaHypercube>) return f.r;
        if constexpr (std::is_same_v<T, QSubspace>) return f.m;
      },
      spec);
}

std::string family_kind(const FamilySpec& spec) {
  return std::visit(
      [](const auto& f) -> std::string {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, SrwLazyEnds>) return "srw_lazy_ends";
        if constexpr (std::is_same_v<T, BiasedWalk>) return "biased_walk";
        if constexpr (std::is_same_v<T, MetropolisChain>) return "metropolis";
        if constexpr (std::is_same_v<T, BernoulliLaplace>)
          return "bernoulli_laplace";
        if constexpr (std::is_same_v<T, HammingWalk>) return "hamming";
        if constexpr (std::is_same_v<T, ThetaHypercube>)
          return "theta_hypercube";
        if constexpr (std::is_same_v<T, QSubspace>) return "q_subspace";
      },
      spec);
}

std::vector<double> polynomial_target(int n, double degree) {
  if (n < 1 || !(degree >= 0.0) || !std::isfinite(degree)) {
    throw InvalidParams("polynomial target needs n >= 1 and degree >= 0");
  }
  std::vector<double> v(static_cast<std::size_t>(n) + 1);
  for (std::size_t j = 0; j < v.size(); ++j) {
    v[j] = std::pow(1.0 + static_cast<double>(j), degree);
  }
  return v;
}

std::vector<double> binomial_target(int n) {
  if (n < 1) {
    throw InvalidParams("binomial target needs n >= 1");
  }
  std::vector<double> logw(static_cast<std::size_t>(n) + 1);
  const double lg_n = std::lgamma(n + 1.0);
  for (int j = 0; j <= n; ++j) {
    logw[static_cast<std::size_t>(j)] =
        lg_n - std::lgamma(j + 1.0) - std::lgamma(n - j + 1.0);
  }
  const double peak = *std::max_element(logw.begin(), logw.end());
  std::vector<double> v(logw.size());
  for (std::size_t j = 0; j < v.size(); ++j) {
    v[j] = std::exp(logw[j] - peak);
  }
  for (double x : v) {
    if (!(x > 0.0)) {
      throw NonPositiveTarget("binomial tail underflows at this size");
    }
  }
  return v;
}

}  // namespace bdsep
