#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "bdsep/chain.hpp"
#include "bdsep/chain_io.hpp"
#include "bdsep/cutoff.hpp"
#include "bdsep/distances.hpp"
#include "bdsep/errors.hpp"
#include "bdsep/families.hpp"
#include "bdsep/hitting.hpp"
#include "bdsep/spectral.hpp"

namespace bdsep::cli {

namespace {

const std::vector<std::string> kKinds = {
    "srw_lazy_ends",     "biased_walk", "metropolis",     "bernoulli_laplace",
    "hamming",           "theta_hypercube", "q_subspace"};

// Accepts hyphen spellings and the short names people actually type.
std::string normalize_kind(std::string kind) {
  std::replace(kind.begin(), kind.end(), '-', '_');
  if (kind == "srw") kind = "srw_lazy_ends";
  if (kind == "biased") kind = "biased_walk";
  if (std::find(kKinds.begin(), kKinds.end(), kind) == kKinds.end()) {
    throw InvalidParams("unknown family: " + kind);
  }
  return kind;
}

std::string fmt12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot read \"" + path + "\"");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// One eigenvalue per line, optionally prefixed by an index column; a
// leading header line is skipped.  Values are sorted before validation.
Spectrum spectrum_from_csv(const std::string& text, const std::string& path) {
  std::vector<double> vals;
  std::istringstream lines(text);
  std::string line;
  bool first = true;
  while (std::getline(lines, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const auto comma = line.rfind(',');
    std::string cell =
        comma == std::string::npos ? line : line.substr(comma + 1);
    char* end = nullptr;
    const double v = std::strtod(cell.c_str(), &end);
    const bool parsed =
        end != cell.c_str() &&
        std::string(end).find_first_not_of(" \t") == std::string::npos;
    if (!parsed) {
      if (first) {
        first = false;  // header line
        continue;
      }
      throw IoError("\"" + path + "\" has a non-numeric row: " + line);
    }
    first = false;
    vals.push_back(v);
  }
  if (vals.empty()) {
    throw IoError("\"" + path + "\" holds no eigenvalues");
  }
  std::sort(vals.begin(), vals.end());
  return Spectrum(std::move(vals));
}

// Shared chain/family/spectrum selection for the single-chain verbs.
struct InputFlags {
  std::string chain_path;
  std::string spectrum_path;
  std::string family;
  int n = 0;
  int r = 0;
  int m = 0;
  int q = 0;
  double p = 0.0;
  double theta = 1.0;
  double degree = 2.0;
  std::string target = "poly";

  CLI::Option* chain_opt = nullptr;
  CLI::Option* spectrum_opt = nullptr;
  CLI::Option* family_opt = nullptr;
  CLI::Option* n_opt = nullptr;
  CLI::Option* r_opt = nullptr;
  CLI::Option* m_opt = nullptr;
  CLI::Option* q_opt = nullptr;
  CLI::Option* p_opt = nullptr;

  void attach(CLI::App* cmd, bool allow_spectrum) {
    chain_opt = cmd->add_option("--chain", chain_path,
                                "JSON file with fields m, p, q, r");
    family_opt = cmd->add_option(
        "--family", family,
        "built-in family kind: srw, biased, metropolis, bernoulli-laplace, "
        "hamming, theta-hypercube, q-subspace");
    if (allow_spectrum) {
      spectrum_opt = cmd->add_option(
          "--spectrum", spectrum_path,
          "CSV of eigenvalues (index,lambda or one value per line)");
    }
    n_opt = cmd->add_option("--n", n, "size parameter n");
    r_opt = cmd->add_option("--r", r, "size parameter r");
    m_opt = cmd->add_option("--m", m, "size parameter m");
    q_opt = cmd->add_option("--q", q, "field order q");
    p_opt = cmd->add_option("--p", p, "up-step probability");
    cmd->add_option("--theta", theta, "downhill weight (default 1)");
    cmd->add_option("--d", degree, "polynomial degree (default 2)");
    cmd->add_option("--target", target, "metropolis target shape")
        ->check(CLI::IsMember({"poly", "binomial", "uniform"}));
  }

  void need(const CLI::Option* opt, const char* flag) const {
    if (opt == nullptr || opt->count() == 0) {
      throw InvalidParams(std::string(flag) + " is required for " + family);
    }
  }

  FamilySpec make_family() const {
    const std::string kind = normalize_kind(family);
    if (kind == "srw_lazy_ends") {
      need(n_opt, "--n");
      return SrwLazyEnds{n};
    }
    if (kind == "biased_walk") {
      need(n_opt, "--n");
      need(p_opt, "--p");
      return BiasedWalk{p, n};
    }
    if (kind == "metropolis") {
      need(n_opt, "--n");
      return MetropolisChain{make_target(n)};
    }
    if (kind == "bernoulli_laplace") {
      need(n_opt, "--n");
      need(r_opt, "--r");
      return BernoulliLaplace{n, r};
    }
    if (kind == "hamming") {
      need(n_opt, "--n");
      need(r_opt, "--r");
      return HammingWalk{n, r};
    }
    if (kind == "theta_hypercube") {
      need(r_opt, "--r");
      return ThetaHypercube{theta, r};
    }
    need(q_opt, "--q");
    need(n_opt, "--n");
    need(m_opt, "--m");
    return QSubspace{q, n, m};
  }

  std::vector<double> make_target(int states_top) const {
    if (target == "binomial") return binomial_target(states_top);
    if (target == "uniform") return polynomial_target(states_top, 0.0);
    return polynomial_target(states_top, degree);
  }
};

struct Input {
  std::optional<BirthDeathChain> chain;
  std::optional<Spectrum> spectrum;
  std::optional<FamilySpec> family;
};

Input resolve(const InputFlags& f) {
  const int given = static_cast<int>(f.chain_opt->count() > 0) +
                    static_cast<int>(f.family_opt->count() > 0) +
                    static_cast<int>(f.spectrum_opt != nullptr &&
                                     f.spectrum_opt->count() > 0);
  if (given != 1) {
    throw InvalidParams(
        "give exactly one input: --chain, --family or --spectrum");
  }
  Input in;
  if (f.chain_opt->count() > 0) {
    in.chain = chain_from_json(read_file(f.chain_path));
  } else if (f.family_opt->count() > 0) {
    in.family = f.make_family();
  } else {
    in.spectrum =
        spectrum_from_csv(read_file(f.spectrum_path), f.spectrum_path);
  }
  return in;
}

const Spectrum& ensure_spectrum(Input& in) {
  if (!in.spectrum) {
    if (in.family) {
      in.spectrum = family_spectrum(*in.family);
    } else {
      in.spectrum = eigenvalues(*in.chain);
    }
  }
  return *in.spectrum;
}

const BirthDeathChain& ensure_chain(Input& in) {
  if (!in.chain) {
    if (!in.family) {
      throw InvalidParams("this verb needs transition rates, not a spectrum");
    }
    in.chain = build(*in.family);
  }
  return *in.chain;
}

TimeMode mode_of(const std::string& name) {
  return name == "discrete" ? TimeMode::Discrete : TimeMode::Continuous;
}

std::vector<double> time_grid(double t_max, int points) {
  if (points < 2) {
    throw TooFewPoints("a curve needs at least two points");
  }
  if (!(t_max > 0.0) || !std::isfinite(t_max)) {
    throw InvalidParams("--t-max must be positive and finite");
  }
  std::vector<double> ts(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    ts[static_cast<std::size_t>(i)] = t_max * i / (points - 1);
  }
  return ts;
}

std::vector<std::int64_t> step_grid(std::int64_t k_max, int points) {
  if (points < 2) {
    throw TooFewPoints("a curve needs at least two points");
  }
  if (k_max < 1) {
    throw InvalidParams("--k-max must be at least 1");
  }
  std::vector<std::int64_t> ks;
  ks.reserve(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    const auto k = static_cast<std::int64_t>(
        std::llround(static_cast<double>(k_max) * i / (points - 1)));
    if (ks.empty() || k != ks.back()) ks.push_back(k);
  }
  return ks;
}

struct CurveFlags {
  std::string mode = "continuous";
  int points = 20;
  double t_max = 0.0;
  std::int64_t k_max = 0;
  CLI::Option* t_max_opt = nullptr;
  CLI::Option* k_max_opt = nullptr;

  void attach(CLI::App* cmd) {
    cmd->add_option("--mode", mode, "continuous or discrete")
        ->check(CLI::IsMember({"continuous", "discrete"}));
    cmd->add_option("--points", points, "grid size (default 20)");
    t_max_opt = cmd->add_option("--t-max", t_max,
                                "last time (default 5x the mean)");
    k_max_opt = cmd->add_option("--k-max", k_max,
                                "last step count (default 5x the mean)");
  }

  double t_end(const Spectrum& s) const {
    if (t_max_opt->count() > 0) return t_max;
    return 5.0 * moments(s, TimeMode::Continuous).mean;
  }

  std::int64_t k_end(const Spectrum& s) const {
    if (k_max_opt->count() > 0) return k_max;
    return std::max<std::int64_t>(
        1, std::llround(5.0 * moments(s, TimeMode::Discrete).mean));
  }
};

void cmd_spectrum(Input& in, const std::string& method, std::ostream& out) {
  std::optional<Spectrum> s;
  if (method == "closed") {
    if (!in.family) {
      throw InvalidParams("--method closed needs a --family input");
    }
    s = closed_form_spectrum(*in.family);
  } else if (method == "numeric") {
    s = eigenvalues(ensure_chain(in));
  } else {
    s = ensure_spectrum(in);
  }
  out << "index,lambda\n";
  for (std::size_t i = 0; i < s->count(); ++i) {
    out << (i + 1) << "," << fmt12(s->values()[i]) << "\n";
  }
}

void cmd_sep_curve(Input& in, const CurveFlags& curve, std::ostream& out) {
  const Spectrum& s = ensure_spectrum(in);
  if (mode_of(curve.mode) == TimeMode::Continuous) {
    const auto ts = time_grid(curve.t_end(s), curve.points);
    const auto sep = sep_continuous_grid(s, ts);
    out << "t,sep\n";
    for (std::size_t i = 0; i < ts.size(); ++i) {
      out << fmt12(ts[i]) << "," << fmt12(sep[i]) << "\n";
    }
  } else {
    const auto ks = step_grid(curve.k_end(s), curve.points);
    const auto all = sep_discrete_grid(s, ks.back());
    out << "k,sep\n";
    for (const auto k : ks) {
      out << k << "," << fmt12(all[static_cast<std::size_t>(k)]) << "\n";
    }
  }
}

void cmd_mix_time(Input& in, double eps, const std::string& mode,
                  std::ostream& out) {
  out << fmt12(mixing_time(ensure_spectrum(in), eps, mode_of(mode))) << "\n";
}

void cmd_stats(Input& in, const std::string& mode, std::ostream& out) {
  const CutoffStats st = cutoff_stats(ensure_spectrum(in), mode_of(mode));
  out << "{\"gap\": " << fmt12(st.gap) << ", \"mean_hit\": "
      << fmt12(st.mean_hit) << ", \"window\": " << fmt12(st.window)
      << ", \"N\": " << fmt12(st.product_n) << ", \"theta2\": "
      << fmt12(st.theta2) << "}\n";
}

void cmd_compare(Input& in, const CurveFlags& curve, int start,
                 std::ostream& out) {
  const BirthDeathChain& chain = ensure_chain(in);
  const StationaryDistribution pi = stationary(chain);
  const Spectrum& s = ensure_spectrum(in);
  if (mode_of(curve.mode) == TimeMode::Continuous) {
    const auto ts = time_grid(curve.t_end(s), curve.points);
    const auto dists = evolve_continuous_grid(chain, ts, start);
    out << "t,sep,tv,l2\n";
    for (std::size_t i = 0; i < ts.size(); ++i) {
      out << fmt12(ts[i]) << "," << fmt12(separation_direct(dists[i], pi))
          << "," << fmt12(total_variation(dists[i], pi)) << ","
          << fmt12(l2_distance(dists[i], pi)) << "\n";
    }
  } else {
    const auto ks = step_grid(curve.k_end(s), curve.points);
    out << "k,sep,tv,l2\n";
    for (const auto k : ks) {
      const auto dist = evolve_discrete(chain, k, start);
      out << k << "," << fmt12(separation_direct(dist, pi)) << ","
          << fmt12(total_variation(dist, pi)) << ","
          << fmt12(l2_distance(dist, pi)) << "\n";
    }
  }
}

struct ScanFlags {
  std::string family;
  std::vector<int> sizes;
  std::string spec_file;
  double n_factor = 2.0;
  double p = 0.0;
  double theta = 1.0;
  double degree = 2.0;
  std::string target = "poly";
  int n = 2;
  std::string mode = "continuous";
  ScanOptions options;

  CLI::Option* family_opt = nullptr;
  CLI::Option* spec_opt = nullptr;
  CLI::Option* p_opt = nullptr;

  void attach(CLI::App* cmd) {
    family_opt = cmd->add_option(
        "--family", family,
        "built-in family kind: srw, biased, metropolis, bernoulli-laplace, "
        "hamming, theta-hypercube, q-subspace");
    cmd->add_option("--sizes", sizes, "size knob values, ascending")
        ->delimiter(',');
    spec_opt = cmd->add_option("--spec-file", spec_file,
                               "JSON array of family documents");
    cmd->add_option("--n-factor", n_factor,
                    "n as a multiple of the size knob (default 2)");
    p_opt = cmd->add_option("--p", p, "up-step probability");
    cmd->add_option("--theta", theta, "downhill weight (default 1)");
    cmd->add_option("--d", degree, "polynomial degree (default 2)");
    cmd->add_option("--target", target, "metropolis target shape")
        ->check(CLI::IsMember({"poly", "binomial", "uniform"}));
    cmd->add_option("--n", n, "alphabet size for hamming (default 2)");
    cmd->add_option("--mode", mode, "continuous or discrete")
        ->check(CLI::IsMember({"continuous", "discrete"}));
    cmd->add_option("--jobs", options.jobs, "parallel evaluations");
    cmd->add_option("--divergence-threshold", options.divergence_threshold,
                    "N above this, still climbing, is a cutoff");
    cmd->add_option("--bounded-ratio", options.bounded_ratio,
                    "N max/min below this is no cutoff");
    cmd->add_option("--shape-growth-threshold",
                    options.shape_growth_threshold,
                    "theta2 above this, still climbing, is gaussian");
  }

  FamilySpec spec_at(int size) const {
    const std::string kind = normalize_kind(family);
    const int coupled = static_cast<int>(std::lround(n_factor * size));
    if (kind == "srw_lazy_ends") return SrwLazyEnds{size};
    if (kind == "biased_walk") {
      if (p_opt->count() == 0) {
        throw InvalidParams("--p is required for biased_walk");
      }
      return BiasedWalk{p, size};
    }
    if (kind == "metropolis") {
      if (target == "binomial") return MetropolisChain{binomial_target(size)};
      if (target == "uniform") {
        return MetropolisChain{polynomial_target(size, 0.0)};
      }
      return MetropolisChain{polynomial_target(size, degree)};
    }
    if (kind == "bernoulli_laplace") return BernoulliLaplace{coupled, size};
    if (kind == "hamming") return HammingWalk{n, size};
    if (kind == "theta_hypercube") return ThetaHypercube{theta, size};
    return QSubspace{static_cast<int>(std::lround(n_factor)), coupled, size};
  }

  std::vector<FamilySpec> make_specs() const {
    if (spec_opt->count() > 0) {
      if (family_opt->count() > 0 || !sizes.empty()) {
        throw InvalidParams("--spec-file excludes --family and --sizes");
      }
      return families_from_json(read_file(spec_file));
    }
    if (family_opt->count() == 0 || sizes.empty()) {
      throw InvalidParams("give --family with --sizes, or --spec-file");
    }
    std::vector<FamilySpec> specs;
    specs.reserve(sizes.size());
    for (const int s : sizes) specs.push_back(spec_at(s));
    return specs;
  }
};

void cmd_profile(Input& in, double c_min, double c_max, int points,
                 std::ostream& out) {
  if (points < 2) {
    throw TooFewPoints("a profile needs at least two points");
  }
  if (!(c_max > c_min)) {
    throw InvalidParams("--c-max must exceed --c-min");
  }
  std::vector<double> grid(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    grid[static_cast<std::size_t>(i)] =
        c_min + (c_max - c_min) * i / (points - 1);
  }
  const ShapeProfile pr = shape_profile(ensure_spectrum(in), grid);
  out << "c,sep,gaussian_ref,gumbel_ref,gumbel_sep\n";
  for (std::size_t i = 0; i < pr.grid.size(); ++i) {
    out << fmt12(pr.grid[i]) << "," << fmt12(pr.sep_values[i]) << ","
        << fmt12(pr.gaussian_ref[i]) << "," << fmt12(pr.gumbel_ref[i]) << ","
        << fmt12(pr.gumbel_sep[i]) << "\n";
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Exact separation and cutoff analysis for birth-and-death "
               "chains"};
  app.require_subcommand(1);

  auto* sc_spectrum =
      app.add_subcommand("spectrum", "eigenvalues of I - K as index,lambda");
  InputFlags in_spectrum;
  in_spectrum.attach(sc_spectrum, false);
  std::string method = "auto";
  sc_spectrum->add_option("--method", method, "auto, numeric or closed")
      ->check(CLI::IsMember({"auto", "numeric", "closed"}));

  auto* sc_curve =
      app.add_subcommand("sep-curve", "separation from the top state over "
                         "a time grid");
  InputFlags in_curve;
  in_curve.attach(sc_curve, true);
  CurveFlags curve_curve;
  curve_curve.attach(sc_curve);

  auto* sc_mix = app.add_subcommand(
      "mix-time", "first time separation reaches the level");
  InputFlags in_mix;
  in_mix.attach(sc_mix, true);
  double eps = 0.25;
  std::string mix_mode = "continuous";
  sc_mix->add_option("--eps", eps, "separation level (default 0.25)");
  sc_mix->add_option("--mode", mix_mode, "continuous or discrete")
      ->check(CLI::IsMember({"continuous", "discrete"}));

  auto* sc_stats = app.add_subcommand(
      "stats", "gap, mean hitting time, window, N and theta2 as JSON");
  InputFlags in_stats;
  in_stats.attach(sc_stats, true);
  std::string stats_mode = "continuous";
  sc_stats->add_option("--mode", stats_mode, "continuous or discrete")
      ->check(CLI::IsMember({"continuous", "discrete"}));

  auto* sc_compare = app.add_subcommand(
      "compare-distances",
      "separation, total variation and l2 from evolved distributions");
  InputFlags in_compare;
  in_compare.attach(sc_compare, false);
  CurveFlags curve_compare;
  curve_compare.attach(sc_compare);
  int start = 0;
  sc_compare->add_option("--start", start, "starting state (default 0)");

  auto* sc_scan = app.add_subcommand(
      "scan", "classify a family sweep for cutoff, as JSON");
  ScanFlags scan_flags;
  scan_flags.attach(sc_scan);

  auto* sc_profile = app.add_subcommand(
      "profile", "separation against gaussian and gumbel shapes on a c-grid");
  InputFlags in_profile;
  in_profile.attach(sc_profile, true);
  double c_min = -3.0;
  double c_max = 3.0;
  int profile_points = 61;
  sc_profile->add_option("--c-min", c_min, "left end (default -3)");
  sc_profile->add_option("--c-max", c_max, "right end (default 3)");
  sc_profile->add_option("--points", profile_points,
                         "grid size (default 61)");

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("bdsep");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (sc_spectrum->parsed()) {
      Input in = resolve(in_spectrum);
      cmd_spectrum(in, method, out);
    } else if (sc_curve->parsed()) {
      Input in = resolve(in_curve);
      cmd_sep_curve(in, curve_curve, out);
    } else if (sc_mix->parsed()) {
      Input in = resolve(in_mix);
      cmd_mix_time(in, eps, mix_mode, out);
    } else if (sc_stats->parsed()) {
      Input in = resolve(in_stats);
      cmd_stats(in, stats_mode, out);
    } else if (sc_compare->parsed()) {
      Input in = resolve(in_compare);
      cmd_compare(in, curve_compare, start, out);
    } else if (sc_scan->parsed()) {
      const ScanReport report = scan_family(
          scan_flags.make_specs(), mode_of(scan_flags.mode),
          scan_flags.options);
      out << scan_report_json(report);
    } else if (sc_profile->parsed()) {
      Input in = resolve(in_profile);
      cmd_profile(in, c_min, c_max, profile_points, out);
    }
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace bdsep::cli
