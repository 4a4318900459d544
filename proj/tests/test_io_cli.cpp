#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bdsep/chain.hpp"
#include "bdsep/chain_io.hpp"
#include "bdsep/cutoff.hpp"
#include "bdsep/families.hpp"
#include "bdsep/hitting.hpp"
#include "bdsep/spectral.hpp"
#include "cli.hpp"
#include "json.hpp"
#include "oracles.hpp"

using bdsep::BernoulliLaplace;
using bdsep::BiasedWalk;
using bdsep::BirthDeathChain;
using bdsep::chain_from_json;
using bdsep::chain_to_json;
using bdsep::families_from_json;
using bdsep::family_from_json;
using bdsep::family_to_json;
using bdsep::FamilySpec;
using bdsep::HammingWalk;
using bdsep::MetropolisChain;
using bdsep::QSubspace;
using bdsep::scan_report_json;
using bdsep::SrwLazyEnds;
using bdsep::ThetaHypercube;
using bdsep::TimeMode;

namespace {

struct TempFile {
  std::filesystem::path path;

  TempFile(const std::string& name, const std::string& content) {
    path = std::filesystem::temp_directory_path() / name;
    std::ofstream out(path);
    out << content;
  }
  ~TempFile() {
    std::error_code ec;
    std::filesystem::remove(path, ec);
  }
};

struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
};

CliResult run_cli(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  CliResult r;
  r.code = bdsep::cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

// Parses "a,b,c" CSV rows of doubles, skipping the header line.
std::vector<std::vector<double>> csv_rows(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream lines(text);
  std::string line;
  bool first = true;
  while (std::getline(lines, line)) {
    if (first || line.empty()) {
      first = false;
      continue;
    }
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(std::move(row));
  }
  return rows;
}

bool close(double a, double b, double tol) { return std::fabs(a - b) <= tol; }

}  // namespace

TEST_CASE("chain json round-trips every bit") {
  std::mt19937_64 rng(0x5eed0050);
  const BirthDeathChain chain = bdsep::test::random_chain(rng, 9);
  const BirthDeathChain back = chain_from_json(chain_to_json(chain));
  REQUIRE(back.top() == chain.top());
  CHECK(back.up_rates() == chain.up_rates());
  CHECK(back.down_rates() == chain.down_rates());
  CHECK(back.hold_rates() == chain.hold_rates());
}

TEST_CASE("malformed chain documents are io errors") {
  CHECK_THROWS_AS(chain_from_json("{oops"), bdsep::IoError);
  CHECK_THROWS_AS(chain_from_json("[1, 2]"), bdsep::IoError);
  CHECK_THROWS_AS(chain_from_json("{\"m\": 2, \"p\": [0.5, 0.5]}"),
                  bdsep::IoError);
  // Array lengths that disagree with m are structural, not rate, errors.
  CHECK_THROWS_AS(
      chain_from_json("{\"m\": 2, \"p\": [0.5], \"q\": [0.5, 0.5], "
                      "\"r\": [0.5, 0, 0.5]}"),
      bdsep::IoError);
  // A structurally sound document with bad rates reaches the rate checks.
  CHECK_THROWS_AS(
      chain_from_json("{\"m\": 1, \"p\": [1.5], \"q\": [0.5], "
                      "\"r\": [0, 0.5]}"),
      bdsep::NotStochastic);
}

TEST_CASE("family documents round-trip for every kind") {
  const std::vector<FamilySpec> specs = {
      SrwLazyEnds{12},
      BiasedWalk{0.65, 30},
      MetropolisChain{{1.0, 2.5, 0.75}},
      BernoulliLaplace{10, 4},
      HammingWalk{3, 7},
      ThetaHypercube{0.35, 9},
      QSubspace{3, 7, 3},
  };
  for (const auto& spec : specs) {
    const std::string text = family_to_json(spec);
    const FamilySpec back = family_from_json(text);
    CHECK(family_to_json(back) == text);
    CHECK(bdsep::family_kind(back) == bdsep::family_kind(spec));
  }
}

TEST_CASE("family list documents accept both container shapes") {
  const std::string one = family_to_json(SrwLazyEnds{5});
  const std::string two = family_to_json(BernoulliLaplace{8, 3});
  const auto bare = families_from_json("[" + one + ", " + two + "]");
  REQUIRE(bare.size() == 2);
  CHECK(bdsep::family_kind(bare[0]) == "srw_lazy_ends");
  CHECK(bdsep::family_kind(bare[1]) == "bernoulli_laplace");
  const auto wrapped =
      families_from_json("{\"families\": [" + one + "]}");
  REQUIRE(wrapped.size() == 1);
  CHECK_THROWS_AS(families_from_json("{\"families\": 3}"), bdsep::IoError);
  CHECK_THROWS_AS(
      family_from_json("{\"kind\": \"moebius\", \"params\": {}}"),
      bdsep::InvalidParams);
}

TEST_CASE("scan report json is well formed") {
  std::vector<FamilySpec> specs{SrwLazyEnds{8}, SrwLazyEnds{16},
                                SrwLazyEnds{32}};
  const auto report = bdsep::scan_family(specs, TimeMode::Continuous);
  const auto j = nlohmann::json::parse(scan_report_json(report));
  CHECK(j.at("verdict").get<std::string>() ==
        bdsep::verdict_name(report.verdict));
  CHECK(j.at("shape").get<std::string>() == bdsep::shape_name(report.shape));
  REQUIRE(j.at("points").size() == 3);
  CHECK(close(j["points"][0]["mean_hit"].get<double>(),
              report.points[0].stats.mean_hit, 1e-9));
  CHECK(j["points"][2]["m"].get<int>() == 32);
  CHECK(j["points"][1].contains("theta2"));
  CHECK(j["points"][1].contains("theta8"));
}

TEST_CASE("cli spectrum prints the closed form of the four-ball urn") {
  const auto r = run_cli(
      {"spectrum", "--family", "bernoulli-laplace", "--n", "4", "--r", "2"});
  REQUIRE(r.code == 0);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0][0] == 1.0);
  CHECK(close(rows[0][1], 1.0, 1e-12));
  CHECK(rows[1][0] == 2.0);
  CHECK(close(rows[1][1], 1.5, 1e-12));
}

TEST_CASE("cli mix-time agrees with the library") {
  const auto r = run_cli(
      {"mix-time", "--family", "srw", "--n", "10", "--eps", "0.25"});
  REQUIRE(r.code == 0);
  const double printed = std::stod(r.out);
  const double expected = bdsep::mixing_time(
      bdsep::closed_form_spectrum(SrwLazyEnds{10}), 0.25,
      TimeMode::Continuous);
  CHECK(close(printed, expected, 1e-6 * expected));
}

TEST_CASE("cli sep-curve starts at full separation") {
  const BirthDeathChain chain = bdsep::build(SrwLazyEnds{6});
  TempFile file("bdsep_test_chain.json", chain_to_json(chain));
  const auto r = run_cli({"sep-curve", "--chain", file.path.string(),
                          "--points", "5"});
  REQUIRE(r.code == 0);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 5);
  CHECK(rows[0][0] == 0.0);
  CHECK(rows[0][1] == 1.0);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i][1] <= rows[i - 1][1] + 1e-12);
  }
}

TEST_CASE("cli exit codes sort usage, domain and file errors") {
  CHECK(run_cli({"frobnicate"}).code == 1);
  CHECK(run_cli({"stats", "--chain", "/nonexistent/chain.json"}).code == 2);

  TempFile broken("bdsep_test_broken.json", "{not json");
  CHECK(run_cli({"stats", "--chain", broken.path.string()}).code == 2);

  // Structurally valid json describing a disconnected chain is a domain
  // error, not a format error.
  TempFile reducible("bdsep_test_reducible.json",
                     "{\"m\": 2, \"p\": [0.5, 0.0], \"q\": [0.5, 0.5], "
                     "\"r\": [0.5, 0.0, 0.5]}");
  CHECK(run_cli({"stats", "--chain", reducible.path.string()}).code == 1);

  CHECK(run_cli({"spectrum", "--family", "moebius", "--n", "4"}).code == 1);

  TempFile chain("bdsep_test_both.json",
                 chain_to_json(bdsep::build(SrwLazyEnds{4})));
  CHECK(run_cli({"stats", "--chain", chain.path.string(), "--family", "srw",
                 "--n", "4"}).code == 1);

  const auto help = run_cli({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("spectrum") != std::string::npos);
}

TEST_CASE("cli scan output does not depend on the job count") {
  const std::vector<std::string> base{"scan", "--family", "srw",
                                      "--sizes", "10,20,40"};
  auto serial = base;
  serial.insert(serial.end(), {"--jobs", "1"});
  auto parallel = base;
  parallel.insert(parallel.end(), {"--jobs", "4"});
  const auto a = run_cli(serial);
  const auto b = run_cli(parallel);
  REQUIRE(a.code == 0);
  REQUIRE(b.code == 0);
  CHECK(a.out == b.out);
  const auto j = nlohmann::json::parse(a.out);
  CHECK(j.at("verdict").get<std::string>() == "no_cutoff");
}

TEST_CASE("cli scan reads family documents from a file") {
  std::string doc = "[";
  bool first = true;
  for (int r : {5, 10, 20}) {
    if (!first) doc += ", ";
    doc += family_to_json(BernoulliLaplace{4 * r, r});
    first = false;
  }
  doc += "]";
  TempFile file("bdsep_test_scan.json", doc);
  const auto r = run_cli({"scan", "--spec-file", file.path.string()});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  REQUIRE(j.at("points").size() == 3);
  CHECK(j["points"][2]["param"].get<double>() == 20.0);
}

TEST_CASE("cli compare-distances keeps total variation below separation") {
  const auto r = run_cli({"compare-distances", "--family", "srw", "--n", "8",
                          "--points", "6"});
  REQUIRE(r.code == 0);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 6);
  for (const auto& row : rows) {
    REQUIRE(row.size() == 4);
    CHECK(row[2] <= row[1] + 1e-12);  // tv <= sep
    CHECK(row[1] >= -1e-15);
    CHECK(row[1] <= 1.0 + 1e-15);
  }
}

TEST_CASE("cli stats emits json the library agrees with") {
  const auto r = run_cli({"stats", "--family", "hamming", "--n", "3",
                          "--r", "12"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  const auto stats = bdsep::cutoff_stats(
      bdsep::closed_form_spectrum(HammingWalk{3, 12}), TimeMode::Continuous);
  CHECK(close(j.at("gap").get<double>(), stats.gap, 1e-9 * stats.gap));
  CHECK(close(j.at("mean_hit").get<double>(), stats.mean_hit,
              1e-9 * stats.mean_hit));
  CHECK(close(j.at("window").get<double>(), stats.window,
              1e-9 * stats.window));
  CHECK(close(j.at("N").get<double>(), stats.product_n,
              1e-9 * stats.product_n));
  CHECK(close(j.at("theta2").get<double>(), stats.theta2,
              1e-9 * stats.theta2));
}

TEST_CASE("cli spectrum csv feeds back in through --spectrum") {
  const auto printed = run_cli(
      {"spectrum", "--family", "biased", "--p", "0.6", "--n", "12"});
  REQUIRE(printed.code == 0);
  TempFile file("bdsep_test_spectrum.csv", printed.out);
  const auto via_csv =
      run_cli({"stats", "--spectrum", file.path.string()});
  const auto direct = run_cli(
      {"stats", "--family", "biased", "--p", "0.6", "--n", "12"});
  REQUIRE(via_csv.code == 0);
  REQUIRE(direct.code == 0);
  const auto a = nlohmann::json::parse(via_csv.out);
  const auto b = nlohmann::json::parse(direct.out);
  for (const char* key : {"gap", "mean_hit", "window", "N", "theta2"}) {
    CHECK(close(a.at(key).get<double>(), b.at(key).get<double>(),
                1e-8 * std::fabs(b.at(key).get<double>())));
  }
}

TEST_CASE("cli profile emits the reference columns") {
  const auto r = run_cli({"profile", "--family", "biased", "--p", "0.7",
                          "--n", "60", "--points", "11"});
  REQUIRE(r.code == 0);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 11);
  CHECK(close(rows[0][0], -3.0, 1e-12));
  CHECK(close(rows[10][0], 3.0, 1e-12));
  // The middle row's gaussian reference is one half by symmetry.
  CHECK(close(rows[5][2], 0.5, 1e-12));
  for (const auto& row : rows) REQUIRE(row.size() == 5);
}
