#include "bdsep/chain_io.hpp"

#include <cstdio>
#include <utility>

#include "bdsep/errors.hpp"
#include "json.hpp"

namespace bdsep {

namespace {

using nlohmann::json;

std::string num(double v, const char* fmt) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

std::string num17(double v) { return num(v, "%.17g"); }
std::string num12(double v) { return num(v, "%.12g"); }

std::string array17(const std::vector<double>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += num17(v[i]);
  }
  out += "]";
  return out;
}

json parse(const std::string& text, const char* what) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) {
    throw IoError(std::string(what) + " document is not valid json");
  }
  return j;
}

const json& field(const json& j, const char* key, const char* what) {
  const auto it = j.find(key);
  if (it == j.end()) {
    throw IoError(std::string(what) + " document is missing \"" + key + "\"");
  }
  return *it;
}

int int_field(const json& j, const char* key, const char* what) {
  const json& f = field(j, key, what);
  if (!f.is_number_integer() && !f.is_number_unsigned()) {
    throw IoError(std::string(what) + " field \"" + key +
                  "\" must be an integer");
  }
  return f.get<int>();
}

double double_field(const json& j, const char* key, const char* what) {
  const json& f = field(j, key, what);
  if (!f.is_number()) {
    throw IoError(std::string(what) + " field \"" + key +
                  "\" must be a number");
  }
  return f.get<double>();
}

std::vector<double> number_array(const json& f, const char* key,
                                 const char* what) {
  if (!f.is_array()) {
    throw IoError(std::string(what) + " field \"" + key +
                  "\" must be an array");
  }
  std::vector<double> out;
  out.reserve(f.size());
  for (const auto& e : f) {
    if (!e.is_number()) {
      throw IoError(std::string(what) + " field \"" + key +
                    "\" must hold only numbers");
    }
    out.push_back(e.get<double>());
  }
  return out;
}

FamilySpec family_from_value(const json& j) {
  if (!j.is_object()) {
    throw IoError("family document must be a json object");
  }
  const json& kind_field = field(j, "kind", "family");
  if (!kind_field.is_string()) {
    throw IoError("family field \"kind\" must be a string");
  }
  const std::string kind = kind_field.get<std::string>();
  const json& params = field(j, "params", "family");
  if (!params.is_object()) {
    throw IoError("family field \"params\" must be a json object");
  }
  if (kind == "srw_lazy_ends") {
    return SrwLazyEnds{int_field(params, "n", "family")};
  }
  if (kind == "biased_walk") {
    return BiasedWalk{double_field(params, "p", "family"),
                      int_field(params, "n", "family")};
  }
  if (kind == "metropolis") {
    return MetropolisChain{
        number_array(field(params, "target", "family"), "target", "family")};
  }
  if (kind == "bernoulli_laplace") {
    return BernoulliLaplace{int_field(params, "n", "family"),
                            int_field(params, "r", "family")};
  }
  if (kind == "hamming") {
    return HammingWalk{int_field(params, "n", "family"),
                       int_field(params, "r", "family")};
  }
  if (kind == "theta_hypercube") {
    return ThetaHypercube{double_field(params, "theta", "family"),
                          int_field(params, "r", "family")};
  }
  if (kind == "q_subspace") {
    return QSubspace{int_field(params, "q", "family"),
                     int_field(params, "n", "family"),
                     int_field(params, "m", "family")};
  }
  throw InvalidParams("unknown family kind \"" + kind + "\"");
}

}  // namespace

std::string chain_to_json(const BirthDeathChain& chain) {
  std::string out = "{\"m\": " + std::to_string(chain.top());
  out += ", \"p\": " + array17(chain.up_rates());
  out += ", \"q\": " + array17(chain.down_rates());
  out += ", \"r\": " + array17(chain.hold_rates());
  out += "}";
  return out;
}

BirthDeathChain chain_from_json(const std::string& text) {
  const json j = parse(text, "chain");
  if (!j.is_object()) {
    throw IoError("chain document must be a json object");
  }
  const int m = int_field(j, "m", "chain");
  auto p = number_array(field(j, "p", "chain"), "p", "chain");
  auto q = number_array(field(j, "q", "chain"), "q", "chain");
  auto r = number_array(field(j, "r", "chain"), "r", "chain");
  const auto mu = static_cast<std::size_t>(m < 0 ? 0 : m);
  if (m < 1 || p.size() != mu || q.size() != mu || r.size() != mu + 1) {
    throw IoError("chain arrays disagree with m");
  }
  return {std::move(p), std::move(q), std::move(r)};
}

std::string family_to_json(const FamilySpec& spec) {
  const std::string kind = family_kind(spec);
  std::string params = std::visit(
      [](const auto& f) -> std::string {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, SrwLazyEnds>) {
          return "{\"n\": " + std::to_string(f.n) + "}";
        } else if constexpr (std::is_same_v<T, BiasedWalk>) {
          return "{\"p\": " + num17(f.p) + ", \"n\": " + std::to_string(f.n) +
                 "}";
        } else if constexpr (std::is_same_v<T, MetropolisChain>) {
          return "{\"target\": " + array17(f.target) + "}";
        } else if constexpr (std::is_same_v<T, BernoulliLaplace>) {
          return "{\"n\": " + std::to_string(f.n) +
                 ", \"r\": " + std::to_string(f.r) + "}";
        } else if constexpr (std::is_same_v<T, HammingWalk>) {
          return "{\"n\": " + std::to_string(f.n) +
                 ", \"r\": " + std::to_string(f.r) + "}";
        } else if constexpr (std::is_same_v<T, ThetaHypercube>) {
          return "{\"theta\": " + num17(f.theta) +
                 ", \"r\": " + std::to_string(f.r) + "}";
        } else {
          return "{\"q\": " + std::to_string(f.q) +
                 ", \"n\": " + std::to_string(f.n) +
                 ", \"m\": " + std::to_string(f.m) + "}";
        }
      },
      spec);
  return "{\"kind\": \"" + kind + "\", \"params\": " + params + "}";
}

FamilySpec family_from_json(const std::string& text) {
  return family_from_value(parse(text, "family"));
}

std::vector<FamilySpec> families_from_json(const std::string& text) {
  const json j = parse(text, "family list");
  const json* arr = &j;
  if (j.is_object()) {
    arr = &field(j, "families", "family list");
  }
  if (!arr->is_array()) {
    throw IoError("family list document must be an array of families");
  }
  std::vector<FamilySpec> out;
  out.reserve(arr->size());
  for (const auto& e : *arr) {
    out.push_back(family_from_value(e));
  }
  return out;
}

std::string scan_report_json(const ScanReport& report) {
  std::string out = "{\n  \"verdict\": \"" + verdict_name(report.verdict);
  out += "\",\n  \"shape\": \"" + shape_name(report.shape);
  out += "\",\n  \"thresholds\": {\"divergence\": " +
         num12(report.options.divergence_threshold);
  out += ", \"bounded_ratio\": " + num12(report.options.bounded_ratio);
  out += ", \"shape_growth\": " + num12(report.options.shape_growth_threshold);
  out += "},\n  \"points\": [";
  for (std::size_t i = 0; i < report.points.size(); ++i) {
    const ScanPoint& p = report.points[i];
    out += i ? ",\n    {" : "\n    {";
    out += "\"param\": " + num12(p.param);
    out += ", \"m\": " + std::to_string(p.m);
    out += ", \"gap\": " + num12(p.stats.gap);
    out += ", \"mean_hit\": " + num12(p.stats.mean_hit);
    out += ", \"window\": " + num12(p.stats.window);
    out += ", \"N\": " + num12(p.stats.product_n);
    for (int k = 2; k <= 8; ++k) {
      out += ", \"theta" + std::to_string(k) +
             "\": " + num12(p.theta_diag[static_cast<std::size_t>(k - 2)]);
    }
    out += "}";
  }
  out += "\n  ]\n}\n";
  return out;
}

}  // namespace bdsep
