#include "gridstats/serialization.hpp"

#include <string>

#include "gridstats/error.hpp"

namespace gridstats {

using nlohmann::json;

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double number_at(const json& j, const char* key, const char* where) {
  if (!j.contains(key) || !j.at(key).is_number())
    throw Error(std::string(where) + ": missing numeric field '" + key + "'");
  return j.at(key).get<double>();
}

std::optional<double> optional_number(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  if (!j.at(key).is_number()) throw Error(std::string("field '") + key + "' must be a number");
  return j.at(key).get<double>();
}

void put_optional(json& j, const char* key, const std::optional<double>& value) {
  if (value) j[key] = *value;
}

}  // namespace

json to_json(const DistSpec& dist) {
  json params = std::visit(Overloaded{
                               [](const TlsParams& p) { return json{{"mu", p.mu}, {"sigma", p.sigma}, {"nu", p.nu}}; },
                               [](const GevParams& p) {
                                 return json{{"mu", p.mu}, {"sigma", p.sigma}, {"zeta", p.zeta}};
                               },
                               [](const ExponentialParams& p) { return json{{"mu", p.mu}}; },
                               [](const NormalParams& p) { return json{{"mu", p.mu}, {"sigma", p.sigma}}; },
                           },
                           dist.params());
  return json{{"family", family_name(dist.family())}, {"params", std::move(params)}};
}

DistSpec dist_from_json(const json& j) {
  if (!j.is_object() || !j.contains("family") || !j.at("family").is_string())
    throw Error("distribution JSON needs a string 'family'");
  const auto family = parse_family(j.at("family").get<std::string>());
  if (!j.contains("params") || !j.at("params").is_object())
    throw Error("distribution JSON needs a 'params' object");
  const auto& p = j.at("params");
  constexpr const char* kWhere = "distribution params";
  switch (family) {
    case Family::Tls:
      return DistSpec::tls(number_at(p, "mu", kWhere), number_at(p, "sigma", kWhere), number_at(p, "nu", kWhere));
    case Family::Gev:
      return DistSpec::gev(number_at(p, "mu", kWhere), number_at(p, "sigma", kWhere), number_at(p, "zeta", kWhere));
    case Family::Exponential: return DistSpec::exponential(number_at(p, "mu", kWhere));
    case Family::Normal: return DistSpec::normal(number_at(p, "mu", kWhere), number_at(p, "sigma", kWhere));
  }
  throw Error("unknown distribution family");
}

json to_json(const SummaryStats& s) {
  return json{{"n", s.n},     {"median", s.median}, {"mean", s.mean}, {"min", s.min},
              {"max", s.max}, {"q10", s.q10},       {"q90", s.q90}};
}

json to_json(const FitResult& fit) {
  json j{{"dist", to_json(fit.dist)},
         {"log_likelihood", fit.log_likelihood},
         {"n", fit.n},
         {"converged", fit.converged},
         {"iterations", fit.iterations}};
  if (!fit.diagnostic.empty()) j["diagnostic"] = fit.diagnostic;
  return j;
}

json to_json(const KlScore& score) {
  return json{{"d_kl", score.d_kl},
              {"unit", "nats"},
              {"bins_used", score.bins_used},
              {"empty_bins_skipped", score.empty_bins_skipped}};
}

json to_json(const ReferenceEntry& e) {
  json j{{"kind", to_string(e.kind)}, {"class_kv", e.class_kv}};
  if (!e.summary.empty()) {
    json s = json::object();
    put_optional(s, "median", e.summary.median);
    put_optional(s, "mean", e.summary.mean);
    put_optional(s, "min", e.summary.min);
    put_optional(s, "max", e.summary.max);
    put_optional(s, "q10", e.summary.q10);
    put_optional(s, "q90", e.summary.q90);
    j["summary"] = std::move(s);
  }
  if (e.band) j["band"] = json{{"lo", e.band->lo}, {"hi", e.band->hi}, {"fraction", e.band->fraction}};
  if (e.fitted)
    j["fitted"] = to_json(*e.fitted);
  else if (e.fitted_family)
    j["fitted"] = json{{"family", family_name(*e.fitted_family)}};
  put_optional(j, "reference_d_kl", e.reference_d_kl);
  return j;
}

ReferenceEntry entry_from_json(const json& j) {
  if (!j.is_object()) throw Error("profile entry must be an object");
  if (!j.contains("kind") || !j.at("kind").is_string()) throw Error("profile entry needs a string 'kind'");
  ReferenceEntry e{parse_parameter_kind(j.at("kind").get<std::string>()),
                   number_at(j, "class_kv", "profile entry"),
                   {},
                   std::nullopt,
                   std::nullopt,
                   std::nullopt,
                   optional_number(j, "reference_d_kl")};
  if (j.contains("summary") && !j.at("summary").is_null()) {
    const auto& s = j.at("summary");
    e.summary = {optional_number(s, "median"), optional_number(s, "mean"), optional_number(s, "min"),
                 optional_number(s, "max"),    optional_number(s, "q10"),  optional_number(s, "q90")};
  }
  if (j.contains("band") && !j.at("band").is_null()) {
    const auto& b = j.at("band");
    e.band = ReferenceBand{number_at(b, "lo", "band"), number_at(b, "hi", "band"), number_at(b, "fraction", "band")};
  }
  if (j.contains("fitted") && !j.at("fitted").is_null()) {
    const auto& f = j.at("fitted");
    if (!f.contains("family") || !f.at("family").is_string()) throw Error("fitted distribution needs a 'family'");
    e.fitted_family = parse_family(f.at("family").get<std::string>());
    if (f.contains("params") && !f.at("params").is_null()) e.fitted = dist_from_json(f);
  }
  return e;
}

json to_json(const Profile& profile) {
  json arr = json::array();
  for (const auto& e : profile.entries()) arr.push_back(to_json(e));
  return arr;
}

Profile profile_from_json(const json& j) {
  if (!j.is_array()) throw Error("profile JSON must be an array of entries");
  std::vector<ReferenceEntry> entries;
  for (const auto& item : j) entries.push_back(entry_from_json(item));
  return Profile(std::move(entries));
}

json to_json(const ValidationThresholds& t) {
  return json{{"median_rel", t.median_rel},
              {"band_abs", t.band_abs},
              {"range_factor", t.range_factor},
              {"kl_max", t.kl_max},
              {"decorrelation_max", t.decorrelation_max},
              {"family_rank_margin", t.family_rank_margin}};
}

ValidationThresholds thresholds_from_json(const json& j) {
  if (!j.is_object()) throw Error("thresholds JSON must be an object");
  ValidationThresholds t;
  for (const auto& [key, value] : j.items()) {
    if (!value.is_number()) throw Error("threshold '" + key + "' must be a number");
    const double v = value.get<double>();
    if (key == "median_rel")
      t.median_rel = v;
    else if (key == "band_abs")
      t.band_abs = v;
    else if (key == "range_factor")
      t.range_factor = v;
    else if (key == "kl_max")
      t.kl_max = v;
    else if (key == "decorrelation_max")
      t.decorrelation_max = v;
    else if (key == "family_rank_margin")
      t.family_rank_margin = v;
    else
      throw Error("unknown threshold '" + key + "'");
  }
  t.check();
  return t;
}

json to_json(const ValidationReport& report) {
  json findings = json::array();
  for (const auto& f : report.findings) {
    json item{{"kind", to_string(f.kind)},
              {"class_kv", f.class_kv},
              {"check", to_string(f.check)},
              {"pass", f.pass},
              {"skipped", f.skipped}};
    if (!f.detail.empty()) item["detail"] = f.detail;
    if (f.check != CheckName::NoData) {
      if (!f.skipped) item["observed"] = f.observed;
      item["expected"] = f.expected_lo == f.expected_hi ? json(f.expected_lo) : json::array({f.expected_lo, f.expected_hi});
      item["threshold"] = json{{"name", f.threshold_name}, {"value", f.threshold}};
    }
    findings.push_back(std::move(item));
  }
  return json{{"overall_pass", report.overall_pass},
              {"thresholds", to_json(report.thresholds)},
              {"units", {{"d_kl", "nats"}}},
              {"findings", std::move(findings)}};
}

}  // namespace gridstats
