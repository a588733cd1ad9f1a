#include "gridstats/reference_profiles.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "gridstats/error.hpp"
#include "text_util.hpp"

namespace gridstats {

std::string_view to_string(ParameterKind kind) noexcept {
  switch (kind) {
    case ParameterKind::TransformerReactanceOwnBase: return "transformer_reactance_own_base";
    case ParameterKind::TransformerMvaRating: return "transformer_mva_rating";
    case ParameterKind::TransformerXr: return "transformer_xr";
    case ParameterKind::LineReactanceCommonBase: return "line_reactance_common_base";
    case ParameterKind::LineCapacity: return "line_capacity";
    case ParameterKind::LineXr: return "line_xr";
  }
  return "unknown";
}

ParameterKind parse_parameter_kind(std::string_view name) {
  for (auto kind : kAllParameterKinds)
    if (to_string(kind) == name) return kind;
  throw Error("unknown parameter kind '" + std::string(name) + "'");
}

bool is_transformer_kind(ParameterKind kind) noexcept {
  return kind == ParameterKind::TransformerReactanceOwnBase || kind == ParameterKind::TransformerMvaRating ||
         kind == ParameterKind::TransformerXr;
}

Family reference_family(ParameterKind kind) noexcept {
  switch (kind) {
    case ParameterKind::TransformerReactanceOwnBase: return Family::Tls;
    case ParameterKind::TransformerMvaRating:
    case ParameterKind::TransformerXr: return Family::Gev;
    case ParameterKind::LineReactanceCommonBase: return Family::Exponential;
    case ParameterKind::LineCapacity:
    case ParameterKind::LineXr: return Family::Normal;
  }
  return Family::Normal;
}

std::string_view to_string(CheckName check) noexcept {
  switch (check) {
    case CheckName::MedianCheck: return "MedianCheck";
    case CheckName::BandCheck: return "BandCheck";
    case CheckName::RangeCheck: return "RangeCheck";
    case CheckName::KlCheck: return "KlCheck";
    case CheckName::DecorrelationCheck: return "DecorrelationCheck";
    case CheckName::FamilyRankCheck: return "FamilyRankCheck";
    case CheckName::NoData: return "NoData";
  }
  return "unknown";
}

void ReferenceEntry::check() const {
  const std::string where = std::string(to_string(kind)) + " @ " + detail::format_double(class_kv) + " kV";
  if (!(std::isfinite(class_kv) && class_kv > 0.0)) throw Error(where + ": class_kv must be positive");
  if (summary.empty() && !band && !fitted_family && !fitted)
    throw Error(where + ": entry needs a summary, a band or a fitted distribution");
  if (band && !(band->lo < band->hi && band->fraction >= 0.0 && band->fraction <= 1.0))
    throw Error(where + ": band needs lo < hi and a fraction in [0, 1]");
  if (summary.min && summary.max && *summary.min > *summary.max) throw Error(where + ": summary min exceeds max");
  if (fitted && fitted_family && fitted->family() != *fitted_family)
    throw Error(where + ": fitted parameters disagree with the fitted family");
  const auto family = fitted ? std::optional<Family>(fitted->family()) : fitted_family;
  if (family && *family != reference_family(kind))
    throw Error(where + ": fitted family must be " + std::string(family_name(reference_family(kind))));
}

Profile::Profile(std::vector<ReferenceEntry> entries) : entries_(std::move(entries)) {
  std::set<ProfileKey> seen;
  for (auto& e : entries_) {
    e.check();
    if (e.fitted && !e.fitted_family) e.fitted_family = e.fitted->family();
    if (!seen.insert({e.kind, e.class_kv}).second)
      throw Error("profile lists " + std::string(to_string(e.kind)) + " @ " + detail::format_double(e.class_kv) +
                  " kV more than once");
  }
}

const ReferenceEntry* Profile::find(ParameterKind kind, double class_kv) const noexcept {
  auto it = std::find_if(entries_.begin(), entries_.end(),
                         [&](const ReferenceEntry& e) { return e.kind == kind && e.class_kv == class_kv; });
  return it == entries_.end() ? nullptr : &*it;
}

const ReferenceEntry& Profile::at(ParameterKind kind, double class_kv) const {
  if (const auto* e = find(kind, class_kv)) return *e;
  throw Error("profile has no " + std::string(to_string(kind)) + " entry for " + detail::format_double(class_kv) +
              " kV");
}

namespace {

ReferenceEntry reactance(double kv, double median, double mean, double min, double max, double fraction) {
  ReferenceEntry e{ParameterKind::TransformerReactanceOwnBase, kv, {}, {}, Family::Tls, {}, {}};
  e.summary = {median, mean, min, max, std::nullopt, std::nullopt};
  e.band = ReferenceBand{0.05, 0.2, fraction};
  return e;
}

ReferenceEntry gev_entry(ParameterKind kind, double kv, ReferenceSummary summary, double mu, double sigma, double zeta,
                         double d_kl) {
  return ReferenceEntry{kind, kv, summary, std::nullopt, Family::Gev, DistSpec::gev(mu, sigma, zeta), d_kl};
}

ReferenceEntry family_only(ParameterKind kind, double kv) {
  return ReferenceEntry{kind, kv, {}, std::nullopt, reference_family(kind), std::nullopt, std::nullopt};
}

}  // namespace

Profile builtin_profile() {
  using K = ParameterKind;
  std::vector<ReferenceEntry> entries{
      reactance(115, 0.1291, 0.1363, 3.92e-4, 1.0162, 0.8188),
      reactance(138, 0.1246, 0.1381, 1.00e-4, 1.26, 0.8201),
      reactance(230, 0.1260, 0.1392, 2.47e-4, 1.08, 0.8733),

      gev_entry(K::TransformerMvaRating, 115, {53, 71.30, 3, 384, 22, 140}, 41.08, 27.38, 0.3732, 0.1295),
      gev_entry(K::TransformerMvaRating, 138, {83, 117.24, 3.3, 616, 39, 239}, 66.82, 42.31, 0.4166, 0.0990),
      gev_entry(K::TransformerMvaRating, 230, {203, 246.61, 10, 1380, 62.5, 470}, 154.79, 105.61, 0.2433, 0.1148),

      gev_entry(K::TransformerXr, 115, {25.39, 37.83, 0.0577, 5.41e3, 16.2, 47.5}, 22.29, 10.70, 0.2135, 0.0918),
      gev_entry(K::TransformerXr, 138, {29.58, 39.73, 0.2033, 1.92e3, 19.1, 54}, 25.88, 12.34, 0.2167, 0.0949),
      gev_entry(K::TransformerXr, 230, {44.37, 65.77, 0.1786, 4.03e3, 25, 84}, 37.79, 19.67, 0.2594, 0.0984),
  };
  for (double kv : {115.0, 138.0, 230.0})
    for (auto kind : {K::LineReactanceCommonBase, K::LineCapacity, K::LineXr}) entries.push_back(family_only(kind, kv));
  return Profile(std::move(entries));
}

void ValidationThresholds::check() const {
  for (double v : {median_rel, band_abs, range_factor, kl_max, decorrelation_max, family_rank_margin})
    if (!(std::isfinite(v) && v >= 0.0)) throw Error("validation thresholds must be finite and non-negative");
  if (range_factor < 1.0) throw Error("range_factor must be at least 1");
}

namespace {

Finding make_finding(const ReferenceEntry& e, CheckName check) {
  Finding f;
  f.kind = e.kind;
  f.class_kv = e.class_kv;
  f.check = check;
  return f;
}

bool is_degenerate(const ObservedParameter& obs) { return obs.values.size() < 2 || obs.summary.min == obs.summary.max; }

}  // namespace

ValidationReport validate(const ObservedGrid& observed, const Profile& profile, const ValidationThresholds& thresholds,
                          const FitOptions& fit_options) {
  thresholds.check();
  ValidationReport report;
  report.thresholds = thresholds;
  auto& out = report.findings;

  for (const auto& e : profile.entries()) {
    const auto it = observed.parameters.find({e.kind, e.class_kv});
    if (it == observed.parameters.end() || it->second.values.empty()) {
      auto f = make_finding(e, CheckName::NoData);
      f.skipped = true;
      f.detail = "no observed data for this class";
      out.push_back(std::move(f));
      continue;
    }
    const auto& obs = it->second;

    if (e.summary.median) {
      auto f = make_finding(e, CheckName::MedianCheck);
      f.observed = obs.summary.median;
      f.expected_lo = f.expected_hi = *e.summary.median;
      f.threshold_name = "median_rel";
      f.threshold = thresholds.median_rel;
      f.detail = "relative deviation " + detail::format_double(std::abs(obs.summary.median / *e.summary.median - 1.0));
      f.pass = std::abs(obs.summary.median / *e.summary.median - 1.0) <= thresholds.median_rel;
      out.push_back(std::move(f));
    }

    if (e.band) {
      auto f = make_finding(e, CheckName::BandCheck);
      f.observed = band_fraction(obs.values, e.band->lo, e.band->hi);
      f.expected_lo = f.expected_hi = e.band->fraction;
      f.threshold_name = "band_abs";
      f.threshold = thresholds.band_abs;
      f.detail = "fraction in [" + detail::format_double(e.band->lo) + ", " + detail::format_double(e.band->hi) + "]";
      f.pass = std::abs(f.observed - e.band->fraction) <= thresholds.band_abs;
      out.push_back(std::move(f));
    }

    if (e.summary.min && e.summary.max) {
      const double mid = 0.5 * (*e.summary.min + *e.summary.max);
      const double half = 0.5 * (*e.summary.max - *e.summary.min) * thresholds.range_factor;
      for (const auto& [which, value] : {std::pair{"min", obs.summary.min}, std::pair{"max", obs.summary.max}}) {
        auto f = make_finding(e, CheckName::RangeCheck);
        f.detail = which;
        f.observed = value;
        f.expected_lo = mid - half;
        f.expected_hi = mid + half;
        f.threshold_name = "range_factor";
        f.threshold = thresholds.range_factor;
        f.pass = value >= f.expected_lo && value <= f.expected_hi;
        out.push_back(std::move(f));
      }
    }

    if (e.fitted) {
      auto f = make_finding(e, CheckName::KlCheck);
      f.expected_lo = 0.0;
      f.expected_hi = thresholds.kl_max;
      f.threshold_name = "kl_max";
      f.threshold = thresholds.kl_max;
      if (obs.histogram.bins() == 0) {
        f.skipped = true;
        f.detail = "degenerate sample has no histogram";
      } else {
        f.observed = kl_divergence(obs.histogram, *e.fitted).d_kl;
        f.detail = "nats against " + std::string(family_name(e.fitted->family()));
        f.pass = f.observed <= thresholds.kl_max;
      }
      out.push_back(std::move(f));
    } else if (e.fitted_family) {
      auto f = make_finding(e, CheckName::FamilyRankCheck);
      f.expected_lo = 0.0;
      f.expected_hi = thresholds.family_rank_margin;
      f.threshold_name = "family_rank_margin";
      f.threshold = thresholds.family_rank_margin;
      if (is_degenerate(obs) || obs.values.size() < 5) {
        f.skipped = true;
        f.detail = "too few distinct values to rank families";
      } else {
        std::vector<Family> families{Family::Tls, Family::Gev, Family::Normal};
        if (obs.summary.min >= 0.0) families.push_back(Family::Exponential);
        const auto ranked = select_best(obs.values, families, fit_options);
        const auto ref = std::find_if(ranked.begin(), ranked.end(), [&](const RankedFit& r) {
          return r.fit.dist.family() == *e.fitted_family;
        });
        f.observed = ref->score.d_kl - ranked.front().score.d_kl;
        f.detail = "best family " + std::string(family_name(ranked.front().fit.dist.family())) + ", reference " +
                   std::string(family_name(*e.fitted_family)) + " ranked " +
                   std::to_string(ref - ranked.begin() + 1);
        f.pass = ref == ranked.begin() || f.observed <= thresholds.family_rank_margin;
      }
      out.push_back(std::move(f));
    }

    if (e.kind == ParameterKind::TransformerReactanceOwnBase) {
      auto f = make_finding(e, CheckName::DecorrelationCheck);
      f.expected_lo = -thresholds.decorrelation_max;
      f.expected_hi = thresholds.decorrelation_max;
      f.threshold_name = "decorrelation_max";
      f.threshold = thresholds.decorrelation_max;
      f.detail = "spearman(x own base, mva rating)";
      if (auto rho = observed.decorrelation.find(e.class_kv); rho != observed.decorrelation.end()) {
        f.observed = rho->second;
        f.pass = std::abs(rho->second) <= thresholds.decorrelation_max;
      } else {
        f.skipped = true;
        f.detail = "correlation undefined for this sample";
      }
      out.push_back(std::move(f));
    }
  }

  report.overall_pass =
      std::all_of(out.begin(), out.end(), [](const Finding& f) { return f.skipped || f.pass; });
  return report;
}

}  // namespace gridstats
