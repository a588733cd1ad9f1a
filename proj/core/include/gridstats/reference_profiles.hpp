#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gridstats/distributions.hpp"
#include "gridstats/empirical_stats.hpp"
#include "gridstats/fitting.hpp"

namespace gridstats {

enum class ParameterKind {
  TransformerReactanceOwnBase,
  TransformerMvaRating,
  TransformerXr,
  LineReactanceCommonBase,
  LineCapacity,
  LineXr,
};

inline constexpr ParameterKind kAllParameterKinds[] = {
    ParameterKind::TransformerReactanceOwnBase, ParameterKind::TransformerMvaRating,
    ParameterKind::TransformerXr,               ParameterKind::LineReactanceCommonBase,
    ParameterKind::LineCapacity,                ParameterKind::LineXr,
};

std::string_view to_string(ParameterKind kind) noexcept;
ParameterKind parse_parameter_kind(std::string_view name);
bool is_transformer_kind(ParameterKind kind) noexcept;

/// Family chosen for each parameter kind: TLS for transformer reactance, GEV
/// for transformer MVA and X/R, Exponential for line reactance, Normal for
/// line capacity and X/R.
Family reference_family(ParameterKind kind) noexcept;

/// Summary statistics as published; any field may be absent.
struct ReferenceSummary {
  std::optional<double> median;
  std::optional<double> mean;
  std::optional<double> min;
  std::optional<double> max;
  std::optional<double> q10;
  std::optional<double> q90;

  bool empty() const noexcept { return !median && !mean && !min && !max && !q10 && !q90; }
  bool operator==(const ReferenceSummary&) const = default;
};

struct ReferenceBand {
  double lo;
  double hi;
  double fraction;
  bool operator==(const ReferenceBand&) const = default;
};

struct ReferenceEntry {
  ParameterKind kind;
  double class_kv;
  ReferenceSummary summary;
  std::optional<ReferenceBand> band;
  /// Family of the fitted distribution; parameters may be unpublished.
  std::optional<Family> fitted_family;
  std::optional<DistSpec> fitted;
  std::optional<double> reference_d_kl;

  /// Throws when the entry carries no information or its family disagrees
  /// with reference_family(kind).
  void check() const;

  bool operator==(const ReferenceEntry&) const = default;
};

/// Immutable set of reference entries, unique per (kind, class_kv).
class Profile {
 public:
  explicit Profile(std::vector<ReferenceEntry> entries);

  const std::vector<ReferenceEntry>& entries() const noexcept { return entries_; }
  const ReferenceEntry* find(ParameterKind kind, double class_kv) const noexcept;
  /// Throws when absent.
  const ReferenceEntry& at(ParameterKind kind, double class_kv) const;

  bool operator==(const Profile&) const = default;

 private:
  std::vector<ReferenceEntry> entries_;
};

/// Published transformer statistics for 115, 138 and 230 kV plus family-only
/// entries for the line parameters.
Profile builtin_profile();

struct ValidationThresholds {
  double median_rel = 0.25;          // r_med
  double band_abs = 0.10;            // delta_band
  double range_factor = 1.5;         // gamma
  double kl_max = 0.3;               // kappa, nats
  double decorrelation_max = 0.15;   // rho
  double family_rank_margin = 0.05;  // nats

  /// Throws on negative values or range_factor < 1.
  void check() const;
  bool operator==(const ValidationThresholds&) const = default;
};

/// Observed sample of one parameter for one voltage class.
struct ObservedParameter {
  std::vector<double> values;
  SummaryStats summary;
  Histogram histogram;
};

using ProfileKey = std::pair<ParameterKind, double>;

struct ObservedGrid {
  std::map<ProfileKey, ObservedParameter> parameters;
  /// spearman(X own base, MVA rating) per transformer voltage class.
  std::map<double, double> decorrelation;
};

enum class CheckName { MedianCheck, BandCheck, RangeCheck, KlCheck, DecorrelationCheck, FamilyRankCheck, NoData };

std::string_view to_string(CheckName check) noexcept;

struct Finding {
  ParameterKind kind;
  double class_kv;
  CheckName check;
  std::string detail;
  double observed = 0.0;
  /// Scalar expectations have expected_lo == expected_hi.
  double expected_lo = 0.0;
  double expected_hi = 0.0;
  std::string threshold_name;
  double threshold = 0.0;
  bool pass = true;
  bool skipped = false;
};

struct ValidationReport {
  std::vector<Finding> findings;
  bool overall_pass = true;
  ValidationThresholds thresholds;
};

/// Compares observed statistics against every profile entry:
///  - MedianCheck  |observed / reference - 1| <= median_rel
///  - BandCheck    |observed - expected fraction| <= band_abs
///  - RangeCheck   observed min and max inside the reference range widened
///                 about its midpoint by range_factor
///  - KlCheck      D_KL(observed histogram || fitted) <= kl_max
///  - FamilyRankCheck for entries with a family but no parameters: the
///                 reference family ranks first or within family_rank_margin
///  - DecorrelationCheck |spearman(X own, MVA)| <= decorrelation_max
/// Entries without observed data yield a skipped NoData finding.
ValidationReport validate(const ObservedGrid& observed, const Profile& profile,
                          const ValidationThresholds& thresholds = {},
                          const FitOptions& fit_options = {});

}  // namespace gridstats
