#pragma once

#include <nlohmann/json.hpp>

#include "gridstats/distributions.hpp"
#include "gridstats/empirical_stats.hpp"
#include "gridstats/fitting.hpp"
#include "gridstats/reference_profiles.hpp"

namespace gridstats {

// DistSpec: {"family": "gev", "params": {"mu": .., "sigma": .., "zeta": ..}}
nlohmann::json to_json(const DistSpec& dist);
DistSpec dist_from_json(const nlohmann::json& j);

nlohmann::json to_json(const SummaryStats& stats);
nlohmann::json to_json(const FitResult& fit);
nlohmann::json to_json(const KlScore& score);

nlohmann::json to_json(const ReferenceEntry& entry);
ReferenceEntry entry_from_json(const nlohmann::json& j);

/// Profile file: array of reference entries.
nlohmann::json to_json(const Profile& profile);
Profile profile_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ValidationThresholds& thresholds);
/// Missing keys keep their defaults.
ValidationThresholds thresholds_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ValidationReport& report);

}  // namespace gridstats
