#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gridstats/distributions.hpp"
#include "gridstats/grid_ingest.hpp"
#include "gridstats/reference_profiles.hpp"

namespace gridstats {

/// Electrical parameters of one synthetic branch. Transformers carry own-base
/// impedances and their common-base equivalents; lines only common base.
struct SyntheticBranchParams {
  BranchKind kind;
  double class_kv;
  double mva_rating;
  std::optional<double> x_pu_own;
  std::optional<double> r_pu_own;
  double x_pu_common;
  double r_pu_common;
  double xr;
};

struct CalibratedTls {
  DistSpec dist;
  double residual;
};

struct Interval {
  double lo;
  double hi;
};

/// TLS with mu at the reference median and sigma chosen by bisection so the
/// mass of the reference band equals the reference fraction. With a
/// truncation interval the band mass is taken conditional on it.
/// Throws when the fraction is not attainable for any sigma.
CalibratedTls calibrate_reactance_tls(const ReferenceEntry& target, double nu = 3.0,
                                      std::optional<Interval> truncation = std::nullopt);

struct SamplerOptions {
  double tls_nu = 3.0;
  std::size_t max_retries = 1000;
  double autotransformer_xr_threshold = 4.0;
};

/// Independent draws of MVA rating (GEV, truncated to the reference range),
/// own-base reactance (calibrated TLS, truncated to (0, max]) and X/R (GEV,
/// truncated to (0, max]). Resistance follows from X/R and the common-base
/// reactance from the MVA rating and system base.
std::vector<SyntheticBranchParams> generate_transformers(double class_kv, std::size_t n, std::uint64_t seed,
                                                         const Profile& profile, double system_mva_base,
                                                         const SamplerOptions& options = {});

/// Line reactance ~ Exponential, capacity and X/R ~ Normal truncated to > 0.
/// All three line entries for the class must carry parameters.
std::vector<SyntheticBranchParams> generate_lines(double class_kv, std::size_t n, std::uint64_t seed,
                                                  const Profile& profile, const SamplerOptions& options = {});

/// Mean of the Exponential that puts 90% of line reactance below 0.02 p.u.:
/// 0.02 / ln 10.
double default_line_reactance_mean() noexcept;

/// Copy of the profile with parameters filled into line-reactance entries that
/// carry only a family.
Profile with_default_line_reactance(const Profile& profile);

inline constexpr std::string_view kSyntheticCsvHeader =
    "kind,class_kv,mva_rating,x_pu_own,r_pu_own,x_pu_common,r_pu_common,xr";

std::string synthetic_params_to_csv(std::span<const SyntheticBranchParams> params);

/// Lays the parameters out as independent branches: each transformer between
/// a class_kv bus and a secondary_kv bus with unit tap, each line between two
/// class_kv buses. Bus numbers are sequential from 1.
std::vector<BranchRecord> to_branch_records(std::span<const SyntheticBranchParams> params,
                                            double system_mva_base, double secondary_kv = 13.8);

}  // namespace gridstats
