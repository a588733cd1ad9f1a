#pragma once

#include <map>
#include <span>
#include <vector>

#include "gridstats/empirical_stats.hpp"
#include "gridstats/grid_ingest.hpp"
#include "gridstats/reference_profiles.hpp"

namespace gridstats {

struct IngestOptions {
  RatingBounds rating_bounds;
  double autotransformer_xr_threshold = 4.0;
  double kv_tolerance = 0.02;
};

/// Transformer samples of one voltage class, index-aligned.
struct TransformerPairs {
  std::vector<double> x_own;
  std::vector<double> x_common;
  std::vector<double> mva;
};

/// Per-class parameter samples extracted from a filtered grid case.
struct GridSamples {
  std::map<ProfileKey, std::vector<double>> values;
  std::map<double, TransformerPairs> transformers;
  std::size_t input_count = 0;
  std::size_t kept_count = 0;
  std::map<RejectReason, std::size_t> rejected;
  std::size_t unclassed = 0;
  std::size_t autotransformer_suspects = 0;
};

/// Filters, classifies and groups branches by voltage class. Transformer
/// reactance is referred to the unit's own MVA rating.
GridSamples collect_samples(std::span<const BranchRecord> records, const VoltageClassTable& classes,
                            const IngestOptions& options = {});

/// Summaries, histograms and decorrelation coefficients for every non-empty
/// sample. Constant samples get a summary but no histogram bins.
ObservedGrid observe(const GridSamples& samples, const Binning& binning = FreedmanDiaconis{});

}  // namespace gridstats
