#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace gridstats {

/// Median, mean, range and 80% range ([q10, q90]) of a sample.
struct SummaryStats {
  std::size_t n = 0;
  double median = 0.0;
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  double q10 = 0.0;
  double q90 = 0.0;
};

/// Type-7 quantile (linear interpolation at rank h = (n - 1)p + 1) of an
/// ascending-sorted sample.
double sorted_quantile(std::span<const double> sorted, double p);

SummaryStats summarize(std::span<const double> values);

/// Fraction of values in the closed interval [lo, hi].
double band_fraction(std::span<const double> values, double lo, double hi);

struct FixedCount {
  std::size_t bins;
};

/// Bin width 2 * IQR * n^(-1/3), bin count clamped to [min_bins, max_bins].
struct FreedmanDiaconis {
  std::size_t min_bins = 10;
  std::size_t max_bins = 200;
};

using Binning = std::variant<FixedCount, FreedmanDiaconis>;

/// Equal-width density histogram over [min, max] of a sample.
struct Histogram {
  std::vector<double> edges;
  std::vector<double> densities;
  std::vector<std::size_t> counts;

  std::size_t bins() const noexcept { return counts.size(); }
  std::size_t total() const noexcept;
  double bin_width() const noexcept { return edges.size() < 2 ? 0.0 : edges[1] - edges[0]; }
};

/// Throws when every value is identical: a zero-width sample is degenerate
/// and has no density.
Histogram histogram(std::span<const double> values, const Binning& binning = FreedmanDiaconis{});

/// Number of bins the given binning selects for this sample.
std::size_t bin_count(std::span<const double> values, const Binning& binning);

/// CSV with columns bin_lo,bin_hi,count,density.
std::string histogram_to_csv(const Histogram& hist);

/// Product-moment correlation.
double pearson(std::span<const double> xs, std::span<const double> ys);

/// Rank correlation on average ranks (ties share the mean rank).
double spearman(std::span<const double> xs, std::span<const double> ys);

/// 1-based average ranks.
std::vector<double> average_ranks(std::span<const double> values);

}  // namespace gridstats
