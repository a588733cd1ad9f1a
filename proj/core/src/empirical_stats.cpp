#include "gridstats/empirical_stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "gridstats/error.hpp"
#include "text_util.hpp"

namespace gridstats {

namespace {

void require_finite(std::span<const double> values, const char* what) {
  if (values.empty()) throw Error(std::string(what) + ": empty sample");
  for (double v : values)
    if (!std::isfinite(v)) throw Error(std::string(what) + ": sample contains a non-finite value");
}

std::vector<double> sorted_copy(std::span<const double> values) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  return sorted;
}

// Shifted by the first value so constant samples come out exact.
double mean_of(std::span<const double> values) {
  const double shift = values.front();
  double sum = 0.0;
  for (double v : values) sum += v - shift;
  return shift + sum / static_cast<double>(values.size());
}

}  // namespace

double sorted_quantile(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw Error("quantile of an empty sample");
  if (!(p >= 0.0 && p <= 1.0)) throw Error("quantile probability must lie in [0, 1]");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

SummaryStats summarize(std::span<const double> values) {
  require_finite(values, "summarize");
  const auto sorted = sorted_copy(values);
  SummaryStats s;
  s.n = sorted.size();
  s.median = sorted_quantile(sorted, 0.5);
  s.mean = mean_of(sorted);
  s.min = sorted.front();
  s.max = sorted.back();
  s.q10 = sorted_quantile(sorted, 0.1);
  s.q90 = sorted_quantile(sorted, 0.9);
  return s;
}

double band_fraction(std::span<const double> values, double lo, double hi) {
  if (values.empty()) throw Error("band_fraction: empty sample");
  if (!(lo < hi)) throw Error("band_fraction: need lo < hi");
  const auto inside = std::count_if(values.begin(), values.end(), [&](double v) { return v >= lo && v <= hi; });
  return static_cast<double>(inside) / static_cast<double>(values.size());
}

std::size_t Histogram::total() const noexcept { return std::accumulate(counts.begin(), counts.end(), std::size_t{0}); }

std::size_t bin_count(std::span<const double> values, const Binning& binning) {
  if (const auto* fixed = std::get_if<FixedCount>(&binning)) {
    if (fixed->bins < 2) throw Error("histogram: FixedCount needs at least 2 bins");
    return fixed->bins;
  }
  const auto& fd = std::get<FreedmanDiaconis>(binning);
  if (fd.min_bins < 1 || fd.max_bins < fd.min_bins) throw Error("histogram: invalid Freedman-Diaconis clamp");
  const auto sorted = sorted_copy(values);
  const double range = sorted.back() - sorted.front();
  const double iqr = sorted_quantile(sorted, 0.75) - sorted_quantile(sorted, 0.25);
  const double width = 2.0 * iqr / std::cbrt(static_cast<double>(sorted.size()));
  if (!(width > 0.0)) return fd.max_bins;
  const double bins = std::ceil(range / width);
  return static_cast<std::size_t>(std::clamp(bins, static_cast<double>(fd.min_bins), static_cast<double>(fd.max_bins)));
}

Histogram histogram(std::span<const double> values, const Binning& binning) {
  require_finite(values, "histogram");
  const auto [min_it, max_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *min_it;
  const double hi = *max_it;
  if (!(hi > lo)) throw Error("histogram: all values are identical; treat the sample as degenerate");

  const std::size_t bins = bin_count(values, binning);
  const double width = (hi - lo) / static_cast<double>(bins);
  Histogram h;
  h.edges.resize(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i) h.edges[i] = lo + width * static_cast<double>(i);
  h.edges.back() = hi;
  h.counts.assign(bins, 0);
  for (double v : values) {
    auto idx = static_cast<std::size_t>((v - lo) / width);
    idx = std::min(idx, bins - 1);
    // Guard the rounding at interior edges so a value never lands right of its edge.
    while (idx > 0 && v < h.edges[idx]) --idx;
    while (idx + 1 < bins && v >= h.edges[idx + 1]) ++idx;
    ++h.counts[idx];
  }
  const double n = static_cast<double>(values.size());
  h.densities.resize(bins);
  for (std::size_t i = 0; i < bins; ++i)
    h.densities[i] = static_cast<double>(h.counts[i]) / (n * (h.edges[i + 1] - h.edges[i]));
  return h;
}

std::string histogram_to_csv(const Histogram& hist) {
  std::string out = "bin_lo,bin_hi,count,density\n";
  for (std::size_t i = 0; i < hist.bins(); ++i) {
    out += detail::format_double(hist.edges[i]) + ',' + detail::format_double(hist.edges[i + 1]) + ',' +
           std::to_string(hist.counts[i]) + ',' + detail::format_double(hist.densities[i]) + '\n';
  }
  return out;
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw Error("correlation: series lengths differ");
  if (xs.size() < 2) throw Error("correlation: need at least two pairs");
  require_finite(xs, "correlation");
  require_finite(ys, "correlation");
  const double mx = mean_of(xs);
  const double my = mean_of(ys);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw Error("correlation: constant series");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<double> average_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

double spearman(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw Error("correlation: series lengths differ");
  require_finite(xs, "correlation");
  require_finite(ys, "correlation");
  const auto rx = average_ranks(xs);
  const auto ry = average_ranks(ys);
  return pearson(rx, ry);
}

}  // namespace gridstats
