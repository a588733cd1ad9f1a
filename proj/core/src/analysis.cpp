#include "gridstats/analysis.hpp"

#include "gridstats/error.hpp"
#include "gridstats/per_unit.hpp"

namespace gridstats {

GridSamples collect_samples(std::span<const BranchRecord> records, const VoltageClassTable& classes,
                            const IngestOptions& options) {
  GridSamples samples;
  samples.input_count = records.size();
  const auto outcome = filter_valid(records, options.rating_bounds);
  samples.kept_count = outcome.kept.size();
  for (const auto& rejection : outcome.rejected) ++samples.rejected[rejection.reason];

  using K = ParameterKind;
  for (const auto& r : outcome.kept) {
    const auto kind = classify_branch(r, options.autotransformer_xr_threshold, options.kv_tolerance);
    const auto cls = assign_voltage_class(r, kind, classes);
    if (!cls) {
      ++samples.unclassed;
      continue;
    }
    const double kv = cls->nominal_kv;
    const double xr = xr_ratio(r.r_pu, r.x_pu);
    if (is_transformer(kind)) {
      if (kind == BranchKind::AutotransformerSuspect) ++samples.autotransformer_suspects;
      const double x_own = to_own_base(r.x_pu, r.system_mva_base, r.mva_rating);
      samples.values[{K::TransformerReactanceOwnBase, kv}].push_back(x_own);
      samples.values[{K::TransformerMvaRating, kv}].push_back(r.mva_rating);
      samples.values[{K::TransformerXr, kv}].push_back(xr);
      auto& pairs = samples.transformers[kv];
      pairs.x_own.push_back(x_own);
      pairs.x_common.push_back(r.x_pu);
      pairs.mva.push_back(r.mva_rating);
    } else {
      samples.values[{K::LineReactanceCommonBase, kv}].push_back(r.x_pu);
      samples.values[{K::LineCapacity, kv}].push_back(r.mva_rating);
      samples.values[{K::LineXr, kv}].push_back(xr);
    }
  }
  return samples;
}

ObservedGrid observe(const GridSamples& samples, const Binning& binning) {
  ObservedGrid grid;
  for (const auto& [key, values] : samples.values) {
    if (values.empty()) continue;
    ObservedParameter obs;
    obs.values = values;
    obs.summary = summarize(values);
    if (obs.summary.max > obs.summary.min) obs.histogram = histogram(values, binning);
    grid.parameters.emplace(key, std::move(obs));
  }
  for (const auto& [kv, pairs] : samples.transformers) {
    try {
      grid.decorrelation[kv] = spearman(pairs.x_own, pairs.mva);
    } catch (const Error&) {
      // constant or single-element series: no correlation to report
    }
  }
  return grid;
}

}  // namespace gridstats
