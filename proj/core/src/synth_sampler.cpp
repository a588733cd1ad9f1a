#include "gridstats/synth_sampler.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "gridstats/error.hpp"
#include "gridstats/per_unit.hpp"
#include "text_util.hpp"

namespace gridstats {

namespace {

std::string entry_name(ParameterKind kind, double class_kv) {
  return std::string(to_string(kind)) + " @ " + detail::format_double(class_kv) + " kV";
}

struct Bounds {
  double lo;
  double hi;
  bool lo_open;
  bool contains(double x) const noexcept { return (lo_open ? x > lo : x >= lo) && x <= hi; }
};

double draw_truncated(const DistSpec& dist, UniformStream& stream, const Bounds& bounds, std::size_t max_retries,
                      ParameterKind kind, double class_kv) {
  for (std::size_t attempt = 0; attempt < max_retries; ++attempt) {
    const double x = draw(dist, stream);
    if (bounds.contains(x)) return x;
  }
  throw Error("truncated draw for " + entry_name(kind, class_kv) + " rejected " + std::to_string(max_retries) +
              " times; the profile is inconsistent");
}

const DistSpec& fitted_or_throw(const ReferenceEntry& e) {
  if (!e.fitted) throw Error("profile entry " + entry_name(e.kind, e.class_kv) + " has no fitted parameters");
  return *e.fitted;
}

double max_or_throw(const ReferenceEntry& e) {
  if (!e.summary.max) throw Error("profile entry " + entry_name(e.kind, e.class_kv) + " has no maximum");
  return *e.summary.max;
}

}  // namespace

CalibratedTls calibrate_reactance_tls(const ReferenceEntry& target, double nu, std::optional<Interval> truncation) {
  const auto name = entry_name(target.kind, target.class_kv);
  if (!target.summary.median || !target.band) throw Error("calibration target " + name + " needs a median and a band");
  if (!(nu > 1.0)) throw Error("calibration needs nu > 1");
  const double mu = *target.summary.median;
  const auto band = *target.band;
  if (!(band.lo < mu && mu < band.hi))
    throw Error("calibration target " + name + ": median must lie strictly inside the band");
  if (truncation && !(truncation->lo < mu && mu < truncation->hi))
    throw Error("calibration target " + name + ": median must lie inside the truncation interval");

  auto mass = [&](double sigma) {
    const auto dist = DistSpec::tls(mu, sigma, nu);
    const double inside = cdf(dist, band.hi) - cdf(dist, band.lo);
    if (!truncation) return inside;
    const double lo = std::max(band.lo, truncation->lo);
    const double hi = std::min(band.hi, truncation->hi);
    const double kept = cdf(dist, truncation->hi) - cdf(dist, truncation->lo);
    return (cdf(dist, hi) - cdf(dist, lo)) / kept;
  };

  // Band mass falls monotonically from 1 (sigma -> 0) as sigma grows.
  const double width = band.hi - band.lo;
  double log_lo = std::log(width * 1e-9);
  double log_hi = std::log(width * 1e9);
  const double supremum = mass(std::exp(log_lo));
  const double infimum = mass(std::exp(log_hi));
  if (!(band.fraction < supremum) || band.fraction >= 1.0)
    throw Error("calibration target " + name + ": band fraction " + detail::format_double(band.fraction) +
                " is not attainable, supremum is " + detail::format_double(std::min(supremum, 1.0)) +
                " (not attained)");
  if (!(band.fraction > infimum))
    throw Error("calibration target " + name + ": band fraction " + detail::format_double(band.fraction) +
                " is below the attainable infimum " + detail::format_double(infimum));

  double sigma = std::exp(0.5 * (log_lo + log_hi));
  double achieved = mass(sigma);
  for (int iter = 0; iter < 200 && std::abs(achieved - band.fraction) > 1e-13; ++iter) {
    if (achieved > band.fraction)
      log_lo = std::log(sigma);
    else
      log_hi = std::log(sigma);
    sigma = std::exp(0.5 * (log_lo + log_hi));
    achieved = mass(sigma);
  }
  return CalibratedTls{DistSpec::tls(mu, sigma, nu), std::abs(achieved - band.fraction)};
}

std::vector<SyntheticBranchParams> generate_transformers(double class_kv, std::size_t n, std::uint64_t seed,
                                                         const Profile& profile, double system_mva_base,
                                                         const SamplerOptions& options) {
  if (n == 0) throw Error("generate_transformers: n must be at least 1");
  if (!(system_mva_base > 0.0)) throw Error("generate_transformers: system MVA base must be positive");
  using K = ParameterKind;
  const auto& x_entry = profile.at(K::TransformerReactanceOwnBase, class_kv);
  const auto& mva_entry = profile.at(K::TransformerMvaRating, class_kv);
  const auto& xr_entry = profile.at(K::TransformerXr, class_kv);

  const auto& mva_dist = fitted_or_throw(mva_entry);
  const auto& xr_dist = fitted_or_throw(xr_entry);
  if (!mva_entry.summary.min || !mva_entry.summary.max)
    throw Error("profile entry " + entry_name(mva_entry.kind, class_kv) + " needs a full range");
  const Bounds mva_bounds{*mva_entry.summary.min, *mva_entry.summary.max, false};
  const Bounds x_bounds{0.0, max_or_throw(x_entry), true};
  const Bounds xr_bounds{0.0, max_or_throw(xr_entry), true};
  const auto x_dist = calibrate_reactance_tls(x_entry, options.tls_nu, Interval{x_bounds.lo, x_bounds.hi}).dist;

  auto mva_stream = UniformStream::substream(seed, 0);
  auto x_stream = UniformStream::substream(seed, 1);
  auto xr_stream = UniformStream::substream(seed, 2);

  std::vector<SyntheticBranchParams> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double mva = draw_truncated(mva_dist, mva_stream, mva_bounds, options.max_retries, mva_entry.kind, class_kv);
    const double x_own = draw_truncated(x_dist, x_stream, x_bounds, options.max_retries, x_entry.kind, class_kv);
    const double xr_draw = draw_truncated(xr_dist, xr_stream, xr_bounds, options.max_retries, xr_entry.kind, class_kv);
    const double r_own = x_own / xr_draw;
    const double xr = x_own / r_own;
    SyntheticBranchParams p{
        xr < options.autotransformer_xr_threshold ? BranchKind::AutotransformerSuspect : BranchKind::Transformer,
        class_kv,
        mva,
        x_own,
        r_own,
        to_common_base(x_own, system_mva_base, mva),
        to_common_base(r_own, system_mva_base, mva),
        xr};
    out.push_back(p);
  }
  return out;
}

std::vector<SyntheticBranchParams> generate_lines(double class_kv, std::size_t n, std::uint64_t seed,
                                                  const Profile& profile, const SamplerOptions& options) {
  if (n == 0) throw Error("generate_lines: n must be at least 1");
  using K = ParameterKind;
  const auto& x_entry = profile.at(K::LineReactanceCommonBase, class_kv);
  const auto& cap_entry = profile.at(K::LineCapacity, class_kv);
  const auto& xr_entry = profile.at(K::LineXr, class_kv);
  const auto& x_dist = fitted_or_throw(x_entry);
  const auto& cap_dist = fitted_or_throw(cap_entry);
  const auto& xr_dist = fitted_or_throw(xr_entry);

  constexpr double kInf = std::numeric_limits<double>::infinity();
  const Bounds positive{0.0, kInf, true};
  auto x_stream = UniformStream::substream(seed, 0);
  auto cap_stream = UniformStream::substream(seed, 1);
  auto xr_stream = UniformStream::substream(seed, 2);

  std::vector<SyntheticBranchParams> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = draw_truncated(x_dist, x_stream, positive, options.max_retries, x_entry.kind, class_kv);
    const double cap = draw_truncated(cap_dist, cap_stream, positive, options.max_retries, cap_entry.kind, class_kv);
    const double xr_draw = draw_truncated(xr_dist, xr_stream, positive, options.max_retries, xr_entry.kind, class_kv);
    const double r = x / xr_draw;
    out.push_back({BranchKind::TransmissionLine, class_kv, cap, std::nullopt, std::nullopt, x, r, x / r});
  }
  return out;
}

double default_line_reactance_mean() noexcept { return 0.02 / std::numbers::ln10; }

Profile with_default_line_reactance(const Profile& profile) {
  auto entries = profile.entries();
  for (auto& e : entries)
    if (e.kind == ParameterKind::LineReactanceCommonBase && !e.fitted)
      e.fitted = DistSpec::exponential(default_line_reactance_mean());
  return Profile(std::move(entries));
}

std::string synthetic_params_to_csv(std::span<const SyntheticBranchParams> params) {
  using detail::format_double;
  std::string out(kSyntheticCsvHeader);
  out += '\n';
  for (const auto& p : params) {
    out += std::string(to_string(p.kind)) + ',' + format_double(p.class_kv) + ',' + format_double(p.mva_rating) + ',' +
           (p.x_pu_own ? format_double(*p.x_pu_own) : "") + ',' + (p.r_pu_own ? format_double(*p.r_pu_own) : "") +
           ',' + format_double(p.x_pu_common) + ',' + format_double(p.r_pu_common) + ',' + format_double(p.xr) + '\n';
  }
  return out;
}

std::vector<BranchRecord> to_branch_records(std::span<const SyntheticBranchParams> params, double system_mva_base,
                                            double secondary_kv) {
  std::vector<BranchRecord> out;
  out.reserve(params.size());
  std::int64_t next_bus = 1;
  std::size_t transformers = 0;
  std::size_t lines = 0;
  for (const auto& p : params) {
    BranchRecord r;
    const bool transformer = is_transformer(p.kind);
    r.id = transformer ? "T" + std::to_string(++transformers) : "L" + std::to_string(++lines);
    r.from_bus = next_bus++;
    r.to_bus = next_bus++;
    r.from_kv = p.class_kv;
    r.to_kv = transformer ? secondary_kv : p.class_kv;
    r.r_pu = p.r_pu_common;
    r.x_pu = p.x_pu_common;
    r.mva_rating = p.mva_rating;
    r.tap_ratio = transformer ? 1.0 : 0.0;
    r.system_mva_base = system_mva_base;
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace gridstats
