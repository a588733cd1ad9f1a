#include "gridstats/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "gridstats/error.hpp"
#include "gridstats/simplex.hpp"

namespace gridstats {

namespace {

constexpr double kEulerGamma = 0.5772156649015329;

void check_sample(Family family, std::span<const double> values) {
  if (values.empty()) throw Error("fit_mle: empty sample");
  for (double v : values)
    if (!std::isfinite(v)) throw Error("fit_mle: sample contains a non-finite value");
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  if (*lo == *hi) throw Error("fit_mle: degenerate sample (all values equal)");
  if (family == Family::Exponential && *lo < 0.0) throw Error("fit_mle: exponential fit needs non-negative values");
  if ((family == Family::Tls || family == Family::Gev) && values.size() < 5)
    throw Error("fit_mle: " + std::string(family_name(family)) + " fit needs at least 5 values");
}

double mean_of(std::span<const double> values) {
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double population_sd(std::span<const double> values, double mean) {
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(values.size()));
}

double quantile_of(std::vector<double> sorted, double p) {
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

double clamp_shape(double zeta) {
  if (std::abs(zeta) >= kMinGevShape) return zeta;
  return zeta < 0.0 ? -kMinGevShape : kMinGevShape;
}

// Nelder-Mead from `start`, then one restart from the optimum to guard
// against a prematurely collapsed simplex.
SimplexResult optimize(const std::function<double(std::span<const double>)>& objective, std::vector<double> start,
                       const std::vector<double>& step, const FitOptions& options) {
  SimplexOptions so{options.max_iterations, options.log_likelihood_tolerance};
  auto first = minimize_simplex(objective, std::move(start), step, so);
  if (!first.converged || first.iterations >= options.max_iterations) return first;
  so.max_iterations = options.max_iterations - first.iterations;
  auto second = minimize_simplex(objective, first.x, step, so);
  second.iterations += first.iterations;
  if (second.value > first.value) {
    first.iterations = second.iterations;
    return first;
  }
  return second;
}

FitResult fit_tls(std::span<const double> values, const FitOptions& options) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double median = quantile_of(sorted, 0.5);
  double sigma0 = (quantile_of(sorted, 0.75) - quantile_of(sorted, 0.25)) / 1.349;
  if (!(sigma0 > 0.0)) sigma0 = population_sd(values, mean_of(values));
  const double nu0 = 5.0;

  auto objective = [&](std::span<const double> theta) {
    const double sigma = std::exp(theta[1]);
    const double nu = std::exp(theta[2]);
    if (!(sigma > 0.0) || !std::isfinite(sigma) || !(nu > 0.0) || !std::isfinite(nu))
      return std::numeric_limits<double>::infinity();
    return -log_likelihood(DistSpec::tls(theta[0], sigma, nu), values);
  };
  const std::vector<double> step{0.25 * sigma0, 0.25, 0.5};
  auto r = optimize(objective, {median, std::log(sigma0), std::log(nu0)}, step, options);
  const auto dist = DistSpec::tls(r.x[0], std::exp(r.x[1]), std::exp(r.x[2]));
  return FitResult{dist, -r.value, values.size(), r.converged, r.iterations,
                   r.converged ? "" : "iteration limit reached before the simplex converged"};
}

FitResult fit_gev(std::span<const double> values, const FitOptions& options) {
  const double mean = mean_of(values);
  const double sigma0 = population_sd(values, mean) * std::sqrt(6.0) / std::numbers::pi;
  const double mu0 = mean - kEulerGamma * sigma0;

  auto objective = [&](std::span<const double> theta) {
    const double sigma = std::exp(theta[1]);
    if (!(sigma > 0.0) || !std::isfinite(sigma) || !std::isfinite(theta[2]))
      return std::numeric_limits<double>::infinity();
    return -log_likelihood(DistSpec::gev(theta[0], sigma, clamp_shape(theta[2])), values);
  };

  // The moment start uses zeta = 0.1; other shapes are tried only when the
  // sample falls outside that start's support.
  std::vector<double> start;
  for (double zeta0 : {0.1, -0.1, 0.3, -0.3, 0.6, 1.0}) {
    std::vector<double> candidate{mu0, std::log(sigma0), zeta0};
    if (std::isfinite(objective(candidate))) {
      start = std::move(candidate);
      break;
    }
  }
  if (start.empty()) {
    return FitResult{DistSpec::gev(mu0, sigma0, 0.1), std::numeric_limits<double>::lowest(), values.size(), false, 0,
                     "no starting point has the whole sample inside the GEV support"};
  }

  const std::vector<double> step{0.25 * sigma0, 0.25, 0.1};
  auto r = optimize(objective, start, step, options);
  const auto dist = DistSpec::gev(r.x[0], std::exp(r.x[1]), clamp_shape(r.x[2]));
  const bool finite = std::isfinite(r.value);
  return FitResult{dist,
                   finite ? -r.value : std::numeric_limits<double>::lowest(),
                   values.size(),
                   r.converged && finite,
                   r.iterations,
                   r.converged ? "" : "iteration limit reached before the simplex converged"};
}

}  // namespace

double log_likelihood(const DistSpec& dist, std::span<const double> values) {
  double total = 0.0;
  for (double v : values) {
    const double lp = log_pdf(dist, v);
    if (lp == -std::numeric_limits<double>::infinity()) return lp;
    total += lp;
  }
  return total;
}

FitResult fit_mle(Family family, std::span<const double> values, const FitOptions& options) {
  check_sample(family, values);
  switch (family) {
    case Family::Exponential: {
      const auto dist = DistSpec::exponential(mean_of(values));
      return FitResult{dist, log_likelihood(dist, values), values.size(), true, 0, ""};
    }
    case Family::Normal: {
      const double mean = mean_of(values);
      const auto dist = DistSpec::normal(mean, population_sd(values, mean));
      return FitResult{dist, log_likelihood(dist, values), values.size(), true, 0, ""};
    }
    case Family::Tls: return fit_tls(values, options);
    case Family::Gev: return fit_gev(values, options);
  }
  throw Error("fit_mle: unknown family");
}

KlScore kl_divergence(std::span<const double> p_mass, std::span<const double> q_mass) {
  if (p_mass.size() != q_mass.size()) throw Error("kl_divergence: mass vectors differ in length");
  KlScore score;
  double d = 0.0;
  for (std::size_t i = 0; i < p_mass.size(); ++i) {
    if (p_mass[i] <= 0.0) {
      ++score.empty_bins_skipped;
      continue;
    }
    ++score.bins_used;
    const double q = std::max(q_mass[i], kKlMassFloor);
    d += p_mass[i] * std::log(p_mass[i] / q);
  }
  if (d < -1e-12) throw Error("kl_divergence: negative divergence, masses are not normalized");
  score.d_kl = std::max(d, 0.0);
  return score;
}

KlScore kl_divergence(const Histogram& p_hist, const DistSpec& q) {
  const double n = static_cast<double>(p_hist.total());
  std::vector<double> p(p_hist.bins(), 0.0);
  if (n > 0.0)
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = static_cast<double>(p_hist.counts[i]) / n;
  return kl_divergence(p, bin_masses(q, p_hist.edges));
}

std::vector<RankedFit> select_best(std::span<const double> values, std::span<const Family> families,
                                   const FitOptions& options) {
  if (families.empty()) throw Error("select_best: no families given");
  std::vector<RankedFit> ranked;
  ranked.reserve(families.size());
  const auto hist = histogram(values, options.binning);
  const bool negative = std::any_of(values.begin(), values.end(), [](double v) { return v < 0.0; });
  for (Family f : families) {
    if (f == Family::Exponential && negative) continue;
    auto fit = fit_mle(f, values, options);
    auto score = kl_divergence(hist, fit.dist);
    ranked.push_back({std::move(fit), score});
  }
  if (ranked.empty()) throw Error("select_best: no requested family can describe negative values");
  std::stable_sort(ranked.begin(), ranked.end(), [](const RankedFit& a, const RankedFit& b) {
    if (a.fit.converged != b.fit.converged) return a.fit.converged;
    if (a.score.d_kl != b.score.d_kl) return a.score.d_kl < b.score.d_kl;
    const auto pa = parameter_count(a.fit.dist.family());
    const auto pb = parameter_count(b.fit.dist.family());
    if (pa != pb) return pa < pb;
    return family_name(a.fit.dist.family()) < family_name(b.fit.dist.family());
  });
  return ranked;
}

}  // namespace gridstats
