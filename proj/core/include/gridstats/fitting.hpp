#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "gridstats/distributions.hpp"
#include "gridstats/empirical_stats.hpp"

namespace gridstats {

struct FitOptions {
  std::size_t max_iterations = 2000;
  double log_likelihood_tolerance = 1e-9;
  Binning binning = FreedmanDiaconis{};
};

struct FitResult {
  DistSpec dist;
  double log_likelihood;
  std::size_t n;
  bool converged;
  std::size_t iterations;
  std::string diagnostic;
};

/// Discretized Kullback-Leibler divergence in nats.
struct KlScore {
  double d_kl = 0.0;
  std::size_t bins_used = 0;
  std::size_t empty_bins_skipped = 0;
};

/// Floor applied to model bin masses before taking logarithms.
inline constexpr double kKlMassFloor = 1e-12;

/// Sum of log densities; -inf when any value is outside the support.
double log_likelihood(const DistSpec& dist, std::span<const double> values);

/// Maximum-likelihood fit. Exponential and Normal are closed form; TLS and GEV
/// run Nelder-Mead on (mu, log sigma, log nu) and (mu, log sigma, zeta).
/// Throws on empty, non-finite or constant samples, on negative values for
/// Exponential and on fewer than five values for TLS and GEV.
FitResult fit_mle(Family family, std::span<const double> values, const FitOptions& options = {});

/// D_KL(P || Q) with P(i) = count_i / n and Q(i) the model's bin mass.
KlScore kl_divergence(const Histogram& p_hist, const DistSpec& q);

/// D_KL over explicit probability masses. Zero P bins are skipped.
KlScore kl_divergence(std::span<const double> p_mass, std::span<const double> q_mass);

struct RankedFit {
  FitResult fit;
  KlScore score;
};

/// Fits each family, scores all of them against one shared histogram and
/// ranks ascending by d_kl. Non-converged fits go last; ties prefer fewer
/// parameters, then the family name. Exponential is left out when the
/// sample has negative values.
std::vector<RankedFit> select_best(std::span<const double> values, std::span<const Family> families,
                                   const FitOptions& options = {});

}  // namespace gridstats
