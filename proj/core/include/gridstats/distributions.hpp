#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "gridstats/random.hpp"

namespace gridstats {

enum class Family { Tls, Gev, Exponential, Normal };

/// "tls", "gev", "exponential", "normal".
std::string_view family_name(Family family) noexcept;
Family parse_family(std::string_view name);
std::size_t parameter_count(Family family) noexcept;

/// t location-scale: (x - mu) / sigma is Student-t with nu degrees of freedom.
struct TlsParams {
  double mu;
  double sigma;
  double nu;
  bool operator==(const TlsParams&) const = default;
};

/// Generalized extreme value, F(x) = exp(-(1 + zeta (x - mu) / sigma)^(-1/zeta)).
struct GevParams {
  double mu;
  double sigma;
  double zeta;
  bool operator==(const GevParams&) const = default;
};

/// Exponential parameterized by its mean.
struct ExponentialParams {
  double mu;
  bool operator==(const ExponentialParams&) const = default;
};

struct NormalParams {
  double mu;
  double sigma;
  bool operator==(const NormalParams&) const = default;
};

/// A validated member of one of the four families.
class DistSpec {
 public:
  using Params = std::variant<TlsParams, GevParams, ExponentialParams, NormalParams>;

  static DistSpec tls(double mu, double sigma, double nu);
  static DistSpec gev(double mu, double sigma, double zeta);
  static DistSpec exponential(double mu);
  static DistSpec normal(double mu, double sigma);

  /// Dispatches to the factory matching the alternative; throws on invalid values.
  static DistSpec from_params(const Params& params);

  Family family() const noexcept { return static_cast<Family>(params_.index()); }
  const Params& params() const noexcept { return params_; }

  template <class T>
  const T& as() const {
    return std::get<T>(params_);
  }

  bool operator==(const DistSpec&) const = default;

 private:
  explicit DistSpec(Params params) : params_(params) {}
  Params params_;
};

/// Smallest |zeta| a GEV may carry; the Gumbel limit is excluded.
inline constexpr double kMinGevShape = 1e-6;

double pdf(const DistSpec& dist, double x);
double log_pdf(const DistSpec& dist, double x);
double cdf(const DistSpec& dist, double x);

/// Inverse cdf for p in (0, 1). Throws otherwise.
double quantile(const DistSpec& dist, double p);

/// Whether x lies in the open support of the distribution.
bool in_support(const DistSpec& dist, double x) noexcept;

/// One inverse-transform draw from the stream.
double draw(const DistSpec& dist, UniformStream& stream);

/// n inverse-transform draws from UniformStream(seed).
std::vector<double> sample(const DistSpec& dist, std::uint64_t seed, std::size_t n);

/// Probability mass of each bin [edges[i], edges[i+1]] from cdf differences.
std::vector<double> bin_masses(const DistSpec& dist, std::span<const double> edges);

}  // namespace gridstats
