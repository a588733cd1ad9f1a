#include "gridstats/distributions.hpp"

#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "gridstats/error.hpp"

namespace gridstats {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require(bool ok, const char* message) {
  if (!ok) throw Error(message);
}

// ---- Student-t helpers on the standardized variable ------------------------

double student_log_norm(double nu) {
  // log[Gamma((nu+1)/2) / (sqrt(nu pi) Gamma(nu/2))]; the gamma ratio is taken
  // directly so large nu does not cancel two huge log-gamma values.
  const double log_gamma_ratio = -std::log(boost::math::tgamma_delta_ratio(0.5 * nu, 0.5));
  return log_gamma_ratio - 0.5 * std::log(nu * std::numbers::pi);
}

double student_log_pdf(double z, double nu) {
  return student_log_norm(nu) - 0.5 * (nu + 1.0) * std::log1p(z * z / nu);
}

double student_cdf(double z, double nu) {
  if (z == -kInf) return 0.0;
  if (z == kInf) return 1.0;
  return boost::math::cdf(boost::math::students_t_distribution<double>(nu), z);
}

// Newton steps from Boost's estimate, safeguarded by bisection on the bracket
// [-1e6, 1e6], widened when a very heavy tail (nu < 1) puts p beyond it.
double student_quantile(double p, double nu) {
  constexpr double kBracket = 1e6;
  constexpr double kProbTolerance = 1e-12;
  double lo = -kBracket;
  double hi = kBracket;
  while (lo > -1e300 && student_cdf(lo, nu) > p) lo *= 1e4;
  while (hi < 1e300 && student_cdf(hi, nu) < p) hi *= 1e4;
  double z = boost::math::quantile(boost::math::students_t_distribution<double>(nu), p);
  z = std::clamp(z, lo, hi);
  for (int iter = 0; iter < 400; ++iter) {
    const double f = student_cdf(z, nu) - p;
    if (std::abs(f) <= kProbTolerance * std::min(1.0, 1e3 * std::min(p, 1.0 - p)) || hi - lo <= 4e-16 * std::abs(z))
      return z;
    if (f < 0.0)
      lo = z;
    else
      hi = z;
    const double slope = std::exp(student_log_pdf(z, nu));
    double next = z - f / slope;
    if (!(next > lo && next < hi) || !std::isfinite(next)) next = 0.5 * (lo + hi);
    z = next;
  }
  return z;
}

// ---- GEV -------------------------------------------------------------------

// 1 + zeta (x - mu) / sigma
double gev_t(const GevParams& g, double x) { return 1.0 + g.zeta * (x - g.mu) / g.sigma; }

}  // namespace

std::string_view family_name(Family family) noexcept {
  switch (family) {
    case Family::Tls: return "tls";
    case Family::Gev: return "gev";
    case Family::Exponential: return "exponential";
    case Family::Normal: return "normal";
  }
  return "unknown";
}

Family parse_family(std::string_view name) {
  for (auto f : {Family::Tls, Family::Gev, Family::Exponential, Family::Normal})
    if (family_name(f) == name) return f;
  throw Error("unknown distribution family '" + std::string(name) + "'");
}

std::size_t parameter_count(Family family) noexcept {
  switch (family) {
    case Family::Tls: return 3;
    case Family::Gev: return 3;
    case Family::Exponential: return 1;
    case Family::Normal: return 2;
  }
  return 0;
}

DistSpec DistSpec::tls(double mu, double sigma, double nu) {
  require(std::isfinite(mu), "TLS mu must be finite");
  require(std::isfinite(sigma) && sigma > 0.0, "TLS sigma must be positive");
  require(std::isfinite(nu) && nu > 0.0, "TLS nu must be positive");
  return DistSpec(TlsParams{mu, sigma, nu});
}

DistSpec DistSpec::gev(double mu, double sigma, double zeta) {
  require(std::isfinite(mu), "GEV mu must be finite");
  require(std::isfinite(sigma) && sigma > 0.0, "GEV sigma must be positive");
  require(std::isfinite(zeta) && zeta != 0.0, "GEV zeta must be finite and non-zero");
  return DistSpec(GevParams{mu, sigma, zeta});
}

DistSpec DistSpec::exponential(double mu) {
  require(std::isfinite(mu) && mu > 0.0, "exponential mean must be positive");
  return DistSpec(ExponentialParams{mu});
}

DistSpec DistSpec::normal(double mu, double sigma) {
  require(std::isfinite(mu), "normal mu must be finite");
  require(std::isfinite(sigma) && sigma > 0.0, "normal sigma must be positive");
  return DistSpec(NormalParams{mu, sigma});
}

DistSpec DistSpec::from_params(const Params& params) {
  return std::visit(Overloaded{
                        [](const TlsParams& p) { return tls(p.mu, p.sigma, p.nu); },
                        [](const GevParams& p) { return gev(p.mu, p.sigma, p.zeta); },
                        [](const ExponentialParams& p) { return exponential(p.mu); },
                        [](const NormalParams& p) { return normal(p.mu, p.sigma); },
                    },
                    params);
}

bool in_support(const DistSpec& dist, double x) noexcept {
  return std::visit(Overloaded{
                        [&](const TlsParams&) { return std::isfinite(x); },
                        [&](const GevParams& g) { return std::isfinite(x) && gev_t(g, x) > 0.0; },
                        [&](const ExponentialParams&) { return std::isfinite(x) && x >= 0.0; },
                        [&](const NormalParams&) { return std::isfinite(x); },
                    },
                    dist.params());
}

double log_pdf(const DistSpec& dist, double x) {
  if (std::isnan(x)) return std::numeric_limits<double>::quiet_NaN();
  return std::visit(
      Overloaded{
          [&](const TlsParams& p) {
            if (!std::isfinite(x)) return -kInf;
            return student_log_pdf((x - p.mu) / p.sigma, p.nu) - std::log(p.sigma);
          },
          [&](const GevParams& g) {
            const double t = gev_t(g, x);
            if (!(t > 0.0) || !std::isfinite(x)) return -kInf;
            const double log_t = std::log1p(g.zeta * (x - g.mu) / g.sigma);
            return -std::log(g.sigma) - (1.0 + 1.0 / g.zeta) * log_t - std::exp(-log_t / g.zeta);
          },
          [&](const ExponentialParams& e) {
            if (x < 0.0 || !std::isfinite(x)) return -kInf;
            return -std::log(e.mu) - x / e.mu;
          },
          [&](const NormalParams& n) {
            const double z = (x - n.mu) / n.sigma;
            return -0.5 * z * z - std::log(n.sigma) - 0.5 * std::log(2.0 * std::numbers::pi);
          },
      },
      dist.params());
}

double pdf(const DistSpec& dist, double x) {
  const double lp = log_pdf(dist, x);
  return lp == -kInf ? 0.0 : std::exp(lp);
}

double cdf(const DistSpec& dist, double x) {
  if (std::isnan(x)) return std::numeric_limits<double>::quiet_NaN();
  return std::visit(Overloaded{
                        [&](const TlsParams& p) { return student_cdf((x - p.mu) / p.sigma, p.nu); },
                        [&](const GevParams& g) {
                          const double t = gev_t(g, x);
                          if (!(t > 0.0)) return g.zeta > 0.0 ? 0.0 : 1.0;
                          if (x == kInf) return 1.0;
                          if (x == -kInf) return 0.0;
                          const double log_t = std::log1p(g.zeta * (x - g.mu) / g.sigma);
                          return std::exp(-std::exp(-log_t / g.zeta));
                        },
                        [&](const ExponentialParams& e) { return x <= 0.0 ? 0.0 : -std::expm1(-x / e.mu); },
                        [&](const NormalParams& n) {
                          return 0.5 * std::erfc(-(x - n.mu) / (n.sigma * std::numbers::sqrt2));
                        },
                    },
                    dist.params());
}

double quantile(const DistSpec& dist, double p) {
  if (!(p > 0.0 && p < 1.0)) throw Error("quantile probability must lie strictly inside (0, 1)");
  return std::visit(Overloaded{
                        [&](const TlsParams& t) { return t.mu + t.sigma * student_quantile(p, t.nu); },
                        [&](const GevParams& g) {
                          return g.mu + g.sigma * std::expm1(-g.zeta * std::log(-std::log(p))) / g.zeta;
                        },
                        [&](const ExponentialParams& e) { return -e.mu * std::log1p(-p); },
                        [&](const NormalParams& n) {
                          return n.mu - n.sigma * std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
                        },
                    },
                    dist.params());
}

double draw(const DistSpec& dist, UniformStream& stream) { return quantile(dist, stream.next()); }

std::vector<double> sample(const DistSpec& dist, std::uint64_t seed, std::size_t n) {
  UniformStream stream(seed);
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(draw(dist, stream));
  return out;
}

std::vector<double> bin_masses(const DistSpec& dist, std::span<const double> edges) {
  std::vector<double> masses;
  if (edges.size() < 2) return masses;
  masses.reserve(edges.size() - 1);
  double previous = cdf(dist, edges[0]);
  for (std::size_t i = 1; i < edges.size(); ++i) {
    const double current = cdf(dist, edges[i]);
    masses.push_back(std::max(0.0, current - previous));
    previous = current;
  }
  return masses;
}

}  // namespace gridstats
