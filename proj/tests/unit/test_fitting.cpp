#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "gridstats/distributions.hpp"
#include "gridstats/error.hpp"
#include "gridstats/fitting.hpp"
#include "gridstats/simplex.hpp"

using namespace gridstats;

namespace {

double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

}  // namespace

TEST(Simplex, FindsRosenbrockMinimum) {
  const auto rosen = [](std::span<const double> x) {
    return 100 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1 - x[0], 2);
  };
  const std::vector<double> start{-1.2, 1.0}, step{0.5, 0.5};
  const auto r = minimize_simplex(rosen, start, step, SimplexOptions{5000, 1e-14});
  EXPECT_NEAR(r.x[0], 1.0, 1e-3);
  EXPECT_NEAR(r.x[1], 1.0, 1e-3);
  EXPECT_TRUE(r.converged);
}

TEST(FitMle, ExponentialClosedForm) {
  const auto fit = fit_mle(Family::Exponential, std::vector<double>{1, 2, 3, 4});
  EXPECT_EQ(fit.dist.as<ExponentialParams>().mu, 2.5);
  EXPECT_TRUE(fit.converged);
  EXPECT_NEAR(fit.log_likelihood, -4.0 * std::log(2.5) - 10.0 / 2.5, 1e-12);
}

TEST(FitMle, NormalClosedForm) {
  const auto fit = fit_mle(Family::Normal, std::vector<double>{0, 0, 10, 10});
  EXPECT_EQ(fit.dist.as<NormalParams>().mu, 5.0);
  EXPECT_EQ(fit.dist.as<NormalParams>().sigma, 5.0);
}

TEST(FitMle, DegenerateSampleRejected) {
  for (auto f : {Family::Tls, Family::Gev, Family::Exponential, Family::Normal}) {
    EXPECT_THROW(fit_mle(f, std::vector<double>{3, 3, 3, 3}), Error);
  }
}

TEST(FitMle, ExponentialRejectsNegativeData) {
  EXPECT_THROW(fit_mle(Family::Exponential, std::vector<double>{-1, 2, 3}), Error);
}

TEST(FitMle, GevRecovery) {
  const GevParams truth{22.29, 10.70, 0.2135};
  const auto draws = sample(DistSpec::gev(truth.mu, truth.sigma, truth.zeta), 20251016, 20000);
  const auto fit = fit_mle(Family::Gev, draws);
  ASSERT_TRUE(fit.converged) << fit.diagnostic;
  const auto& p = fit.dist.as<GevParams>();
  EXPECT_LT(rel(p.mu, truth.mu), 0.05);
  EXPECT_LT(rel(p.sigma, truth.sigma), 0.05);
  EXPECT_LT(rel(p.zeta, truth.zeta), 0.05);
}

TEST(FitMle, GevMaximizesLikelihoodLocally) {
  const auto draws = sample(DistSpec::gev(41.08, 27.38, 0.3732), 4, 3000);
  const auto fit = fit_mle(Family::Gev, draws);
  ASSERT_TRUE(fit.converged);
  const auto& p = fit.dist.as<GevParams>();
  for (double eps : {-1e-3, 1e-3}) {
    EXPECT_LE(log_likelihood(DistSpec::gev(p.mu * (1 + eps), p.sigma, p.zeta), draws), fit.log_likelihood + 1e-6);
    EXPECT_LE(log_likelihood(DistSpec::gev(p.mu, p.sigma * (1 + eps), p.zeta), draws), fit.log_likelihood + 1e-6);
    EXPECT_LE(log_likelihood(DistSpec::gev(p.mu, p.sigma, p.zeta * (1 + eps)), draws), fit.log_likelihood + 1e-6);
  }
}

TEST(FitMle, TlsRecovery) {
  const auto draws = sample(DistSpec::tls(0.1291, 0.03, 3.0), 8, 20000);
  const auto fit = fit_mle(Family::Tls, draws);
  ASSERT_TRUE(fit.converged) << fit.diagnostic;
  const auto& p = fit.dist.as<TlsParams>();
  EXPECT_LT(rel(p.mu, 0.1291), 0.01);
  EXPECT_LT(rel(p.sigma, 0.03), 0.05);
  EXPECT_LT(rel(p.nu, 3.0), 0.15);
}

TEST(FitMle, LocationEquivarianceProperty) {
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<int> shift(-64, 64);
  const auto base = sample(DistSpec::tls(0, 1, 4), 3, 2000);
  const auto base_fit = fit_mle(Family::Tls, base).dist.as<TlsParams>();
  for (int trial = 0; trial < 5; ++trial) {
    const double c = shift(rng) * 0.25;
    std::vector<double> shifted(base);
    for (auto& x : shifted) x += c;
    const auto p = fit_mle(Family::Tls, shifted).dist.as<TlsParams>();
    EXPECT_NEAR(p.mu - c, base_fit.mu, 2e-3);
    EXPECT_NEAR(p.sigma / base_fit.sigma, 1.0, 2e-3);
  }
}

TEST(Kl, TwoBinHandComputation) {
  const std::vector<double> p{0.5, 0.5}, q{0.9, 0.1};
  const double oracle = 0.5 * std::log(0.5 / 0.9) + 0.5 * std::log(0.5 / 0.1);
  EXPECT_NEAR(kl_divergence(p, q).d_kl, oracle, 1e-15);
  EXPECT_NEAR(oracle, 0.5108256237659907, 1e-15);
}

TEST(Kl, EmptyBinsSkippedAndFloorApplied) {
  const std::vector<double> p{0.0, 0.5, 0.5}, q{0.5, 0.5, 0.0};
  const auto s = kl_divergence(p, q);
  EXPECT_EQ(s.empty_bins_skipped, 1u);
  EXPECT_EQ(s.bins_used, 2u);
  EXPECT_NEAR(s.d_kl, 0.5 * std::log(0.5 / 0.5) + 0.5 * std::log(0.5 / kKlMassFloor), 1e-9);
}

TEST(Kl, SelfDivergenceIsZero) {
  for (const auto& d : {DistSpec::gev(41.08, 27.38, 0.3732), DistSpec::normal(3, 2), DistSpec::tls(0, 1, 3)}) {
    const double lo = quantile(d, 0.001), hi = quantile(d, 0.999);
    std::vector<double> edges;
    for (int i = 0; i <= 40; ++i) edges.push_back(lo + (hi - lo) * i / 40.0);
    const auto q = bin_masses(d, edges);
    EXPECT_NEAR(kl_divergence(q, q).d_kl, 0.0, 1e-12);
    EXPECT_EQ(kl_divergence(q, q).bins_used, 40u);
  }
}

TEST(Kl, NonNegativeProperty) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> p(2 + trial % 20), q(p.size());
    double sp = 0, sq = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      p[i] = u(rng);
      q[i] = u(rng);
      sp += p[i];
      sq += q[i];
    }
    for (std::size_t i = 0; i < p.size(); ++i) {
      p[i] /= sp;
      q[i] /= sq;
    }
    EXPECT_GE(kl_divergence(p, q).d_kl, 0.0);
  }
}

TEST(Kl, ExponentialSampleAgainstItsFit) {
  const auto draws = sample(DistSpec::exponential(1.0), 50000, 50000);
  const auto fit = fit_mle(Family::Exponential, draws);
  EXPECT_LT(kl_divergence(histogram(draws), fit.dist).d_kl, 0.05);
}

TEST(Kl, LengthMismatchRejected) {
  EXPECT_THROW(kl_divergence(std::vector<double>{0.5, 0.5}, std::vector<double>{1.0}), Error);
}

TEST(SelectBest, GevRankedFirstOnGevData) {
  const auto draws = sample(DistSpec::gev(41.08, 27.38, 0.3732), 99, 20000);
  const std::vector<Family> families{Family::Gev, Family::Normal, Family::Exponential};
  const auto ranked = select_best(draws, families);
  ASSERT_GE(ranked.size(), 2u);
  EXPECT_EQ(ranked[0].fit.dist.family(), Family::Gev);
  for (std::size_t i = 1; i < ranked.size(); ++i) EXPECT_LE(ranked[i - 1].score.d_kl, ranked[i].score.d_kl);
}

TEST(SelectBest, NormalAndTlsCloseOnNormalData) {
  const auto draws = sample(DistSpec::normal(0, 1), 100, 20000);
  const std::vector<Family> families{Family::Normal, Family::Tls};
  const auto ranked = select_best(draws, families);
  ASSERT_EQ(ranked.size(), 2u);
  double normal_kl = 0, tls_kl = 0;
  for (const auto& r : ranked) (r.fit.dist.family() == Family::Normal ? normal_kl : tls_kl) = r.score.d_kl;
  EXPECT_LT(normal_kl, 0.05);
  EXPECT_LT(tls_kl, 0.05);
  EXPECT_LE(normal_kl, tls_kl + 0.02);
}

TEST(SelectBest, ExponentialSkippedForNegativeData) {
  const auto draws = sample(DistSpec::normal(0, 1), 6, 500);
  const std::vector<Family> both{Family::Normal, Family::Exponential};
  const auto ranked = select_best(draws, both);
  ASSERT_EQ(ranked.size(), 1u);
  EXPECT_EQ(ranked[0].fit.dist.family(), Family::Normal);
  const std::vector<Family> only_exp{Family::Exponential};
  EXPECT_THROW(select_best(draws, only_exp), Error);
}

TEST(SelectBest, SingleFamilyReturnedRegardless) {
  const auto draws = sample(DistSpec::normal(0, 1), 1, 1000);
  const std::vector<Family> families{Family::Gev};
  const auto ranked = select_best(draws, families);
  ASSERT_EQ(ranked.size(), 1u);
  EXPECT_EQ(ranked[0].fit.dist.family(), Family::Gev);
}
