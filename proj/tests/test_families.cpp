#include <cmath>
#include <vector>

#include "doctest.h"
#include "plc/errors.hpp"
#include "plc/families.hpp"
#include "plc/quadrature.hpp"
#include "plc/rng.hpp"
#include "test_oracles.hpp"

using namespace plc;

namespace {

Sample random_sample(RandomStream& s, int n, double mu = 0.0, double sd = 1.0) {
  std::vector<double> z(static_cast<std::size_t>(n));
  for (double& v : z) v = mu + sd * s.next_normal();
  return Sample(z);
}

}  // namespace

TEST_CASE("sample preconditions") {
  CHECK_THROWS_AS(Sample({0.0}), DegenerateSampleError);
  CHECK_THROWS_AS(Sample({1.0, 1.0, 1.0}), DegenerateSampleError);
  CHECK_THROWS_AS(Sample({1.0, std::nan("")}), DegenerateSampleError);
  CHECK_NOTHROW(Sample({-1.0, 1.0}));
}

TEST_CASE("density values and domains") {
  CHECK(density(MixtureFamily::MeanMixture, 0, 0, 1) ==
        doctest::Approx(0.3989422804014327).epsilon(1e-12));
  CHECK(density(MixtureFamily::VarianceMixture, 0, 1, 0) ==
        doctest::Approx(0.3989422804014327).epsilon(1e-12));
  // N(1,4) at its mode: half the unit-variance mode
  CHECK(density(MixtureFamily::VarianceMixture, 1, 4, 1) ==
        doctest::Approx(0.19947114020071635).epsilon(1e-12));
  CHECK_THROWS_AS(density(MixtureFamily::MeanMixture, 0, 0, -1), ParameterDomainError);
  CHECK_THROWS_AS(density(MixtureFamily::MeanMixture, 0, 0, 0), ParameterDomainError);
  CHECK_THROWS_AS(density(MixtureFamily::VarianceMixture, 0, 0, 0), ParameterDomainError);
  CHECK_THROWS_AS(density(MixtureFamily::VarianceMixture, 0, -2, 0), ParameterDomainError);
}

TEST_CASE("mixture loglik: hand-evaluated two-point value") {
  const Sample s({-1.0, 1.0});
  // direct per-point evaluation of the two-term sum
  long double expect = 0.0L;
  for (double z : s.values()) {
    const long double f1 = std::exp(-0.5L * (z + 1) * (z + 1)) / std::sqrt(2.0L * M_PIl);
    const long double f2 = std::exp(-0.5L * (z - 1) * (z - 1)) / std::sqrt(2.0L * M_PIl);
    expect += std::log(0.5L * f1 + 0.5L * f2);
  }
  CHECK(mixture_log_likelihood(s, MixtureFamily::MeanMixture, -1, 1, 1) ==
        doctest::Approx(static_cast<double>(expect)).epsilon(1e-13));
}

TEST_CASE("mixture loglik: collapse identity and swap symmetry") {
  RandomStream rng(11, 0);
  for (int trial = 0; trial < 50; ++trial) {
    const Sample s = random_sample(rng, 20, rng.next_normal(), 0.5 + rng.next_uniform());
    for (auto family : {MixtureFamily::MeanMixture, MixtureFamily::VarianceMixture}) {
      const bool var = family == MixtureFamily::VarianceMixture;
      const double th = var ? 0.5 + rng.next_uniform() : rng.next_normal();
      const double th2 = var ? 0.5 + rng.next_uniform() : rng.next_normal();
      const double eta = var ? rng.next_normal() : 0.5 + rng.next_uniform();
      const double collapsed = mixture_log_likelihood(s, family, th, th, eta);
      const double null_val = null_log_likelihood(s, family, th, eta);
      CHECK(collapsed == doctest::Approx(null_val).epsilon(1e-12));
      CHECK(mixture_log_likelihood(s, family, th, th2, eta) ==
            mixture_log_likelihood(s, family, th2, th, eta));
    }
  }
}

TEST_CASE("null loglik: analytic two-point value") {
  const Sample s({-1.0, 1.0});
  CHECK(null_log_likelihood(s, MixtureFamily::MeanMixture, 0, 1) ==
        doctest::Approx(-2.8378770664093453).epsilon(1e-12));
}

TEST_CASE("fit_null closed forms") {
  const NullFit m = fit_null(Sample({0.0, 2.0}), MixtureFamily::MeanMixture);
  CHECK(m.theta_hat == doctest::Approx(1.0));
  CHECK(m.eta_hat == doctest::Approx(1.0));
  const NullFit v = fit_null(Sample({-1.0, 1.0}), MixtureFamily::VarianceMixture);
  CHECK(v.eta_hat == doctest::Approx(0.0));
  CHECK(v.theta_hat == doctest::Approx(1.0));
}

TEST_CASE("fit_null maximizes: random probes never beat the MLE") {
  RandomStream rng(17, 0);
  const Sample s = random_sample(rng, 100, 0.3, 1.7);
  for (auto family : {MixtureFamily::MeanMixture, MixtureFamily::VarianceMixture}) {
    const NullFit fit = fit_null(s, family);
    CHECK(fit.loglik == doctest::Approx(null_log_likelihood(s, family, fit.theta_hat,
                                                            fit.eta_hat)).epsilon(1e-12));
    for (int probe = 0; probe < 1000; ++probe) {
      const bool var = family == MixtureFamily::VarianceMixture;
      const double th = var ? fit.theta_hat * std::exp(2.0 * (rng.next_uniform() - 0.5))
                            : fit.theta_hat + 2.0 * (rng.next_uniform() - 0.5);
      const double eta = var ? fit.eta_hat + 2.0 * (rng.next_uniform() - 0.5)
                             : fit.eta_hat * std::exp(2.0 * (rng.next_uniform() - 0.5));
      CHECK(null_log_likelihood(s, family, th, eta) <= fit.loglik + 1e-9);
    }
  }
}

TEST_CASE("score ratios: special zeros and argument errors") {
  CHECK(score_ratio(MixtureFamily::MeanMixture, 0.7, 1, 0.7, 1.3) == 0.0);
  CHECK(score_ratio(MixtureFamily::MeanMixture, 1.0, 2, 0.0, 1.0) == doctest::Approx(0.0));
  CHECK_THROWS_AS(score_ratio(MixtureFamily::MeanMixture, 0, 0, 0, 1), ArgumentError);
  CHECK_THROWS_AS(score_ratio(MixtureFamily::MeanMixture, 0, 5, 0, 1), ArgumentError);
}

TEST_CASE("score ratios match the finite-difference oracle") {
  RandomStream rng(23, 0);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const bool var = trial % 2 == 1;
    const auto family = var ? MixtureFamily::VarianceMixture : MixtureFamily::MeanMixture;
    const double theta = var ? 0.6 + 1.8 * rng.next_uniform() : rng.next_normal();
    const double eta = var ? rng.next_normal() : 0.6 + 1.8 * rng.next_uniform();
    const double sd = var ? std::sqrt(theta) : eta;
    const double center = var ? eta : theta;
    const double z = center + 2.5 * sd * (rng.next_uniform() - 0.5) * 2.0;
    const int r = 1 + static_cast<int>(rng.next_uniform() * 4.0);
    const double h = 0.02 * (var ? theta : eta);
    const double fd = testing::score_ratio_fd(family, z, r, theta, eta, h);
    const double cf = score_ratio(family, z, r, theta, eta);
    const double rel = std::fabs(fd - cf) / std::max(1.0, std::fabs(cf));
    worst = std::max(worst, rel);
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("scores integrate to zero under the null density") {
  const GaussHermite gh(64);
  for (auto family : {MixtureFamily::MeanMixture, MixtureFamily::VarianceMixture}) {
    const bool var = family == MixtureFamily::VarianceMixture;
    const double theta = var ? 1.3 : 0.4;
    const double eta = var ? -0.2 : 1.3;
    for (int r = 1; r <= 4; ++r) {
      const double e = gh.expectation([&](double x) {
        const double z = var ? eta + std::sqrt(theta) * x : theta + eta * x;
        return score_ratio(family, z, r, theta, eta);
      });
      CHECK(std::fabs(e) < 1e-8);
    }
  }
}

TEST_CASE("fit_null exactness: first two mean-family score sums vanish") {
  RandomStream rng(31, 0);
  for (int trial = 0; trial < 50; ++trial) {
    const Sample s = random_sample(rng, 40 + trial, rng.next_normal(), 0.5 + rng.next_uniform());
    const NullFit fit = fit_null(s, MixtureFamily::MeanMixture);
    const ScoreVector sv = score_vectors(s, MixtureFamily::MeanMixture, fit.theta_hat, fit.eta_hat);
    double s1 = 0.0, s2 = 0.0;
    for (std::size_t j = 0; j < s.size(); ++j) {
      s1 += sv.xi[0][j];
      s2 += sv.xi[1][j];
    }
    CHECK(std::fabs(s1) < 1e-10 * static_cast<double>(s.size()));
    CHECK(std::fabs(s2) < 1e-10 * static_cast<double>(s.size()));
  }
}
