#pragma once

#include <array>
#include <span>
#include <vector>

namespace plc {

/// The two Gaussian families under test.
///
/// MeanMixture:     f(z|theta,eta) = phi((z-theta)/eta)/eta,
///                  theta = component mean (any real), eta = common sd (> 0).
/// VarianceMixture: f(z|theta,eta) = phi((z-eta)/sqrt(theta))/sqrt(theta),
///                  theta = component VARIANCE (> 0), eta = common mean.
///
/// theta is the variance, not the sd: under this parametrization the score
/// ratios satisfy E[xi1*xi2] = 0 at the null, which the limit theory needs
/// (under the sd parametrization the expectation is 2).
enum class MixtureFamily { MeanMixture, VarianceMixture };

const char* family_name(MixtureFamily family);

/// Observations for one test. Construction enforces the hard preconditions:
/// N >= 2, all values finite, positive sample variance.
class Sample {
 public:
  explicit Sample(std::vector<double> values);

  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double mean() const { return mean_; }
  double variance() const { return variance_; }  // 1/N convention

 private:
  std::vector<double> values_;
  double mean_;
  double variance_;
};

/// Null MLE and the log-likelihood it attains.
struct NullFit {
  double theta_hat = 0.0;
  double eta_hat = 0.0;
  double loglik = 0.0;
};

/// Per-observation estimated scores xi_r(j), r = 1..4 (xi[r-1]).
struct ScoreVector {
  std::array<std::vector<double>, 4> xi;
};

void check_domain(MixtureFamily family, double theta, double eta);

double density(MixtureFamily family, double z, double theta, double eta);
double log_density(MixtureFamily family, double z, double theta, double eta);

/// Sum of log[0.5 f(z|theta1,eta) + 0.5 f(z|theta2,eta)]; symmetric in
/// (theta1, theta2). Evaluated with a max-shift so extreme z cannot underflow.
double mixture_log_likelihood(const Sample& sample, MixtureFamily family, double theta1,
                              double theta2, double eta);

double null_log_likelihood(const Sample& sample, MixtureFamily family, double theta,
                           double eta);

/// Closed-form null MLE. MeanMixture: theta = mean, eta = root mean square
/// deviation; VarianceMixture: eta = mean, theta = mean square deviation.
NullFit fit_null(const Sample& sample, MixtureFamily family);

/// Score ratio xi_r = D_theta^r f(z|theta,eta) / f(z|theta,eta), r in 1..4.
///
/// With u the standardized residual and He_r the probabilists' Hermite
/// polynomials: MeanMixture gives He_r(u)/eta^r; VarianceMixture gives
/// He_{2r}(u)/(2 theta)^r, which follows from the heat-equation identity
/// D_theta f = (1/2) D_eta^2 f for a Gaussian in its variance.
double score_ratio(MixtureFamily family, double z, int r, double theta, double eta);

ScoreVector score_vectors(const Sample& sample, MixtureFamily family, double theta,
                          double eta);

/// Probabilists' Hermite polynomial He_r, r <= 8.
double hermite_he(int r, double u);

}  // namespace plc
