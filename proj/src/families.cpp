#include "plc/families.hpp"

#include <cmath>
#include <limits>

#include "plc/errors.hpp"

namespace plc {

namespace {
constexpr double kLog2Pi = 1.8378770664093454836;
constexpr double kLog2 = 0.6931471805599453094;
}  // namespace

const char* family_name(MixtureFamily family) {
  return family == MixtureFamily::MeanMixture ? "mean" : "variance";
}

Sample::Sample(std::vector<double> values) : values_(std::move(values)) {
  if (values_.size() < 2) throw DegenerateSampleError("Sample: need at least 2 observations");
  double s = 0.0;
  for (double v : values_) {
    if (!std::isfinite(v)) throw DegenerateSampleError("Sample: non-finite observation");
    s += v;
  }
  mean_ = s / static_cast<double>(values_.size());
  double ss = 0.0;
  for (double v : values_) ss += (v - mean_) * (v - mean_);
  variance_ = ss / static_cast<double>(values_.size());
  if (!(variance_ > 0.0)) throw DegenerateSampleError("Sample: zero sample variance");
}

void check_domain(MixtureFamily family, double theta, double eta) {
  if (!std::isfinite(theta) || !std::isfinite(eta))
    throw ParameterDomainError("non-finite parameter");
  if (family == MixtureFamily::MeanMixture) {
    if (!(eta > 0.0)) throw ParameterDomainError("MeanMixture: eta (common sd) must be > 0");
  } else {
    if (!(theta > 0.0))
      throw ParameterDomainError("VarianceMixture: theta (component variance) must be > 0");
  }
}

double log_density(MixtureFamily family, double z, double theta, double eta) {
  check_domain(family, theta, eta);
  if (family == MixtureFamily::MeanMixture) {
    const double u = (z - theta) / eta;
    return -0.5 * kLog2Pi - std::log(eta) - 0.5 * u * u;
  }
  const double u2 = (z - eta) * (z - eta) / theta;
  return -0.5 * kLog2Pi - 0.5 * std::log(theta) - 0.5 * u2;
}

double density(MixtureFamily family, double z, double theta, double eta) {
  return std::exp(log_density(family, z, theta, eta));
}

double mixture_log_likelihood(const Sample& sample, MixtureFamily family, double theta1,
                              double theta2, double eta) {
  check_domain(family, theta1, eta);
  check_domain(family, theta2, eta);
  double total = 0.0;
  for (double z : sample.values()) {
    const double a1 = log_density(family, z, theta1, eta);
    const double a2 = log_density(family, z, theta2, eta);
    const double m = a1 > a2 ? a1 : a2;
    total += m - kLog2 + std::log1p(std::exp(-std::fabs(a1 - a2)));
  }
  if (!std::isfinite(total)) throw NumericError("mixture_log_likelihood: non-finite sum");
  return total;
}

double null_log_likelihood(const Sample& sample, MixtureFamily family, double theta,
                           double eta) {
  check_domain(family, theta, eta);
  double total = 0.0;
  for (double z : sample.values()) total += log_density(family, z, theta, eta);
  if (!std::isfinite(total)) throw NumericError("null_log_likelihood: non-finite sum");
  return total;
}

NullFit fit_null(const Sample& sample, MixtureFamily family) {
  NullFit fit;
  if (family == MixtureFamily::MeanMixture) {
    fit.theta_hat = sample.mean();
    fit.eta_hat = std::sqrt(sample.variance());
  } else {
    fit.eta_hat = sample.mean();
    fit.theta_hat = sample.variance();
  }
  fit.loglik = null_log_likelihood(sample, family, fit.theta_hat, fit.eta_hat);
  return fit;
}

double hermite_he(int r, double u) {
  switch (r) {
    case 0: return 1.0;
    case 1: return u;
    case 2: return u * u - 1.0;
    case 3: return (u * u - 3.0) * u;
    case 4: return (u * u - 6.0) * u * u + 3.0;
    case 5: return ((u * u - 10.0) * u * u + 15.0) * u;
    case 6: return ((u * u - 15.0) * u * u + 45.0) * u * u - 15.0;
    case 7: return (((u * u - 21.0) * u * u + 105.0) * u * u - 105.0) * u;
    case 8: return (((u * u - 28.0) * u * u + 210.0) * u * u - 420.0) * u * u + 105.0;
    default: throw ArgumentError("hermite_he: order out of range");
  }
}

double score_ratio(MixtureFamily family, double z, int r, double theta, double eta) {
  if (r < 1 || r > 4) throw ArgumentError("score_ratio: r must lie in 1..4");
  check_domain(family, theta, eta);
  if (family == MixtureFamily::MeanMixture) {
    const double u = (z - theta) / eta;
    return hermite_he(r, u) / std::pow(eta, r);
  }
  const double u = (z - eta) / std::sqrt(theta);
  return hermite_he(2 * r, u) / std::pow(2.0 * theta, r);
}

ScoreVector score_vectors(const Sample& sample, MixtureFamily family, double theta,
                          double eta) {
  check_domain(family, theta, eta);
  ScoreVector out;
  for (auto& v : out.xi) v.reserve(sample.size());
  for (double z : sample.values())
    for (int r = 1; r <= 4; ++r) out.xi[r - 1].push_back(score_ratio(family, z, r, theta, eta));
  return out;
}

}  // namespace plc
