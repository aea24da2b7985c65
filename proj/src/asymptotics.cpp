#include "plc/asymptotics.hpp"

#include <cmath>

#include "plc/errors.hpp"
#include "plc/quadrature.hpp"
#include "plc/rng.hpp"

namespace plc {

namespace {

struct CanonicalPoint {
  double theta;
  double eta;
};

CanonicalPoint canonical_point(MixtureFamily family) {
  return family == MixtureFamily::MeanMixture ? CanonicalPoint{0.0, 1.0}
                                              : CanonicalPoint{1.0, 0.0};
}

// Joint (theta, eta) score at a standardized draw x (the observation is the
// canonical-point quantile z = theta + eta x resp. z = eta + sqrt(theta) x).
struct JointScore {
  double s_theta;
  double s_eta;
};

JointScore joint_score(MixtureFamily family, double x, double theta, double eta) {
  if (family == MixtureFamily::MeanMixture) {
    // d/dtheta log f = u/eta, d/deta log f = (u^2 - 1)/eta
    return {x / eta, (x * x - 1.0) / eta};
  }
  // d/dtheta log f = (u^2 - 1)/(2 theta), d/deta log f = u/sqrt(theta)
  return {(x * x - 1.0) / (2.0 * theta), x / std::sqrt(theta)};
}

double xi_at(MixtureFamily family, double x, int r, double theta, double eta) {
  // score ratio expressed directly in the standardized residual x
  if (family == MixtureFamily::MeanMixture) return hermite_he(r, x) / std::pow(eta, r);
  return hermite_he(2 * r, x) / std::pow(2.0 * theta, r);
}

double psi_kernel(MixtureFamily family, double x, double theta, double eta) {
  const double x1 = xi_at(family, x, 1, theta, eta);
  const double x2 = xi_at(family, x, 2, theta, eta);
  const double x3 = xi_at(family, x, 3, theta, eta);
  const double x4 = xi_at(family, x, 4, theta, eta);
  return x4 + 0.5 * x1 * x3 - 3.0 * x2 * x2 + 3.0 * x1 * x2;
}

double solve_quadratic_form(const Matrix2& m, double c1, double c2) {
  // C' M^{-1} C for symmetric 2x2 M
  const double det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
  if (!(std::fabs(det) > 1e-300)) throw NumericError("fisher information is singular");
  const double y1 = (m[1][1] * c1 - m[0][1] * c2) / det;
  const double y2 = (-m[1][0] * c1 + m[0][0] * c2) / det;
  return c1 * y1 + c2 * y2;
}

}  // namespace

CBarSet c_bar_set(const Sample& sample, MixtureFamily family, const NullFit& null) {
  const ScoreVector sv = score_vectors(sample, family, null.theta_hat, null.eta_hat);
  const double n = static_cast<double>(sample.size());
  CBarSet out;
  for (std::size_t j = 0; j < sample.size(); ++j) {
    const double x1 = sv.xi[0][j], x2 = sv.xi[1][j], x3 = sv.xi[2][j], x4 = sv.xi[3][j];
    out.c20 += x2 - x1 * x1;
    out.c02 += x2;
    out.c12 += x3 - x1 * x2;
    out.c04 += x4 + 0.5 * x1 * x3 - 3.0 * x2 * x2 + 3.0 * x1 * x2;
  }
  out.c20 /= n;
  out.c02 /= n;
  out.c12 /= n;
  out.c04 /= n;
  return out;
}

Matrix2 fisher_information(MixtureFamily family, double theta, double eta, int quad_order) {
  check_domain(family, theta, eta);
  const GaussHermite gh(quad_order);
  Matrix2 m{{{0.0, 0.0}, {0.0, 0.0}}};
  for (int i = 0; i < gh.order(); ++i) {
    const double x = gh.nodes()[i], w = gh.weights()[i];
    const JointScore s = joint_score(family, x, theta, eta);
    m[0][0] += w * s.s_theta * s.s_theta;
    m[0][1] += w * s.s_theta * s.s_eta;
    m[1][1] += w * s.s_eta * s.s_eta;
  }
  m[1][0] = m[0][1];
  return m;
}

double check_score_orthogonality(MixtureFamily family, ScaleParametrization param,
                                 int quad_order) {
  const auto [theta, eta] = canonical_point(family);
  const GaussHermite gh(quad_order);
  double e = 0.0;
  for (int i = 0; i < gh.order(); ++i) {
    const double x = gh.nodes()[i], w = gh.weights()[i];
    double x1, x2;
    if (family == MixtureFamily::VarianceMixture && param == ScaleParametrization::StdDev) {
      // derivatives of sigma^{-1} phi((z-eta)/sigma) in sigma, at sigma = 1
      x1 = x * x - 1.0;
      x2 = ((x * x - 5.0) * x * x + 2.0);
    } else {
      x1 = xi_at(family, x, 1, theta, eta);
      x2 = xi_at(family, x, 2, theta, eta);
    }
    e += w * x1 * x2;
  }
  return e;
}

double adjusted_variance(MixtureFamily family, AdjustedVarianceKernel, int quad_order) {
  const auto [theta, eta] = canonical_point(family);
  const GaussHermite gh(quad_order);
  double e_psi2 = 0.0, c1 = 0.0, c2 = 0.0;
  for (int i = 0; i < gh.order(); ++i) {
    const double x = gh.nodes()[i], w = gh.weights()[i];
    const double psi = xi_at(family, x, 2, theta, eta);
    const JointScore s = joint_score(family, x, theta, eta);
    e_psi2 += w * psi * psi;
    c1 += w * psi * s.s_theta;
    c2 += w * psi * s.s_eta;
  }
  const Matrix2 info = fisher_information(family, theta, eta, quad_order);
  const double v2 = e_psi2 - solve_quadratic_form(info, c1, c2);
  return std::max(v2, 0.0);
}

MomentReport moment_report(MixtureFamily family, int quad_order) {
  const auto [theta, eta] = canonical_point(family);
  const GaussHermite gh(quad_order);
  MomentReport rep;
  for (int i = 0; i < gh.order(); ++i) {
    const double x = gh.nodes()[i], w = gh.weights()[i];
    rep.xi1_xi2_expectation +=
        w * xi_at(family, x, 1, theta, eta) * xi_at(family, x, 2, theta, eta);
    rep.c04_limit += w * psi_kernel(family, x, theta, eta);
  }
  rep.fisher_info_theta = fisher_information(family, theta, eta, quad_order)[0][0];
  rep.sigma_squared = adjusted_variance(family, AdjustedVarianceKernel::Xi2Kernel, quad_order);
  return rep;
}

LimitLaw limit_law(MixtureFamily family, int quad_order) {
  const MomentReport rep = moment_report(family, quad_order);
  if (std::fabs(rep.xi1_xi2_expectation) > 1e-8)
    throw AssumptionError("limit_law: E[xi1 xi2] != 0, the theorem does not apply");
  if (!(rep.c04_limit < 0.0))
    throw AssumptionError("limit_law: C04 >= 0, the theorem does not apply");
  LimitLaw law;
  if (rep.sigma_squared < 1e-12) {
    law.kind = LimitKind::DegenerateAtZero;
    return law;
  }
  law.kind = LimitKind::ScaledHalfChiSquare;
  law.c_squared = -3.0 * rep.sigma_squared / rep.c04_limit;
  return law;
}

double limit_cdf(const LimitLaw& law, double t) {
  if (t < 0.0) return 0.0;
  if (law.kind == LimitKind::DegenerateAtZero) return 1.0;
  return normal_cdf(std::sqrt(t / law.c_squared));
}

double limit_quantile(const LimitLaw& law, double p) {
  if (!(p > 0.0 && p < 1.0)) throw ArgumentError("limit_quantile: p must lie in (0,1)");
  if (law.kind == LimitKind::DegenerateAtZero) return 0.0;
  if (p <= 0.5) return 0.0;
  const double z = inverse_normal_cdf(p);
  return law.c_squared * z * z;
}

}  // namespace plc
