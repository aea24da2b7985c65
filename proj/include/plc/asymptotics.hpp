#pragma once

#include <array>

#include "plc/families.hpp"

namespace plc {

/// Sample averages of the mixed directional derivatives of the full mixture
/// log-likelihood at the null fit (sum/difference directions of the two
/// component parameters), reduced to their score-ratio closed forms:
///   c20 = mean(xi2 - xi1^2)          (converges to -I)
///   c02 = mean(xi2)
///   c12 = mean(xi3 - xi1*xi2)
///   c04 = mean(psi),  psi = xi4 + xi1*xi3/2 - 3*xi2^2 + 3*xi1*xi2
struct CBarSet {
  double c20 = 0.0;
  double c02 = 0.0;
  double c12 = 0.0;
  double c04 = 0.0;
};

enum class LimitKind { DegenerateAtZero, ScaledHalfChiSquare };

/// Limit law of the statistic under the null: either a point mass at zero or
/// c^2 max(0, Z)^2 — half an atom at zero plus a scaled chi-square(1).
struct LimitLaw {
  LimitKind kind = LimitKind::DegenerateAtZero;
  double c_squared = 0.0;  // meaningful for ScaledHalfChiSquare only
};

/// The standing quantities of the limit theory, all by quadrature.
struct MomentReport {
  double xi1_xi2_expectation = 0.0;
  double fisher_info_theta = 0.0;
  double sigma_squared = 0.0;  // adjusted variance of the xi2 plug-in average
  double c04_limit = 0.0;      // E[psi] at the null
};

/// Score parametrization for the variance family diagnostics: the component
/// scale enters either as a variance (the working convention) or as an sd
/// (the literal reading, under which E[xi1 xi2] = 2, not 0).
enum class ScaleParametrization { Variance, StdDev };

using Matrix2 = std::array<std::array<double, 2>, 2>;

CBarSet c_bar_set(const Sample& sample, MixtureFamily family, const NullFit& null);

/// Joint Fisher information of (theta, eta), by Gauss-Hermite quadrature of
/// the score outer product. Symmetric positive definite on the domain.
Matrix2 fisher_information(MixtureFamily family, double theta, double eta,
                           int quad_order = 64);

/// Quadrature value of E[xi1 xi2] under the null at the canonical point
/// (location-scale invariance makes the point immaterial).
double check_score_orthogonality(MixtureFamily family,
                                 ScaleParametrization param = ScaleParametrization::Variance,
                                 int quad_order = 64);

enum class AdjustedVarianceKernel { Xi2Kernel };

/// V^2 = E[psi^2] - C' I^{-1} C for the mean-zero kernel psi = xi2, the
/// asymptotic variance of the plug-in average sqrt(N) * mean(xi2_hat).
double adjusted_variance(MixtureFamily family,
                         AdjustedVarianceKernel kernel = AdjustedVarianceKernel::Xi2Kernel,
                         int quad_order = 64);

/// The per-family limit law. Checks E[xi1 xi2] = 0 and C04 < 0 first and
/// throws AssumptionError if either fails. MeanMixture degenerates at zero
/// (sigma^2 = 0); VarianceMixture gets c^2 = -3 sigma^2 / C04.
LimitLaw limit_law(MixtureFamily family, int quad_order = 64);

MomentReport moment_report(MixtureFamily family, int quad_order = 64);

/// CDF of the limit law; the ScaledHalfChiSquare case is Phi(sqrt(t/c^2)) for
/// t >= 0 with an atom of exactly 0.5 at zero.
double limit_cdf(const LimitLaw& law, double t);

/// inf{t : F(t) >= p}; equals 0 for p <= 0.5 under ScaledHalfChiSquare.
double limit_quantile(const LimitLaw& law, double p);

}  // namespace plc
