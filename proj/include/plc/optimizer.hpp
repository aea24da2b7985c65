#pragma once

#include <cstdint>

#include "plc/families.hpp"

namespace plc {

/// Tuning knobs for the inner maximization of the plugged-nuisance
/// mixture likelihood. Defaults resolve Lambda well below the smallest
/// tabulated statistic values.
struct OptimizerOptions {
  int em_max_iter = 500;
  double em_tol = 1e-10;        // stop when the loglik gain per step drops below
  double polish_tol = 1e-10;    // simplex f-spread termination
  int n_starts = 5;             // lower bound on the number of starts
  double zero_threshold = 1e-8; // epsilon declaring Lambda "exactly zero"

  void validate() const;
};

/// Result of maximizing L(theta1, theta2, eta_hat) over the component
/// parameters. theta1_hat <= theta2_hat canonically.
struct AltFit {
  double theta1_hat = 0.0;
  double theta2_hat = 0.0;
  double loglik = 0.0;
  int iterations = 0;   // EM iterations spent on the winning start
  bool converged = false;
};

/// The test statistic with its diagnostics.
struct PlcOutcome {
  double lambda = 0.0;
  bool is_zero = true;
  AltFit alt;
  NullFit null;
};

/// One fixed-weight EM step. Weights stay at 0.5; responsibilities use the
/// current (theta1, theta2); each component re-estimates by its weighted
/// closed form. Returns collapsed = true when a component's total
/// responsibility falls below 1e-12 (caller restarts elsewhere).
struct EmStepResult {
  double theta1 = 0.0;
  double theta2 = 0.0;
  bool collapsed = false;
};

EmStepResult em_step(const Sample& sample, MixtureFamily family, double theta1,
                     double theta2, double eta_hat);

/// Multi-start EM plus a Nelder-Mead polish on the 2-D surface
/// (VarianceMixture is searched in log theta). Starts: symmetric perturbation
/// of the null point, moment splits, quantile splits of the sorted data, and
/// for the variance family smallest-k "spike" starts that chase the narrow
/// left-component maxima; random starts top the list up to n_starts. The
/// null point itself is always a candidate, so loglik >= null.loglik - 1e-9.
AltFit fit_alternative(const Sample& sample, MixtureFamily family, const NullFit& null,
                       const OptimizerOptions& opts = {});

/// Lambda = max(0, 2 (alt.loglik - null.loglik)), with the zero flag taken
/// from opts.zero_threshold. Deterministic: same input and options give
/// bit-identical output.
PlcOutcome plc_statistic(const Sample& sample, MixtureFamily family,
                         const OptimizerOptions& opts = {});

}  // namespace plc
