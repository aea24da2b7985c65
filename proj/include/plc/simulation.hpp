#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "plc/optimizer.hpp"
#include "plc/rng.hpp"

namespace plc {

/// One Monte Carlo campaign. Replication i always draws from the stream
/// keyed by (seed, i), so results are reproducible for any worker count.
struct SimConfig {
  MixtureFamily family = MixtureFamily::VarianceMixture;
  int n = 100;
  int reps = 1000;
  std::uint64_t seed = 1;
  OptimizerOptions optimizer;

  void validate() const;
};

/// Summary of a simulated null distribution.
struct NullSimSummary {
  std::vector<double> lambdas;           // sorted ascending
  std::vector<double> lambdas_by_rep;    // replication order, for raw output
  std::map<double, double> percentiles;  // requested p -> value (type 7)
  double mean = 0.0;
  double zero_fraction = 0.0;  // fraction below the optimizer zero threshold
  double c_squared_hat = 0.0;  // 2 * mean (moment matching E = c^2/2)
  int retries = 0;             // degenerate-sample redraws
};

struct PowerCurve {
  std::vector<double> grid;
  std::vector<double> power;
  double alpha = 0.0;
  double critical_value = 0.0;
  int n = 0;
};

/// Execution policy for the replication loop. Parallel uses OpenMP when the
/// build has it; Serial is the plain reference loop kept for testing. Both
/// produce bit-identical results.
enum class Execution { Serial, Parallel };

/// Worker cap: PLC_THREADS when set, otherwise the OpenMP default.
int effective_threads();

/// n independent draws from 0.5 f(.|theta1,eta) + 0.5 f(.|theta2,eta):
/// each observation flips a fair component coin, then draws the Gaussian.
Sample sample_mixture(MixtureFamily family, double theta1, double theta2, double eta, int n,
                      RandomStream& stream);

/// reps samples of size n from the single component f(.|theta0, eta0), each
/// reduced to its PLC statistic. Degenerate samples are redrawn from a fresh
/// derived stream and counted; more than 1% retries aborts the campaign.
NullSimSummary simulate_null(const SimConfig& cfg, double theta0, double eta0,
                             const std::vector<double>& percentile_points = {5.0, 50.0, 95.0},
                             Execution exec = Execution::Parallel);

/// Empirical (1-alpha) percentile of the simulated null lambdas at the
/// family's canonical null point.
double critical_value(const SimConfig& cfg, double alpha, Execution exec = Execution::Parallel);

/// Moment-matching estimate 2*mean(lambdas): the limit law c^2 max(0,Z)^2 has
/// mean c^2/2.
double estimate_c_squared(const NullSimSummary& summary);

/// Power along a grid of alternatives at level alpha. The critical value
/// comes from a null run with null_reps replications. Grid semantics:
/// MeanMixture draws components at -g and +g with eta = 1 (so g is half the
/// mean separation); VarianceMixture draws component variances 1 and g^4 with
/// common mean 0 (so g is the component sd ratio sqrt(sd_max/sd_min) as the
/// power plots parametrize it).
PowerCurve power_curve(const SimConfig& cfg, const std::vector<double>& grid, double alpha,
                       int null_reps, Execution exec = Execution::Parallel);

/// Write "rep,lambda" rows for external analysis.
void write_raw_lambdas(const NullSimSummary& summary, const std::string& path);

}  // namespace plc
