#include "plc/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <string>

#include "plc/errors.hpp"
#include "plc/stats.hpp"

#ifdef PLC_HAVE_OPENMP
#include <omp.h>
#endif

namespace plc {

namespace {

// retry r of replication i draws from stream id i + r * 2^32
constexpr std::uint64_t kRetryStride = 1ULL << 32;

Sample draw_null_sample(const SimConfig& cfg, double theta0, double eta0,
                        std::uint64_t stream_id, int& retries) {
  for (int attempt = 0;; ++attempt) {
    RandomStream stream(cfg.seed, stream_id + static_cast<std::uint64_t>(attempt) * kRetryStride);
    std::vector<double> z(static_cast<std::size_t>(cfg.n));
    if (cfg.family == MixtureFamily::MeanMixture) {
      for (double& v : z) v = theta0 + eta0 * stream.next_normal();
    } else {
      const double sd = std::sqrt(theta0);
      for (double& v : z) v = eta0 + sd * stream.next_normal();
    }
    try {
      return Sample(std::move(z));
    } catch (const DegenerateSampleError&) {
      ++retries;
      if (attempt >= 64) throw SimulationIntegrityError("simulate_null: endless degenerate redraws");
    }
  }
}

std::vector<double> run_replications(const SimConfig& cfg, double theta0, double eta0,
                                     Execution exec, int& retries) {
  std::vector<double> lambdas(static_cast<std::size_t>(cfg.reps));
  std::vector<int> retry_count(static_cast<std::size_t>(cfg.reps), 0);
  std::vector<std::string> errors(static_cast<std::size_t>(cfg.reps));

  auto body = [&](int i) {
    try {
      Sample s = draw_null_sample(cfg, theta0, eta0, static_cast<std::uint64_t>(i),
                                  retry_count[static_cast<std::size_t>(i)]);
      lambdas[static_cast<std::size_t>(i)] =
          plc_statistic(s, cfg.family, cfg.optimizer).lambda;
    } catch (const std::exception& e) {
      errors[static_cast<std::size_t>(i)] = e.what();
    }
  };

#ifdef PLC_HAVE_OPENMP
  if (exec == Execution::Parallel) {
    const int threads = effective_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (int i = 0; i < cfg.reps; ++i) body(i);
  } else {
    for (int i = 0; i < cfg.reps; ++i) body(i);
  }
#else
  (void)exec;
  for (int i = 0; i < cfg.reps; ++i) body(i);
#endif

  for (int i = 0; i < cfg.reps; ++i)
    if (!errors[static_cast<std::size_t>(i)].empty())
      throw NumericError("replication " + std::to_string(i) + ": " +
                         errors[static_cast<std::size_t>(i)]);
  retries = 0;
  for (int c : retry_count) retries += c;
  return lambdas;
}

}  // namespace

void SimConfig::validate() const {
  if (n < 2) throw ArgumentError("SimConfig: n must be >= 2");
  if (reps < 1) throw ArgumentError("SimConfig: reps must be >= 1");
  optimizer.validate();
}

int effective_threads() {
#ifdef PLC_HAVE_OPENMP
  int threads = omp_get_max_threads();
  if (const char* env = std::getenv("PLC_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1) threads = std::min(threads, cap);
  }
  return std::max(threads, 1);
#else
  return 1;
#endif
}

Sample sample_mixture(MixtureFamily family, double theta1, double theta2, double eta, int n,
                      RandomStream& stream) {
  check_domain(family, theta1, eta);
  check_domain(family, theta2, eta);
  if (n < 2) throw ArgumentError("sample_mixture: n must be >= 2");
  std::vector<double> z(static_cast<std::size_t>(n));
  for (double& v : z) {
    const double theta = stream.next_uniform() < 0.5 ? theta1 : theta2;
    const double g = stream.next_normal();
    v = family == MixtureFamily::MeanMixture ? theta + eta * g : eta + std::sqrt(theta) * g;
  }
  return Sample(std::move(z));
}

NullSimSummary simulate_null(const SimConfig& cfg, double theta0, double eta0,
                             const std::vector<double>& percentile_points, Execution exec) {
  cfg.validate();
  check_domain(cfg.family, theta0, eta0);
  NullSimSummary out;
  out.lambdas = run_replications(cfg, theta0, eta0, exec, out.retries);
  if (out.retries > std::max(1, cfg.reps / 100))
    throw SimulationIntegrityError("simulate_null: more than 1% degenerate-sample retries");
  out.lambdas_by_rep = out.lambdas;
  std::sort(out.lambdas.begin(), out.lambdas.end());
  out.mean = mean(out.lambdas);
  std::size_t zeros = 0;
  for (double l : out.lambdas)
    if (l < cfg.optimizer.zero_threshold) ++zeros;
  out.zero_fraction = static_cast<double>(zeros) / static_cast<double>(cfg.reps);
  out.c_squared_hat = 2.0 * out.mean;
  for (double p : percentile_points) out.percentiles[p] = percentile_sorted(out.lambdas, p);
  return out;
}

double critical_value(const SimConfig& cfg, double alpha, Execution exec) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ArgumentError("critical_value: alpha outside (0,1)");
  const double theta0 = cfg.family == MixtureFamily::MeanMixture ? 0.0 : 1.0;
  const double eta0 = cfg.family == MixtureFamily::MeanMixture ? 1.0 : 0.0;
  const NullSimSummary s = simulate_null(cfg, theta0, eta0, {}, exec);
  return percentile_sorted(s.lambdas, 100.0 * (1.0 - alpha));
}

double estimate_c_squared(const NullSimSummary& summary) { return 2.0 * summary.mean; }

PowerCurve power_curve(const SimConfig& cfg, const std::vector<double>& grid, double alpha,
                       int null_reps, Execution exec) {
  cfg.validate();
  if (grid.empty()) throw ArgumentError("power_curve: empty grid");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw ArgumentError("power_curve: grid must strictly increase");
  if (null_reps < 1) throw ArgumentError("power_curve: null_reps must be >= 1");

  SimConfig null_cfg = cfg;
  null_cfg.reps = null_reps;
  PowerCurve out;
  out.grid = grid;
  out.alpha = alpha;
  out.n = cfg.n;
  out.critical_value = critical_value(null_cfg, alpha, exec);

  std::vector<double> lambdas(static_cast<std::size_t>(cfg.reps));
  std::vector<std::string> errors(static_cast<std::size_t>(cfg.reps));
  for (std::size_t gi = 0; gi < grid.size(); ++gi) {
    const double g = grid[gi];
    double th1, th2, eta;
    if (cfg.family == MixtureFamily::MeanMixture) {
      th1 = -g;
      th2 = g;
      eta = 1.0;
    } else {
      if (!(g >= 1.0)) throw ArgumentError("power_curve: variance grid values must be >= 1");
      th1 = 1.0;
      th2 = g * g * g * g;
      eta = 0.0;
    }
    std::fill(errors.begin(), errors.end(), std::string());
    auto body = [&](int i) {
      try {
        // streams live beyond the null block: offset by null_reps, keyed per (grid, rep)
        RandomStream stream(cfg.seed, kRetryStride * (gi + 1) +
                                          static_cast<std::uint64_t>(i) +
                                          static_cast<std::uint64_t>(null_reps));
        Sample s = sample_mixture(cfg.family, th1, th2, eta, cfg.n, stream);
        lambdas[static_cast<std::size_t>(i)] =
            plc_statistic(s, cfg.family, cfg.optimizer).lambda;
      } catch (const std::exception& e) {
        errors[static_cast<std::size_t>(i)] = e.what();
      }
    };
#ifdef PLC_HAVE_OPENMP
    if (exec == Execution::Parallel) {
      const int threads = effective_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
      for (int i = 0; i < cfg.reps; ++i) body(i);
    } else {
      for (int i = 0; i < cfg.reps; ++i) body(i);
    }
#else
    for (int i = 0; i < cfg.reps; ++i) body(i);
#endif
    for (int i = 0; i < cfg.reps; ++i)
      if (!errors[static_cast<std::size_t>(i)].empty())
        throw NumericError("power replication " + std::to_string(i) + ": " +
                           errors[static_cast<std::size_t>(i)]);
    std::size_t rejections = 0;
    for (double l : lambdas)
      if (l > out.critical_value) ++rejections;
    out.power.push_back(static_cast<double>(rejections) / static_cast<double>(cfg.reps));
  }
  return out;
}

void write_raw_lambdas(const NullSimSummary& summary, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw ArgumentError("write_raw_lambdas: cannot open " + path);
  f << "rep,lambda\n";
  const auto& raw = summary.lambdas_by_rep.empty() ? summary.lambdas : summary.lambdas_by_rep;
  for (std::size_t i = 0; i < raw.size(); ++i) f << i << ',' << raw[i] << '\n';
}

}  // namespace plc
