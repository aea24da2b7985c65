// Times the Monte Carlo engine's serial reference loop against the OpenMP
// one and verifies both produce identical lambdas.
#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "plc/simulation.hpp"

using Clock = std::chrono::steady_clock;

static double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int main(int argc, char** argv) {
  plc::SimConfig cfg;
  cfg.family = plc::MixtureFamily::VarianceMixture;
  cfg.n = argc > 1 ? std::atoi(argv[1]) : 200;
  cfg.reps = argc > 2 ? std::atoi(argv[2]) : 400;
  cfg.seed = 42;

  std::printf("engine benchmark: variance family, n=%d, reps=%d, threads=%d\n", cfg.n, cfg.reps,
              plc::effective_threads());

  auto t0 = Clock::now();
  const auto serial = plc::simulate_null(cfg, 1.0, 0.0, {}, plc::Execution::Serial);
  const double ts = seconds_since(t0);

  t0 = Clock::now();
  const auto parallel = plc::simulate_null(cfg, 1.0, 0.0, {}, plc::Execution::Parallel);
  const double tp = seconds_since(t0);

  bool identical = serial.lambdas.size() == parallel.lambdas.size();
  for (std::size_t i = 0; identical && i < serial.lambdas.size(); ++i)
    identical = serial.lambdas[i] == parallel.lambdas[i];

  std::printf("  serial reference: %8.3f s  (%.2f ms/rep)\n", ts, 1e3 * ts / cfg.reps);
  std::printf("  openmp parallel:  %8.3f s  (%.2f ms/rep)\n", tp, 1e3 * tp / cfg.reps);
  std::printf("  speedup: %.2fx, outputs bit-identical: %s\n", ts / tp,
              identical ? "yes" : "NO");
  return identical ? 0 : 1;
}
