#pragma once

#include <cstdint>
#include <vector>

#include "plc/simulation.hpp"

namespace plc {

/// Piecewise-constant mean plus Gaussian noise; the Figure-1 style test bed.
struct SignalSpec {
  int length = 0;
  std::vector<int> breakpoints;  // strictly increasing, inside (0, length)
  std::vector<double> levels;    // breakpoints.size() + 1 entries
  double noise_sd = 1.0;
  std::uint64_t seed = 1;

  void validate() const;
};

std::vector<double> generate_jump_signal(const SignalSpec& spec);

/// Per-window statistics of one scan. Zero-variance windows are dropped from
/// (centers, lambdas) and counted in missing.
struct WindowScanResult {
  std::vector<int> centers;
  std::vector<double> lambdas;
  int window = 0;
  MixtureFamily family = MixtureFamily::MeanMixture;
  double critical_value = 0.0;
  std::vector<int> detections;
  int missing = 0;
};

/// Slide a width-`window` segment through the signal by `step`, test each
/// segment's values for two-component structure under `family`, and flag the
/// centers whose lambda exceeds the simulated (1-alpha) null critical value
/// at sample size = window. Critical values are cached per
/// (family, window, alpha, seed, reps) within the process. Windows run
/// concurrently; output order is by center regardless of scheduling.
WindowScanResult window_scan(const std::vector<double>& signal, int window, int step,
                             MixtureFamily family, double alpha, const SimConfig& cfg,
                             Execution exec = Execution::Parallel);

/// Local maxima of lambda among exceedances, greedily kept in decreasing
/// lambda order while suppressing neighbors closer than min_separation.
std::vector<int> detect_changepoints(const WindowScanResult& result, int min_separation);

}  // namespace plc
