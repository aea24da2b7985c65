#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "plc/changepoint.hpp"
#include "plc/errors.hpp"
#include "plc/stats.hpp"

using namespace plc;

namespace {

SimConfig scan_cfg(int window, std::uint64_t seed = 101, int reps = 600) {
  SimConfig cfg;
  cfg.family = MixtureFamily::VarianceMixture;
  cfg.n = window;
  cfg.reps = reps;
  cfg.seed = seed;
  return cfg;
}

// piecewise-sd noise signal: the amplitude-jump scenario
std::vector<double> amplitude_signal(const std::vector<int>& breaks,
                                     const std::vector<double>& sds, int length,
                                     RandomStream& stream) {
  std::vector<double> y(static_cast<std::size_t>(length));
  std::size_t seg = 0;
  for (int t = 0; t < length; ++t) {
    while (seg < breaks.size() && t >= breaks[static_cast<std::size_t>(seg)]) ++seg;
    y[static_cast<std::size_t>(t)] = sds[seg] * stream.next_normal();
  }
  return y;
}

}  // namespace

TEST_CASE("jump signal generator: levels, noise, determinism") {
  SignalSpec spec;
  spec.length = 100;
  spec.breakpoints = {50};
  spec.levels = {0.0, 3.0};
  spec.noise_sd = 1e-6;
  spec.seed = 7;
  const auto y = generate_jump_signal(spec);
  REQUIRE(y.size() == 100);
  for (int t = 0; t < 50; ++t) CHECK(std::fabs(y[static_cast<std::size_t>(t)]) < 1e-4);
  for (int t = 50; t < 100; ++t) CHECK(std::fabs(y[static_cast<std::size_t>(t)] - 3.0) < 1e-4);
  CHECK(generate_jump_signal(spec) == y);

  SignalSpec noise;
  noise.length = 10000;
  noise.levels = {0.0};
  noise.noise_sd = 0.7;
  noise.seed = 8;
  const auto z = generate_jump_signal(noise);
  CHECK(sample_variance(z) == doctest::Approx(0.49).epsilon(0.05));

  SignalSpec bad = spec;
  bad.breakpoints = {50, 40};
  CHECK_THROWS_AS(generate_jump_signal(bad), ArgumentError);
  bad = spec;
  bad.levels = {0.0};
  CHECK_THROWS_AS(generate_jump_signal(bad), ArgumentError);
}

TEST_CASE("window_scan: geometry, accounting, argument checks") {
  RandomStream stream(11, 0);
  std::vector<double> signal(300);
  for (double& v : signal) v = stream.next_normal();
  const auto res = window_scan(signal, 50, 10, MixtureFamily::VarianceMixture, 0.05,
                               scan_cfg(50));
  CHECK(res.centers.size() == 26);  // (300 - 50)/10 + 1 positions
  CHECK(res.lambdas.size() == res.centers.size());
  CHECK(res.missing == 0);
  for (std::size_t i = 1; i < res.centers.size(); ++i)
    CHECK(res.centers[i] - res.centers[i - 1] == 10);
  for (int d : res.detections) {
    const auto it = std::find(res.centers.begin(), res.centers.end(), d);
    REQUIRE(it != res.centers.end());
    CHECK(res.lambdas[static_cast<std::size_t>(it - res.centers.begin())] >
          res.critical_value);
  }
  CHECK_THROWS_AS(window_scan(signal, 2, 1, MixtureFamily::MeanMixture, 0.05, scan_cfg(2)),
                  ArgumentError);
  CHECK_THROWS_AS(window_scan(signal, 400, 1, MixtureFamily::MeanMixture, 0.05, scan_cfg(400)),
                  ArgumentError);
  CHECK_THROWS_AS(window_scan(signal, 50, 0, MixtureFamily::MeanMixture, 0.05, scan_cfg(50)),
                  ArgumentError);
}

TEST_CASE("window_scan: constant stretches are missing, fully constant signal detects nothing") {
  std::vector<double> flat(200, 1.0);
  const auto res = window_scan(flat, 50, 25, MixtureFamily::MeanMixture, 0.05,
                               scan_cfg(50, 103, 200));
  CHECK(res.centers.empty());
  CHECK(res.missing == 7);
  CHECK(res.detections.empty());
}

TEST_CASE("window_scan: mean-family lambdas are invariant under shift and scale") {
  RandomStream stream(13, 0);
  std::vector<double> signal(200);
  for (double& v : signal) v = stream.next_normal();
  std::vector<double> moved(signal.size());
  for (std::size_t i = 0; i < signal.size(); ++i) moved[i] = -2.5 + 3.0 * signal[i];
  const auto a = window_scan(signal, 40, 20, MixtureFamily::MeanMixture, 0.05,
                             scan_cfg(40, 104, 200));
  const auto b = window_scan(moved, 40, 20, MixtureFamily::MeanMixture, 0.05,
                             scan_cfg(40, 104, 200));
  REQUIRE(a.lambdas.size() == b.lambdas.size());
  for (std::size_t i = 0; i < a.lambdas.size(); ++i)
    CHECK(std::fabs(a.lambdas[i] - b.lambdas[i]) < 1e-6);
}

TEST_CASE("detect_changepoints: selection logic on a synthetic result") {
  WindowScanResult r;
  r.critical_value = 1.0;
  r.centers = {10, 20, 30, 40, 50, 60};
  r.lambdas = {0.5, 2.0, 3.0, 2.5, 0.2, 4.0};
  CHECK(detect_changepoints(r, 15) == std::vector<int>{30, 60});
  CHECK(detect_changepoints(r, 10) == std::vector<int>{20, 30, 40, 60});
  r.lambdas = {0.5, 0.9, 0.7, 0.3, 0.2, 0.8};
  CHECK(detect_changepoints(r, 10).empty());
  r.lambdas = {0.5, 2.0, 0.7, 0.3, 0.2, 0.8};
  CHECK(detect_changepoints(r, 10) == std::vector<int>{20});
  CHECK_THROWS_AS(detect_changepoints(r, 0), ArgumentError);
}

TEST_CASE("amplitude jumps: both change points localized in most seeded trials") {
  // sd profile 1 -> 4 -> 1 with jumps at 200 and 400; variance-family scan
  const int window = 100, step = 10;
  const SimConfig cfg = scan_cfg(window, 105, 800);
  int good = 0;
  const int trials = 200;
  for (int trial = 0; trial < trials; ++trial) {
    RandomStream stream(9000 + trial, 0);
    const auto signal = amplitude_signal({200, 400}, {1.0, 4.0, 1.0}, 600, stream);
    const auto res = window_scan(signal, window, step, MixtureFamily::VarianceMixture, 0.01,
                                 cfg);
    const auto det = detect_changepoints(res, window);
    const bool ok = det.size() == 2 && std::abs(det[0] - 200) <= window / 2 &&
                    std::abs(det[1] - 400) <= window / 2;
    good += ok;
  }
  // straight Monte Carlo of this configuration put the success rate near 0.97
  CHECK(good >= static_cast<int>(0.9 * trials));
}
