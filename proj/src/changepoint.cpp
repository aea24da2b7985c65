#include "plc/changepoint.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <string>
#include <tuple>

#include "plc/errors.hpp"

#ifdef PLC_HAVE_OPENMP
#include <omp.h>
#endif

namespace plc {

namespace {

std::mutex g_crit_mutex;
std::map<std::tuple<MixtureFamily, int, double, std::uint64_t, int>, double> g_crit_cache;

double cached_critical_value(MixtureFamily family, int window, double alpha,
                             const SimConfig& cfg, Execution exec) {
  const auto key = std::make_tuple(family, window, alpha, cfg.seed, cfg.reps);
  {
    std::lock_guard<std::mutex> lock(g_crit_mutex);
    const auto it = g_crit_cache.find(key);
    if (it != g_crit_cache.end()) return it->second;
  }
  SimConfig null_cfg = cfg;
  null_cfg.family = family;
  null_cfg.n = window;
  const double crit = critical_value(null_cfg, alpha, exec);
  std::lock_guard<std::mutex> lock(g_crit_mutex);
  g_crit_cache.emplace(key, crit);
  return crit;
}

}  // namespace

void SignalSpec::validate() const {
  if (length < 1) throw ArgumentError("SignalSpec: length must be >= 1");
  if (levels.size() != breakpoints.size() + 1)
    throw ArgumentError("SignalSpec: need breakpoints.size() + 1 levels");
  int prev = 0;
  for (int b : breakpoints) {
    if (b <= prev || b >= length)
      throw ArgumentError("SignalSpec: breakpoints must strictly increase inside (0, length)");
    prev = b;
  }
  if (!(noise_sd > 0.0)) throw ArgumentError("SignalSpec: noise_sd must be > 0");
}

std::vector<double> generate_jump_signal(const SignalSpec& spec) {
  spec.validate();
  RandomStream stream(spec.seed, 0);
  std::vector<double> y(static_cast<std::size_t>(spec.length));
  std::size_t seg = 0;
  for (int t = 0; t < spec.length; ++t) {
    while (seg < spec.breakpoints.size() && t >= spec.breakpoints[seg]) ++seg;
    y[static_cast<std::size_t>(t)] = spec.levels[seg] + spec.noise_sd * stream.next_normal();
  }
  return y;
}

WindowScanResult window_scan(const std::vector<double>& signal, int window, int step,
                             MixtureFamily family, double alpha, const SimConfig& cfg,
                             Execution exec) {
  if (window < 4) throw ArgumentError("window_scan: window must be >= 4");
  if (window > static_cast<int>(signal.size()))
    throw ArgumentError("window_scan: window exceeds signal length");
  if (step < 1) throw ArgumentError("window_scan: step must be >= 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ArgumentError("window_scan: alpha outside (0,1)");

  WindowScanResult out;
  out.window = window;
  out.family = family;
  out.critical_value = cached_critical_value(family, window, alpha, cfg, exec);

  std::vector<int> starts;
  for (int s = 0; s + window <= static_cast<int>(signal.size()); s += step) starts.push_back(s);
  const int npos = static_cast<int>(starts.size());
  std::vector<double> lambdas(static_cast<std::size_t>(npos));
  std::vector<char> valid(static_cast<std::size_t>(npos), 0);
  std::vector<std::string> errors(static_cast<std::size_t>(npos));

  auto body = [&](int i) {
    const int s = starts[static_cast<std::size_t>(i)];
    std::vector<double> w(signal.begin() + s, signal.begin() + s + window);
    try {
      Sample ws(std::move(w));
      lambdas[static_cast<std::size_t>(i)] = plc_statistic(ws, family, cfg.optimizer).lambda;
      valid[static_cast<std::size_t>(i)] = 1;
    } catch (const DegenerateSampleError&) {
      // zero-variance window: recorded as missing
    } catch (const std::exception& e) {
      errors[static_cast<std::size_t>(i)] = e.what();
    }
  };

#ifdef PLC_HAVE_OPENMP
  if (exec == Execution::Parallel) {
    const int threads = effective_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (int i = 0; i < npos; ++i) body(i);
  } else {
    for (int i = 0; i < npos; ++i) body(i);
  }
#else
  (void)exec;
  for (int i = 0; i < npos; ++i) body(i);
#endif

  for (int i = 0; i < npos; ++i)
    if (!errors[static_cast<std::size_t>(i)].empty())
      throw NumericError("window at " + std::to_string(starts[static_cast<std::size_t>(i)]) +
                         ": " + errors[static_cast<std::size_t>(i)]);

  for (int i = 0; i < npos; ++i) {
    if (!valid[static_cast<std::size_t>(i)]) {
      ++out.missing;
      continue;
    }
    out.centers.push_back(starts[static_cast<std::size_t>(i)] + window / 2);
    out.lambdas.push_back(lambdas[static_cast<std::size_t>(i)]);
  }
  out.detections = detect_changepoints(out, std::max(1, window / 2));
  return out;
}

std::vector<int> detect_changepoints(const WindowScanResult& result, int min_separation) {
  if (min_separation < 1) throw ArgumentError("detect_changepoints: min_separation must be >= 1");
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < result.lambdas.size(); ++i)
    if (result.lambdas[i] > result.critical_value) order.push_back(i);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (result.lambdas[a] != result.lambdas[b]) return result.lambdas[a] > result.lambdas[b];
    return result.centers[a] < result.centers[b];  // deterministic tie-break
  });
  std::vector<int> picked;
  for (std::size_t i : order) {
    const int c = result.centers[i];
    const bool clear = std::none_of(picked.begin(), picked.end(), [&](int p) {
      return std::abs(p - c) < min_separation;
    });
    if (clear) picked.push_back(c);
  }
  std::sort(picked.begin(), picked.end());
  return picked;
}

}  // namespace plc
