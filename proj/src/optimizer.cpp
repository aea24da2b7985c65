#include "plc/optimizer.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include "plc/errors.hpp"
#include "plc/rng.hpp"

namespace plc {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;
constexpr double kLog2 = 0.6931471805599453094;

inline double logistic(double d) {
  if (d > 36.0) return 1.0;
  if (d < -36.0) return 0.0;
  return 1.0 / (1.0 + std::exp(-d));
}

// log(0.5 e^{a1} + 0.5 e^{a2}) = max(a1,a2) - log 2 + log1p(e^{-|a1-a2|})
inline double log_half_sum(double a1, double a2) {
  const double m = a1 > a2 ? a1 : a2;
  if (m == -std::numeric_limits<double>::infinity()) return m;
  return m - kLog2 + std::log1p(std::exp(-std::fabs(a1 - a2)));
}

// Plugged-nuisance mixture likelihood with per-sample precomputation.
// MeanMixture: parameters are the component means, eta^2 fixed;
// VarianceMixture: parameters are the component variances, eta fixed.
struct Plugged {
  MixtureFamily family;
  std::vector<double> data;  // mean family: z_i; variance family: s_i = (z_i - eta)^2
  double inv_two_eta2 = 0.0; // mean family only
  double norm = 0.0;         // additive constant per observation
  std::size_t n = 0;

  Plugged(const Sample& sample, MixtureFamily fam, const NullFit& null) : family(fam) {
    n = sample.size();
    data.reserve(n);
    if (family == MixtureFamily::MeanMixture) {
      const double eta2 = null.eta_hat * null.eta_hat;
      inv_two_eta2 = 0.5 / eta2;
      data = sample.values();
      norm = -0.5 * (kLog2Pi + std::log(eta2));
    } else {
      for (double z : sample.values()) {
        const double d = z - null.eta_hat;
        data.push_back(d * d);
      }
      norm = -0.5 * kLog2Pi;
    }
  }

  // Returns -inf (instead of throwing) on degenerate corners so the simplex
  // search can probe them harmlessly.
  double loglik(double t1, double t2) const {
    double total = 0.0;
    if (family == MixtureFamily::MeanMixture) {
      const double c = inv_two_eta2;
      for (double z : data) {
        const double q1 = z - t1, q2 = z - t2;
        total += log_half_sum(-c * q1 * q1, -c * q2 * q2);
      }
    } else {
      const double l1 = -0.5 * std::log(t1), b1 = 0.5 / t1;
      const double l2 = -0.5 * std::log(t2), b2 = 0.5 / t2;
      for (double s : data) total += log_half_sum(l1 - b1 * s, l2 - b2 * s);
    }
    total += static_cast<double>(n) * norm;
    if (std::isnan(total)) return -std::numeric_limits<double>::infinity();
    return total;
  }

  // One EM step in place; returns false when a component collapsed.
  bool em_update(double& t1, double& t2) const {
    double sw = 0.0, sw1 = 0.0, sw2 = 0.0;
    if (family == MixtureFamily::MeanMixture) {
      const double c = inv_two_eta2;
      for (double z : data) {
        const double q1 = z - t1, q2 = z - t2;
        const double w = logistic(c * (q2 * q2 - q1 * q1));
        sw += w;
        sw1 += w * z;
        sw2 += (1.0 - w) * z;
      }
    } else {
      const double dl = -0.5 * std::log(t1 / t2);
      const double db = 0.5 / t1 - 0.5 / t2;
      for (double s : data) {
        const double w = logistic(dl - db * s);
        sw += w;
        sw1 += w * s;
        sw2 += (1.0 - w) * s;
      }
    }
    const double swc = static_cast<double>(n) - sw;
    if (sw < 1e-12 || swc < 1e-12) return false;
    t1 = sw1 / sw;
    t2 = sw2 / swc;
    if (family == MixtureFamily::VarianceMixture) {
      t1 = std::max(t1, 1e-300);
      t2 = std::max(t2, 1e-300);
    }
    return true;
  }
};

struct NelderMeadResult {
  double x1, x2, f;
};

// Standard 2-D Nelder-Mead (reflection 1, expansion 2, contraction 0.5,
// shrink 0.5) maximizing f; terminates on simplex size and f-spread.
NelderMeadResult nelder_mead_2d(const std::function<double(double, double)>& f, double x1,
                                double x2, double step, double xtol, double ftol,
                                int max_evals) {
  struct Pt {
    double a, b, v;
  };
  std::array<Pt, 3> s;
  int evals = 0;
  auto eval = [&](double a, double b) {
    ++evals;
    return f(a, b);
  };
  s[0] = {x1, x2, eval(x1, x2)};
  s[1] = {x1 + step, x2, eval(x1 + step, x2)};
  s[2] = {x1, x2 + step, eval(x1, x2 + step)};
  auto order = [&] { std::sort(s.begin(), s.end(), [](const Pt& p, const Pt& q) { return p.v > q.v; }); };
  order();
  while (evals < max_evals) {
    const double size = std::max({std::fabs(s[1].a - s[0].a), std::fabs(s[1].b - s[0].b),
                                  std::fabs(s[2].a - s[0].a), std::fabs(s[2].b - s[0].b)});
    if (size < xtol && s[0].v - s[2].v < ftol) break;
    const double ca = 0.5 * (s[0].a + s[1].a), cb = 0.5 * (s[0].b + s[1].b);
    const double ra = ca + (ca - s[2].a), rb = cb + (cb - s[2].b);
    const double rv = eval(ra, rb);
    if (rv > s[0].v) {
      const double ea = ca + 2.0 * (ca - s[2].a), eb = cb + 2.0 * (cb - s[2].b);
      const double ev = eval(ea, eb);
      s[2] = ev > rv ? Pt{ea, eb, ev} : Pt{ra, rb, rv};
    } else if (rv > s[1].v) {
      s[2] = {ra, rb, rv};
    } else {
      const bool outside = rv > s[2].v;
      const double base_a = outside ? ra : s[2].a, base_b = outside ? rb : s[2].b;
      const double ka = ca + 0.5 * (base_a - ca), kb = cb + 0.5 * (base_b - cb);
      const double kv = eval(ka, kb);
      if (kv > (outside ? rv : s[2].v)) {
        s[2] = {ka, kb, kv};
      } else {  // shrink toward the best vertex
        for (int i = 1; i < 3; ++i) {
          s[i].a = s[0].a + 0.5 * (s[i].a - s[0].a);
          s[i].b = s[0].b + 0.5 * (s[i].b - s[0].b);
          s[i].v = eval(s[i].a, s[i].b);
        }
      }
    }
    order();
  }
  return {s[0].a, s[0].b, s[0].v};
}

std::vector<std::pair<double, double>> make_starts(const Sample& sample, MixtureFamily family,
                                                   const NullFit& null,
                                                   const OptimizerOptions& opts) {
  std::vector<std::pair<double, double>> starts;
  std::vector<double> sorted;
  if (family == MixtureFamily::MeanMixture) {
    sorted = sample.values();
  } else {
    sorted.reserve(sample.size());
    for (double z : sample.values()) {
      const double d = z - null.eta_hat;
      sorted.push_back(d * d);
    }
  }
  std::sort(sorted.begin(), sorted.end());
  const auto n = sorted.size();
  auto mean_range = [&](std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += sorted[i];
    return s / static_cast<double>(hi - lo);
  };

  if (family == MixtureFamily::MeanMixture) {
    const double th = null.theta_hat, sd = null.eta_hat;
    starts.emplace_back(th - 0.5 * sd, th + 0.5 * sd);
    // moment split guided by the sample skewness
    double m3 = 0.0;
    for (double z : sample.values()) {
      const double u = (z - th) / sd;
      m3 += u * u * u;
    }
    m3 /= static_cast<double>(n);
    const double tilt = std::clamp(0.5 * m3, -1.5, 1.5);
    starts.emplace_back(th - sd * (1.0 - tilt), th + sd * (1.0 + tilt));
  } else {
    const double th = null.theta_hat;
    starts.emplace_back(th * std::exp(-0.5), th * std::exp(0.5));
    starts.emplace_back(0.5 * th, 2.0 * th);
  }

  // quantile splits of the sorted data / squared residuals
  for (double frac : {0.25, 0.5, 0.75}) {
    const auto k = std::clamp<std::size_t>(static_cast<std::size_t>(std::lround(frac * n)), 1, n - 1);
    double lo = mean_range(0, k), hi = mean_range(k, n);
    if (family == MixtureFamily::VarianceMixture) {
      lo = std::max(lo, 1e-12 * null.theta_hat);
      hi = std::max(hi, 1e-12 * null.theta_hat);
    }
    starts.emplace_back(lo, hi);
  }
  // smallest-k spike starts: a narrow component hugging the near-mean points
  if (family == MixtureFamily::VarianceMixture) {
    for (std::size_t k : {std::size_t{1}, std::size_t{2}, std::size_t{3}}) {
      if (k >= n) break;
      starts.emplace_back(std::max(mean_range(0, k), 1e-10 * null.theta_hat), mean_range(k, n));
    }
  }
  // at least one random start, more if n_starts asks for them; the stream is
  // a fixed function of the inputs so the whole fit stays deterministic
  RandomStream stream(0x9E3779B97F4A7C15ULL ^ static_cast<std::uint64_t>(n),
                      static_cast<std::uint64_t>(opts.n_starts));
  const std::size_t want = std::max(starts.size() + 1, static_cast<std::size_t>(opts.n_starts));
  while (starts.size() < want) {
    if (family == MixtureFamily::MeanMixture) {
      const double a = null.theta_hat + null.eta_hat * 4.0 * (stream.next_uniform() - 0.5);
      const double b = null.theta_hat + null.eta_hat * 4.0 * (stream.next_uniform() - 0.5);
      starts.emplace_back(std::min(a, b), std::max(a, b));
    } else {
      const double a = null.theta_hat * std::exp(4.0 * (stream.next_uniform() - 0.5));
      const double b = null.theta_hat * std::exp(4.0 * (stream.next_uniform() - 0.5));
      starts.emplace_back(std::min(a, b), std::max(a, b));
    }
  }
  return starts;
}

}  // namespace

void OptimizerOptions::validate() const {
  if (em_max_iter < 1 || n_starts < 1) throw ArgumentError("OptimizerOptions: counts must be >= 1");
  if (!(em_tol > 0.0) || !(polish_tol > 0.0) || !(zero_threshold > 0.0))
    throw ArgumentError("OptimizerOptions: tolerances must be > 0");
}

EmStepResult em_step(const Sample& sample, MixtureFamily family, double theta1, double theta2,
                     double eta_hat) {
  check_domain(family, theta1, eta_hat);
  check_domain(family, theta2, eta_hat);
  NullFit anchor;
  anchor.eta_hat = eta_hat;
  anchor.theta_hat = family == MixtureFamily::MeanMixture ? sample.mean() : sample.variance();
  Plugged plugged(sample, family, anchor);
  EmStepResult out{theta1, theta2, false};
  out.collapsed = !plugged.em_update(out.theta1, out.theta2);
  return out;
}

AltFit fit_alternative(const Sample& sample, MixtureFamily family, const NullFit& null,
                       const OptimizerOptions& opts) {
  opts.validate();
  const Plugged plugged(sample, family, null);
  const double diag_loglik = plugged.loglik(null.theta_hat, null.theta_hat);
  const double scale =
      family == MixtureFamily::MeanMixture ? null.eta_hat : std::max(null.theta_hat, 1e-300);

  const bool log_space = family == MixtureFamily::VarianceMixture;
  auto objective = [&](double a, double b) {
    return log_space ? plugged.loglik(std::exp(a), std::exp(b)) : plugged.loglik(a, b);
  };

  AltFit best;
  best.theta1_hat = best.theta2_hat = null.theta_hat;
  best.loglik = diag_loglik;
  best.converged = true;

  std::vector<std::pair<double, double>> polished;  // dedup of simplex launch points
  for (const auto& [s1, s2] : make_starts(sample, family, null, opts)) {
    double t1 = s1, t2 = s2;
    const double gap_start = std::fabs(s2 - s1);
    double prev = plugged.loglik(t1, t2);
    double gap_checkpoint = gap_start;
    int iters = 0;
    bool collapsed = false;
    for (; iters < opts.em_max_iter; ++iters) {
      if (!plugged.em_update(t1, t2)) {
        collapsed = true;
        break;
      }
      const double gap = std::fabs(t1 - t2);
      if (gap < 1e-12 * scale) {
        prev = plugged.loglik(t1, t2);
        break;
      }
      const double cur = plugged.loglik(t1, t2);
      const double gain = cur - prev;
      prev = cur;
      if (gain < opts.em_tol) break;
      // Mean family only: a path still below the null value whose separation
      // keeps shrinking is collapsing into the flat quartic valley around the
      // diagonal, a crawl that takes thousands of steps and ends at a point
      // already tracked. The variance family keeps the full loop: its
      // near-diagonal maxima can sit behind long shallow approaches.
      if (family == MixtureFamily::MeanMixture && (iters & 31) == 31) {
        if (cur <= diag_loglik + 1e-12 && gap < gap_checkpoint) break;
        gap_checkpoint = gap;
      }
    }
    if (collapsed) continue;
    // EM sliding back into the diagonal from below: its limit is the null
    // point, which is already a tracked candidate, so the polish would only
    // crawl down the flat valley. Paths whose separation grew keep their
    // polish: they may be escaping toward an off-diagonal maximum.
    if (prev <= diag_loglik + 1e-12 && std::fabs(t2 - t1) <= gap_start) continue;

    double a = log_space ? std::log(t1) : t1;
    double b = log_space ? std::log(t2) : t2;
    const bool dup = std::any_of(polished.begin(), polished.end(), [&](const auto& p) {
      return std::fabs(p.first - a) < 1e-8 && std::fabs(p.second - b) < 1e-8;
    });
    double value = prev;
    if (!dup) {
      polished.emplace_back(a, b);
      const double step = log_space ? 0.05 : 0.05 * scale;
      const double xtol = log_space ? 1e-7 : 1e-7 * scale;
      const auto r = nelder_mead_2d(objective, a, b, step, xtol, opts.polish_tol, 500);
      if (r.f > value) {
        value = r.f;
        a = r.x1;
        b = r.x2;
      }
    }
    if (value > best.loglik) {
      best.loglik = value;
      best.theta1_hat = log_space ? std::exp(a) : a;
      best.theta2_hat = log_space ? std::exp(b) : b;
      best.iterations = iters;
      best.converged = iters < opts.em_max_iter;
    }
  }
  if (best.theta1_hat > best.theta2_hat) std::swap(best.theta1_hat, best.theta2_hat);
  return best;
}

PlcOutcome plc_statistic(const Sample& sample, MixtureFamily family,
                         const OptimizerOptions& opts) {
  PlcOutcome out;
  out.null = fit_null(sample, family);
  out.alt = fit_alternative(sample, family, out.null, opts);
  // baseline from the same evaluation path as the alternative, so rounding
  // crumbs cancel instead of leaking into lambda
  const Plugged plugged(sample, family, out.null);
  const double base = plugged.loglik(out.null.theta_hat, out.null.theta_hat);
  out.lambda = std::max(0.0, 2.0 * (out.alt.loglik - base));
  out.is_zero = out.lambda < opts.zero_threshold;
  return out;
}

}  // namespace plc
