#include "plc/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "plc/asymptotics.hpp"
#include "plc/changepoint.hpp"
#include "plc/csv.hpp"
#include "plc/errors.hpp"
#include "plc/simulation.hpp"
#include "plc/stats.hpp"

namespace plc::cli {

namespace {

using json = nlohmann::ordered_json;

MixtureFamily parse_family(const std::string& s) {
  if (s == "mean") return MixtureFamily::MeanMixture;
  if (s == "variance") return MixtureFamily::VarianceMixture;
  throw CLI::ValidationError("--family", "expected 'mean' or 'variance', got '" + s + "'");
}

json optimizer_json(const OptimizerOptions& o) {
  return json{{"em_max_iter", o.em_max_iter},
              {"em_tol", o.em_tol},
              {"polish_tol", o.polish_tol},
              {"n_starts", o.n_starts},
              {"zero_threshold", o.zero_threshold}};
}

json base_config(const std::string& subcommand, const std::string& family,
                 const OptimizerOptions& opts) {
  return json{{"subcommand", subcommand},
              {"family", family},
              {"threads", effective_threads()},
              {"optimizer", optimizer_json(opts)}};
}

// "LO:HI:STEPS" -> inclusive linear grid
std::vector<double> parse_grid(const std::string& s) {
  double lo, hi;
  int steps;
  char c1, c2;
  std::istringstream is(s);
  if (!(is >> lo >> c1 >> hi >> c2 >> steps) || c1 != ':' || c2 != ':' || !is.eof())
    throw CLI::ValidationError("--grid", "expected LO:HI:STEPS, got '" + s + "'");
  if (steps < 2 || !(hi > lo))
    throw CLI::ValidationError("--grid", "need HI > LO and STEPS >= 2");
  std::vector<double> grid(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i)
    grid[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (steps - 1);
  return grid;
}

std::vector<double> parse_percentiles(const std::string& s) {
  std::vector<double> out;
  std::istringstream is(s);
  std::string tok;
  while (std::getline(is, tok, ',')) {
    if (tok.empty()) continue;
    out.push_back(std::stod(tok));
  }
  if (out.empty()) throw CLI::ValidationError("--percentiles", "no values parsed from '" + s + "'");
  return out;
}

void emit(const json& j, const std::string& format, std::ostream& os) {
  if (format == "csv") {
    // flat key,value rendering of the top-level summary fields
    os << "key,value\n";
    for (const auto& [k, v] : j.items()) os << k << ',' << v.dump() << '\n';
  } else {
    os << j.dump(2) << '\n';
  }
}

struct OutTarget {
  std::ofstream file;
  std::ostream* os = nullptr;

  explicit OutTarget(const std::string& path) {
    if (path == "-") {
      os = &std::cout;
    } else {
      file.open(path);
      if (!file) throw ArgumentError("cannot open output file: " + path);
      os = &file;
    }
  }
};

int run_test(MixtureFamily family, const std::string& input, double alpha, int null_reps,
             std::uint64_t seed, const std::string& format) {
  Sample sample{read_value_column(input)};
  const OptimizerOptions opts;
  const PlcOutcome outcome = plc_statistic(sample, family, opts);

  SimConfig cfg;
  cfg.family = family;
  cfg.n = static_cast<int>(sample.size());
  cfg.reps = null_reps;
  cfg.seed = seed;
  cfg.optimizer = opts;
  const double theta0 = family == MixtureFamily::MeanMixture ? 0.0 : 1.0;
  const double eta0 = family == MixtureFamily::MeanMixture ? 1.0 : 0.0;
  const NullSimSummary null_sim = simulate_null(cfg, theta0, eta0, {});

  std::size_t ge = 0;
  for (double l : null_sim.lambdas)
    if (l >= outcome.lambda) ++ge;
  const double p_mc = (1.0 + static_cast<double>(ge)) / (static_cast<double>(null_reps) + 1.0);
  const double crit = percentile_sorted(null_sim.lambdas, 100.0 * (1.0 - alpha));

  json config = base_config("test", family_name(family), opts);
  config["input"] = input;
  config["n"] = sample.size();
  config["alpha"] = alpha;
  config["null_reps"] = null_reps;
  config["seed"] = seed;
  json out{{"lambda", outcome.lambda},
           {"is_zero", outcome.is_zero},
           {"theta1", outcome.alt.theta1_hat},
           {"theta2", outcome.alt.theta2_hat},
           {"eta", outcome.null.eta_hat},
           {"critical_value", crit},
           {"p_value_mc", p_mc},
           {"reject", outcome.lambda > crit},
           {"config", config}};
  emit(out, format, std::cout);
  return 0;
}

int run_null_sim(MixtureFamily family, int n, int reps, std::uint64_t seed,
                 const std::string& percentiles, const std::string& raw,
                 const std::string& format) {
  SimConfig cfg;
  cfg.family = family;
  cfg.n = n;
  cfg.reps = reps;
  cfg.seed = seed;
  const std::vector<double> pcts = parse_percentiles(percentiles);
  const double theta0 = family == MixtureFamily::MeanMixture ? 0.0 : 1.0;
  const double eta0 = family == MixtureFamily::MeanMixture ? 1.0 : 0.0;
  const NullSimSummary s = simulate_null(cfg, theta0, eta0, pcts);
  if (!raw.empty()) write_raw_lambdas(s, raw);

  json config = base_config("null-sim", family_name(family), cfg.optimizer);
  config["n"] = n;
  config["reps"] = reps;
  config["seed"] = seed;
  config["theta0"] = theta0;
  config["eta0"] = eta0;
  if (!raw.empty()) config["raw"] = raw;
  json pj = json::object();
  for (const auto& [p, v] : s.percentiles) {
    std::ostringstream key;
    key << p;
    pj[key.str()] = v;
  }
  json out{{"percentiles", pj},
           {"mean", s.mean},
           {"zero_fraction", s.zero_fraction},
           {"c_squared_hat", s.c_squared_hat},
           {"retries", s.retries},
           {"config", config}};
  emit(out, format, std::cout);
  return 0;
}

int run_power(MixtureFamily family, int n, const std::string& grid_spec, double alpha, int reps,
              int null_reps, std::uint64_t seed, const std::string& format) {
  SimConfig cfg;
  cfg.family = family;
  cfg.n = n;
  cfg.reps = reps;
  cfg.seed = seed;
  const std::vector<double> grid = parse_grid(grid_spec);
  const PowerCurve pc = power_curve(cfg, grid, alpha, null_reps);

  json config = base_config("power", family_name(family), cfg.optimizer);
  config["n"] = n;
  config["grid"] = grid_spec;
  config["alpha"] = alpha;
  config["reps"] = reps;
  config["null_reps"] = null_reps;
  config["seed"] = seed;
  config["critical_value"] = pc.critical_value;
  if (format == "json") {
    json out{{"grid", pc.grid}, {"power", pc.power}, {"critical_value", pc.critical_value},
             {"config", config}};
    emit(out, "json", std::cout);
  } else {
    std::cout << "# " << config.dump() << '\n' << "grid,power\n";
    for (std::size_t i = 0; i < pc.grid.size(); ++i)
      std::cout << pc.grid[i] << ',' << pc.power[i] << '\n';
  }
  return 0;
}

int run_scan(MixtureFamily family, const std::string& input, int window, int step, double alpha,
             std::uint64_t seed, int null_reps, const std::string& csv_out,
             const std::string& json_out) {
  const std::vector<double> signal = read_value_column(input);
  SimConfig cfg;
  cfg.family = family;
  cfg.n = window;
  cfg.reps = null_reps;
  cfg.seed = seed;
  const WindowScanResult res = window_scan(signal, window, step, family, alpha, cfg);

  json config = base_config("scan", family_name(family), cfg.optimizer);
  config["input"] = input;
  config["window"] = window;
  config["step"] = step;
  config["alpha"] = alpha;
  config["seed"] = seed;
  config["null_reps"] = null_reps;

  OutTarget csv_target(csv_out);
  *csv_target.os << "# " << config.dump() << '\n';
  write_scan_csv(res, *csv_target.os);

  if (!json_out.empty()) {
    OutTarget json_target(json_out);
    json out{{"critical_value", res.critical_value},
             {"detections", res.detections},
             {"missing", res.missing},
             {"windows", res.centers.size()},
             {"config", config}};
    emit(out, "json", *json_target.os);
  }
  return 0;
}

int run_limits(MixtureFamily family, const std::string& format) {
  const MomentReport rep = moment_report(family);
  const LimitLaw law = limit_law(family);
  const Matrix2 info =
      fisher_information(family, family == MixtureFamily::MeanMixture ? 0.0 : 1.0,
                         family == MixtureFamily::MeanMixture ? 1.0 : 0.0);
  json config = base_config("limits", family_name(family), OptimizerOptions{});
  json out{{"kind", law.kind == LimitKind::DegenerateAtZero ? "degenerate-at-zero"
                                                            : "scaled-half-chi-square"},
           {"c_squared", law.kind == LimitKind::ScaledHalfChiSquare ? json(law.c_squared)
                                                                    : json(nullptr)},
           {"sigma_squared", rep.sigma_squared},
           {"c04", rep.c04_limit},
           {"fisher_info", json::array({json::array({info[0][0], info[0][1]}),
                                        json::array({info[1][0], info[1][1]})})},
           {"xi1_xi2", rep.xi1_xi2_expectation},
           {"quantiles", json{{"0.9", limit_quantile(law, 0.9)},
                              {"0.95", limit_quantile(law, 0.95)},
                              {"0.99", limit_quantile(law, 0.99)}}},
           {"config", config}};
  emit(out, format, std::cout);
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"Projected likelihood contrast test for two-component Gaussian mixtures"};
  app.require_subcommand(1);

  std::string family_str = "variance", input, format = "json";
  std::string grid_spec = "1:3:9", percentiles = "5,50,95", raw;
  std::string csv_out = "-", json_out = "-";
  double alpha = 0.05;
  int n = 100, reps = 1000, null_reps = 1000, window = 50, step = 1;
  std::uint64_t seed = 1;

  auto* t = app.add_subcommand("test", "PLC homogeneity test on a data file");
  t->add_option("--family", family_str, "mean|variance")->required();
  t->add_option("--input", input, "CSV, one value per line")->required();
  t->add_option("--alpha", alpha, "test level");
  t->add_option("--null-reps", null_reps, "null replications for critical value / p-value");
  t->add_option("--seed", seed, "master seed");
  t->add_option("--format", format, "json|csv");

  auto* s = app.add_subcommand("null-sim", "simulate the null distribution of the statistic");
  s->add_option("--family", family_str, "mean|variance")->required();
  s->add_option("--n", n, "sample size")->required();
  s->add_option("--reps", reps, "replications");
  s->add_option("--seed", seed, "master seed");
  s->add_option("--percentiles", percentiles, "comma list of percentile points");
  s->add_option("--raw", raw, "write per-replication lambdas to this CSV");
  s->add_option("--format", format, "json|csv");

  auto* p = app.add_subcommand("power", "Monte Carlo power curve");
  p->add_option("--family", family_str, "mean|variance")->required();
  p->add_option("--n", n, "sample size")->required();
  p->add_option("--grid", grid_spec, "LO:HI:STEPS alternative grid")->required();
  p->add_option("--alpha", alpha, "test level");
  p->add_option("--reps", reps, "replications per grid point");
  p->add_option("--null-reps", null_reps, "replications for the critical value");
  p->add_option("--seed", seed, "master seed");
  p->add_option("--format", format, "csv|json");

  auto* c = app.add_subcommand("scan", "sliding-window change-point scan of a signal");
  c->add_option("--family", family_str, "mean|variance")->required();
  c->add_option("--input", input, "signal CSV, one value per line")->required();
  c->add_option("--window", window, "window width");
  c->add_option("--step", step, "window step");
  c->add_option("--alpha", alpha, "per-window level");
  c->add_option("--seed", seed, "master seed");
  c->add_option("--null-reps", null_reps, "replications for the critical value");
  c->add_option("--csv", csv_out, "per-window CSV destination ('-' = stdout)");
  c->add_option("--json", json_out, "detection JSON destination ('-' = stdout, '' = none)");

  auto* l = app.add_subcommand("limits", "asymptotic limit law and its diagnostics");
  l->add_option("--family", family_str, "mean|variance")->required();
  l->add_option("--format", format, "json|csv");

  try {
    std::vector<std::string> rest(args.begin() + 1, args.end());
    std::reverse(rest.begin(), rest.end());
    app.parse(rest);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    const MixtureFamily family = parse_family(family_str);
    if (format != "json" && format != "csv")
      throw CLI::ValidationError("--format", "expected 'json' or 'csv'");
    if (t->parsed()) return run_test(family, input, alpha, null_reps, seed, format);
    if (s->parsed()) return run_null_sim(family, n, reps, seed, percentiles, raw, format);
    if (p->parsed())
      return run_power(family, n, grid_spec, alpha, reps, null_reps, seed, format);
    if (c->parsed())
      return run_scan(family, input, window, step, alpha, seed, null_reps, csv_out, json_out);
    if (l->parsed()) return run_limits(family, format);
    std::cerr << "no subcommand\n";
    return 1;
  } catch (const CLI::Error& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 1;
  } catch (const ArgumentError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace plc::cli
