#include "cli.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <map>
#include <optional>
#include <sstream>

#include "chainfair/asymptotics.hpp"
#include "chainfair/csv.hpp"
#include "chainfair/datafit.hpp"
#include "chainfair/errors.hpp"
#include "chainfair/fairness.hpp"
#include "chainfair/solver.hpp"
#include "chainfair/stochastic.hpp"
#include "chainfair/svg.hpp"
#include "chainfair/timing.hpp"

namespace chainfair::cli {

namespace {

using nlohmann::json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Format { csv, svg };

struct Common {
  std::string output;
  Format format = Format::csv;
};

struct Emitted {
  CsvTable table;
  std::optional<std::string> svg;  // set when an SVG view exists
};

CsvTable key_values(const std::vector<std::pair<std::string, std::string>>& kv) {
  CsvTable t{{"key", "value"}, {}};
  for (const auto& [k, v] : kv) t.rows.push_back({k, v});
  return t;
}

std::string fmt(double v) { return format_double(v); }

std::vector<double> default_alpha_grid(std::size_t points) {
  std::vector<double> grid(points);
  for (std::size_t k = 0; k < points; ++k) {
    grid[k] = static_cast<double>(k + 1) / static_cast<double>(points + 1);
  }
  return grid;
}

// ---------------------------------------------------------------------------
// Subcommand state. Every option is bound to a field here.

struct SolveArgs {
  std::size_t n = 0;
  double alpha = 0.0;
  std::string method = "newton";
  double tol = 1e-12;
};

struct OptimizeArgs {
  std::size_t n = 0;
  double tol = 1e-6;
};

struct SweepArgs {
  std::vector<std::size_t> n;
  std::size_t points = 99;
  std::vector<double> alphas;
};

struct RingArgs {
  std::optional<double> alpha;
  std::optional<double> x;
};

struct FlatArgs {
  std::vector<std::size_t> ns{100, 500, 1000, 2000};
};

struct CurveArgs {
  std::vector<std::size_t> ns{10, 20, 50, 100, 200, 500, 1000};
};

struct CircleArgs {
  std::size_t pairs = 101;
  std::size_t trials = 1'000'000;
  std::uint64_t seed = 1;
};

struct SimulateArgs {
  std::size_t n = 0;
  double alpha = 0.0;
  std::size_t steps = 1'000'000;
  std::optional<std::size_t> burn_in;
  std::uint64_t seed = 1;
  std::string policy = "single-site";
};

struct ExactArgs {
  std::size_t n = 0;
  double alpha = 0.0;
};

struct GapArgs {
  std::vector<std::size_t> ns{2, 3, 4, 5, 6, 7, 8};
  std::vector<double> alphas{0.3, 0.5, 0.75, 0.862};
};

struct FitArgs {
  std::string input;
  double lo = 0.05;
  double hi = 0.95;
  std::string normalize = "first";
};

struct CompareArgs {
  std::string input;
  std::optional<double> alpha;
  std::string normalize = "first";
};

struct PacketArgs {
  double alpha = 0.0;
  double rate = 2.0;
};

struct FrameArgs {
  double bytes = 1500.0;
  double rate = 2.0;
};

struct TimingArgs {
  MacTiming timing;
  std::string wait = "exclude";
};

void add_timing_options(CLI::App* sub, TimingArgs& t) {
  sub->add_option("--difs", t.timing.difs, "DIFS in microseconds")->capture_default_str();
  sub->add_option("--eifs", t.timing.eifs, "EIFS in microseconds")->capture_default_str();
  sub->add_option("--sifs", t.timing.sifs, "SIFS in microseconds")->capture_default_str();
  sub->add_option("--slot", t.timing.slot, "slot time in microseconds")->capture_default_str();
  sub->add_option("--cw-min", t.timing.cw_min, "minimum contention window in slots")
      ->capture_default_str();
  sub->add_option("--rts", t.timing.rts, "RTS duration in microseconds")->capture_default_str();
  sub->add_option("--cts", t.timing.cts, "CTS duration in microseconds")->capture_default_str();
  sub->add_option("--ack", t.timing.ack, "ACK duration in microseconds")->capture_default_str();
  sub->add_option("--plcp", t.timing.plcp, "PHY preamble and header in microseconds")
      ->capture_default_str();
  sub->add_option("--wait-accounting", t.wait,
                  "inter-frame delay counted in T_w: exclude, difs or eifs")
      ->check(CLI::IsMember({"exclude", "difs", "eifs"}))
      ->capture_default_str();
}

MacTiming resolve_timing(const TimingArgs& t) {
  MacTiming m = t.timing;
  m.wait_accounting = t.wait == "difs"   ? WaitAccounting::include_difs
                      : t.wait == "eifs" ? WaitAccounting::include_eifs
                                         : WaitAccounting::exclude_ifs;
  m.validate();
  return m;
}

Normalization resolve_norm(const std::string& s) {
  return s == "max" ? Normalization::max_pair : Normalization::first_pair;
}

ThroughputTrace load_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open input file '" + path + "'");
  try {
    return read_trace_csv(in, path);
  } catch (const ParseError& e) {
    throw UsageError(path + ": " + e.what());
  }
}

void require_alpha(double alpha, const char* flag) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw UsageError(std::string(flag) + " must lie in (0,1)");
  }
}

// ---------------------------------------------------------------------------
// Command bodies. Each returns the CSV table and, where a figure exists, the
// SVG rendering of the same data.

Emitted do_solve(const SolveArgs& a) {
  const ChainParams params{a.n, a.alpha};
  params.validate();
  SolveOptions opts;
  opts.tol = a.tol;
  opts.validate();
  const auto method = a.method == "fixed-point" ? SolverMethod::fixed_point : SolverMethod::newton;
  const EmissionVector x = solve_chain(params, method, opts);
  Emitted e;
  e.table.header = {"pair", "x"};
  PlotSeries s{"x_i", {}, {}};
  for (std::size_t i = 0; i < x.size(); ++i) {
    e.table.rows.push_back({std::to_string(i + 1), fmt(x[i])});
    s.x.push_back(static_cast<double>(i + 1));
    s.y.push_back(x[i]);
  }
  e.svg = svg_bar_chart({"Probabilities of emission, n = " + std::to_string(a.n) +
                             ", alpha = " + fmt(a.alpha),
                         "pair", "emission probability", 1.0 / 3.0},
                        {s});
  return e;
}

Emitted do_optimize(const OptimizeArgs& a) {
  if (a.n < 1) throw UsageError("--n must be >= 1");
  if (!(a.tol > 0.0)) throw UsageError("--tol must be > 0");
  const OptResult r = maximize_fairness(a.n, a.tol);
  Emitted e;
  e.table = key_values({{"n", std::to_string(a.n)},
                        {"alpha_hat", fmt(r.alpha_hat)},
                        {"J", fmt(r.J_value)},
                        {"bracket", fmt(r.bracket)},
                        {"evaluations", std::to_string(r.evaluations)},
                        {"sign_changes", std::to_string(r.sign_changes)},
                        {"unimodal", r.unimodal ? "1" : "0"}});
  return e;
}

Emitted do_sweep(const SweepArgs& a) {
  if (a.n.empty()) throw UsageError("--n is required");
  std::vector<double> alphas = a.alphas.empty() ? default_alpha_grid(a.points) : a.alphas;
  for (double al : alphas) require_alpha(al, "--alphas");
  for (std::size_t n : a.n) {
    if (n < 1) throw UsageError("--n must be >= 1");
  }
  Emitted e;
  e.table.header = {"n", "alpha", "J", "ok"};
  std::vector<PlotSeries> series;
  for (std::size_t n : a.n) {
    PlotSeries s{"n = " + std::to_string(n), {}, {}};
    for (const SweepRow& row : sweep_fairness(n, alphas)) {
      e.table.rows.push_back({std::to_string(n), fmt(row.alpha), fmt(row.J), row.ok ? "1" : "0"});
      s.x.push_back(row.alpha);
      s.y.push_back(row.J);
    }
    series.push_back(std::move(s));
  }
  e.svg = svg_line_chart({"J(alpha)", "alpha", "J", std::nullopt}, series);
  return e;
}

Emitted do_ring(const RingArgs& a) {
  if (a.alpha.has_value() == a.x.has_value()) {
    throw UsageError("give exactly one of --alpha or --x");
  }
  Emitted e;
  if (a.alpha) {
    if (!(*a.alpha > 0.0 && *a.alpha <= 1.0)) throw UsageError("--alpha must lie in (0,1]");
    const double x = ring_fixed_point(*a.alpha).x;
    e.table = key_values({{"alpha", fmt(*a.alpha)},
                          {"x", fmt(x)},
                          {"residual", fmt(std::abs(x - *a.alpha * (1 - x) * (1 - x)))}});
  } else {
    if (!(*a.x >= 0.0 && *a.x < 1.0)) throw UsageError("--x must lie in [0,1)");
    e.table = key_values({{"x", fmt(*a.x)}, {"alpha", fmt(alpha_for_ring_prob(*a.x))}});
  }
  return e;
}

Emitted do_flat(const FlatArgs& a) {
  for (std::size_t n : a.ns) {
    if (n < 3) throw UsageError("--ns values must be >= 3");
  }
  Emitted e;
  e.table.header = {"n", "alpha_hat", "central_prob"};
  std::vector<PlotSeries> series;
  for (std::size_t n : a.ns) {
    const FlatValue f = flat_value(n);
    e.table.rows.push_back({std::to_string(n), fmt(f.alpha_hat), fmt(f.central_prob)});
    const EmissionVector x = newton_solve({n, f.alpha_hat});
    PlotSeries s{"n = " + std::to_string(n), {}, {}};
    for (std::size_t i = 0; i < n; ++i) {
      s.x.push_back(static_cast<double>(i + 1));
      s.y.push_back(x[i]);
    }
    series.push_back(std::move(s));
  }
  e.svg = svg_line_chart(
      {"Probabilities of emission at the optimal alpha", "pair", "emission probability", 1.0 / 3.0},
      series);
  return e;
}

Emitted do_curve(const CurveArgs& a) {
  for (std::size_t n : a.ns) {
    if (n < 2) throw UsageError("--ns values must be >= 2");
  }
  Emitted e;
  e.table.header = {"n", "alpha_hat"};
  PlotSeries s{"alpha_hat", {}, {}};
  for (const CurveRow& row : optimal_alpha_curve(a.ns)) {
    e.table.rows.push_back({std::to_string(row.n), fmt(row.alpha_hat)});
    s.x.push_back(static_cast<double>(row.n));
    s.y.push_back(row.alpha_hat);
  }
  e.svg = svg_line_chart({"Optimal alpha with respect to n", "n", "optimal alpha", 0.75}, {s});
  return e;
}

Emitted do_circle(const CircleArgs& a) {
  if (a.pairs < 3) throw UsageError("--pairs must be >= 3");
  if (a.trials < 1) throw UsageError("--trials must be >= 1");
  const std::vector<double> freq = circle_backoff_mc(a.pairs, a.trials, a.seed);
  Emitted e;
  e.table.header = {"pair", "win_frequency"};
  PlotSeries s{"win frequency", {}, {}};
  for (std::size_t i = 0; i < freq.size(); ++i) {
    e.table.rows.push_back({std::to_string(i + 1), fmt(freq[i])});
    s.x.push_back(static_cast<double>(i + 1));
    s.y.push_back(freq[i]);
  }
  e.svg = svg_bar_chart({"Uniform backoff on a circle", "pair", "win frequency", 1.0 / 3.0}, {s});
  return e;
}

Emitted do_simulate(const SimulateArgs& a) {
  SimConfig cfg;
  cfg.n = a.n;
  cfg.alpha = a.alpha;
  cfg.steps = a.steps;
  cfg.burn_in = a.burn_in;
  cfg.seed = a.seed;
  cfg.policy = a.policy == "random-order" ? UpdatePolicy::synchronous_random_order
                                          : UpdatePolicy::random_single_site;
  cfg.validate();
  const MarginalEstimate est = simulate(cfg);
  Emitted e;
  e.table.header = {"pair_index", "x_hat", "stderr"};
  PlotSeries s{"x_hat", {}, {}};
  for (std::size_t i = 0; i < est.x_hat.size(); ++i) {
    e.table.rows.push_back({std::to_string(i + 1), fmt(est.x_hat[i]), fmt(est.std_error[i])});
    s.x.push_back(static_cast<double>(i + 1));
    s.y.push_back(est.x_hat[i]);
  }
  e.svg = svg_bar_chart({"Simulated emission frequencies", "pair", "emission frequency",
                         std::nullopt},
                        {s});
  return e;
}

Emitted do_exact(const ExactArgs& a) {
  const ChainParams params{a.n, a.alpha};
  params.validate();
  if (a.n > kExactMaxPairs) throw UsageError("--n must be <= 12");
  const std::vector<double> exact = exact_stationary(a.n, a.alpha);
  const EmissionVector mf = newton_solve(params);
  Emitted e;
  e.table.header = {"pair", "exact", "meanfield", "gap"};
  PlotSeries se{"exact", {}, {}}, sm{"mean field", {}, {}};
  for (std::size_t i = 0; i < a.n; ++i) {
    e.table.rows.push_back(
        {std::to_string(i + 1), fmt(exact[i]), fmt(mf[i]), fmt(std::abs(exact[i] - mf[i]))});
    se.x.push_back(static_cast<double>(i + 1));
    se.y.push_back(exact[i]);
    sm.x.push_back(static_cast<double>(i + 1));
    sm.y.push_back(mf[i]);
  }
  e.svg = svg_bar_chart({"Exact stationary vs mean field", "pair", "emission probability",
                         std::nullopt},
                        {se, sm});
  return e;
}

Emitted do_gap(const GapArgs& a) {
  for (std::size_t n : a.ns) {
    if (n < 1 || n > kExactMaxPairs) throw UsageError("--ns values must lie in [1, 12]");
  }
  for (double al : a.alphas) require_alpha(al, "--alphas");
  Emitted e;
  e.table.header = {"n", "alpha", "gap"};
  for (std::size_t n : a.ns) {
    for (double al : a.alphas) {
      e.table.rows.push_back({std::to_string(n), fmt(al), fmt(meanfield_gap(n, al))});
    }
  }
  return e;
}

Emitted do_fit(const FitArgs& a) {
  if (!(a.lo > 0.0 && a.lo < a.hi && a.hi < 1.0)) {
    throw UsageError("--lo and --hi must satisfy 0 < lo < hi < 1");
  }
  const ThroughputTrace trace = load_trace(a.input);
  const FitResult r = fit_alpha(trace, {a.lo, a.hi}, resolve_norm(a.normalize));
  Emitted e;
  e.table = key_values({{"n", std::to_string(trace.rates.size())},
                        {"alpha_fit", fmt(r.alpha_fit)},
                        {"sse", fmt(r.sse)},
                        {"grid_minima", std::to_string(r.grid_minima)}});
  return e;
}

Emitted do_compare(const CompareArgs& a) {
  const ThroughputTrace trace = load_trace(a.input);
  const Normalization norm = resolve_norm(a.normalize);
  double alpha = 0.0;
  if (a.alpha) {
    require_alpha(*a.alpha, "--alpha");
    alpha = *a.alpha;
  } else {
    alpha = fit_alpha(trace, {}, norm).alpha_fit;
  }
  Emitted e;
  e.table.header = {"pair", "observed_rho", "model_rho", "residual"};
  PlotSeries so{"observed", {}, {}}, sm{"model", {}, {}};
  for (const ComparisonRow& row : compare_normalized(trace, alpha, norm)) {
    e.table.rows.push_back({std::to_string(row.pair), fmt(row.observed_rho), fmt(row.model_rho),
                            fmt(row.residual)});
    so.x.push_back(static_cast<double>(row.pair));
    so.y.push_back(row.observed_rho);
    sm.x.push_back(static_cast<double>(row.pair));
    sm.y.push_back(row.model_rho);
  }
  e.svg = svg_bar_chart({"Normalized rates, alpha = " + fmt(alpha), "pair", "normalized rate",
                         std::nullopt},
                        {so, sm});
  return e;
}

Emitted do_packet(const PacketArgs& a, const TimingArgs& t) {
  const MacTiming timing = resolve_timing(t);
  FrameSpec probe{FrameSpec::kMinBytes, a.rate};
  probe.validate();
  long bytes = 0;
  try {
    bytes = packet_for_alpha(a.alpha, a.rate, timing);
  } catch (const RangeError& e) {
    throw UsageError(e.what());
  }
  const double achieved = alpha_of_packet({static_cast<double>(bytes), a.rate}, timing);
  Emitted e;
  e.table = key_values({{"bytes", std::to_string(bytes)},
                        {"alpha_achieved", fmt(achieved)},
                        {"t_send_us", fmt(t_send({static_cast<double>(bytes), a.rate}, timing))},
                        {"t_wait_us", fmt(t_wait(timing))}});
  return e;
}

Emitted do_frame(const FrameArgs& a, const TimingArgs& t) {
  const MacTiming timing = resolve_timing(t);
  const FrameSpec frame{a.bytes, a.rate};
  frame.validate();
  Emitted e;
  e.table = key_values({{"t_send_us", fmt(t_send(frame, timing))},
                        {"t_wait_us", fmt(t_wait(timing))},
                        {"alpha", fmt(alpha_of_packet(frame, timing))}});
  return e;
}

// ---------------------------------------------------------------------------
// JSON config: keys mirror long flag names; explicit flags win.

bool user_gave(const std::vector<std::string>& args, const std::string& flag) {
  for (const auto& a : args) {
    if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
  }
  return false;
}

std::string json_scalar(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number_unsigned()) return std::to_string(v.get<unsigned long long>());
  if (v.is_number_float()) return format_double(v.get<double>());
  throw UsageError("config: unsupported value " + v.dump());
}

void append_config_tokens(const json& obj, CLI::App* sub, bool strict,
                          const std::vector<std::string>& user_args,
                          std::vector<std::string>& tokens) {
  for (const auto& [key, value] : obj.items()) {
    if (value.is_object()) continue;
    const std::string flag = "--" + key;
    if (key == "config") continue;
    if (sub->get_option_no_throw(flag) == nullptr) {
      if (strict) throw UsageError("config: unknown key '" + key + "' for " + sub->get_name());
      continue;
    }
    if (user_gave(user_args, flag)) continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) tokens.push_back(flag);
      continue;
    }
    tokens.push_back(flag);
    if (value.is_array()) {
      for (const auto& item : value) tokens.push_back(json_scalar(item));
    } else {
      tokens.push_back(json_scalar(value));
    }
  }
}

// Splits off --config and returns the argument list with config-file values
// inserted after the subcommand name.
std::vector<std::string> expand_config(CLI::App& app, const std::vector<std::string>& args) {
  std::optional<std::string> path;
  std::vector<std::string> rest;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw UsageError("--config needs a file");
      path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (!path) return rest;

  std::ifstream in(*path);
  if (!in) throw UsageError("cannot open config file '" + *path + "'");
  json cfg;
  try {
    in >> cfg;
  } catch (const json::exception& e) {
    throw UsageError("config: " + std::string(e.what()));
  }
  if (!cfg.is_object()) throw UsageError("config: top level must be an object");

  std::size_t sub_pos = rest.size();
  CLI::App* sub = nullptr;
  for (std::size_t i = 0; i < rest.size(); ++i) {
    if (!rest[i].empty() && rest[i][0] != '-') {
      sub = app.get_subcommand_no_throw(rest[i]);
      sub_pos = i;
      break;
    }
  }
  if (sub == nullptr) return rest;

  std::vector<std::string> user_args(rest.begin() + static_cast<long>(sub_pos) + 1, rest.end());
  std::vector<std::string> tokens;
  append_config_tokens(cfg, sub, false, user_args, tokens);
  if (cfg.contains(sub->get_name()) && cfg[sub->get_name()].is_object()) {
    append_config_tokens(cfg[sub->get_name()], sub, true, user_args, tokens);
  }
  rest.insert(rest.begin() + static_cast<long>(sub_pos) + 1, tokens.begin(), tokens.end());
  return rest;
}

std::string output_path(const std::string& requested) {
  std::filesystem::path p(requested);
  if (p.is_relative()) {
    if (const char* dir = std::getenv(kOutputDirEnv); dir != nullptr && *dir != '\0') {
      p = std::filesystem::path(dir) / p;
    }
  }
  return p.string();
}

const char* kFooter = R"(Output columns (CSV, header row first):
  solve      pair,x
  optimize   key,value  (n, alpha_hat, J, bracket, evaluations, sign_changes, unimodal)
  sweep      n,alpha,J,ok
  ring       key,value  (alpha, x, residual) or (x, alpha)
  flat       n,alpha_hat,central_prob
  curve      n,alpha_hat
  circle     pair,win_frequency
  simulate   pair_index,x_hat,stderr
  exact      pair,exact,meanfield,gap
  gap        n,alpha,gap
  fit        key,value  (n, alpha_fit, sse, grid_minima)
  compare    pair,observed_rho,model_rho,residual
  packet     key,value  (bytes, alpha_achieved, t_send_us, t_wait_us)
  frame      key,value  (t_send_us, t_wait_us, alpha)
Input trace CSV for fit/compare: header pair,rate; pairs 1..n in order.
--config FILE reads a JSON object whose keys are long flag names, either at
top level or nested under the subcommand name; flags on the command line win.
Relative --output paths are resolved against $CHAINFAIR_OUTPUT_DIR if set.
Exit codes: 0 success, 2 usage error, 3 numerical failure.)";

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mean-field fairness analysis of a chain of 802.11 sender-receiver pairs",
               "chainfair"};
  app.footer(kFooter);
  app.failure_message(CLI::FailureMessage::help);
  app.require_subcommand(1, 1);
  app.set_help_all_flag("--help-all", "Expand all help");
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  Common common;
  std::map<std::string, Format> format_map{{"csv", Format::csv}, {"svg", Format::svg}};
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("-o,--output", common.output, "write result to this file");
    sub->add_option("--format", common.format, "csv or svg")
        ->transform(CLI::CheckedTransformer(format_map, CLI::ignore_case));
    sub->add_option("--config", "JSON file with default flag values");
  };

  SolveArgs solve_a;
  auto* solve = app.add_subcommand("solve", "Stationary emission probabilities of a chain");
  solve->add_option("--n", solve_a.n, "number of pairs")->required();
  solve->add_option("--alpha", solve_a.alpha, "emission coefficient in (0,1)")->required();
  solve->add_option("--method", solve_a.method, "newton or fixed-point")
      ->check(CLI::IsMember({"newton", "fixed-point"}))
      ->capture_default_str();
  solve->add_option("--tol", solve_a.tol, "sup-norm residual tolerance")->capture_default_str();
  add_common(solve);

  OptimizeArgs opt_a;
  auto* optimize = app.add_subcommand("optimize", "Entropy-optimal alpha for n pairs");
  optimize->add_option("--n", opt_a.n, "number of pairs")->required();
  optimize->add_option("--tol", opt_a.tol, "bracket width on alpha")->capture_default_str();
  add_common(optimize);

  SweepArgs sweep_a;
  auto* sweep = app.add_subcommand("sweep", "J(alpha) over a grid");
  sweep->add_option("--n", sweep_a.n, "number of pairs (repeatable)")->required()->expected(1, -1);
  sweep->add_option("--points", sweep_a.points, "uniform grid size on (0,1)")
      ->capture_default_str();
  sweep->add_option("--alphas", sweep_a.alphas, "explicit alpha values")->expected(1, -1);
  add_common(sweep);

  RingArgs ring_a;
  auto* ring = app.add_subcommand("ring", "Borderless ring model x = alpha (1 - x)^2");
  ring->add_option("--alpha", ring_a.alpha, "solve for x at this alpha");
  ring->add_option("--x", ring_a.x, "return the alpha giving this x");
  add_common(ring);

  FlatArgs flat_a;
  auto* flat = app.add_subcommand("flat", "Central flat-area probability at the optimal alpha");
  flat->add_option("--ns", flat_a.ns, "chain lengths")->expected(1, -1)->capture_default_str();
  add_common(flat);

  CurveArgs curve_a;
  auto* curve = app.add_subcommand("curve", "Optimal alpha as a function of n");
  curve->add_option("--ns", curve_a.ns, "chain lengths")->expected(1, -1)->capture_default_str();
  add_common(curve);

  CircleArgs circle_a;
  auto* circle = app.add_subcommand("circle", "Uniform-backoff contest on a circle");
  circle->add_option("--pairs", circle_a.pairs, "pairs on the circle")->capture_default_str();
  circle->add_option("--trials", circle_a.trials, "Monte Carlo trials")->capture_default_str();
  circle->add_option("--seed", circle_a.seed, "RNG seed")->capture_default_str();
  add_common(circle);

  SimulateArgs sim_a;
  auto* sim = app.add_subcommand("simulate", "Slot simulation of the interaction process");
  sim->add_option("--n", sim_a.n, "number of pairs")->required();
  sim->add_option("--alpha", sim_a.alpha, "emission coefficient")->required();
  sim->add_option("--steps", sim_a.steps, "slots")->capture_default_str();
  sim->add_option("--burn-in", sim_a.burn_in, "discarded slots (default steps/10)");
  sim->add_option("--seed", sim_a.seed, "RNG seed")->capture_default_str();
  sim->add_option("--policy", sim_a.policy, "single-site or random-order")
      ->check(CLI::IsMember({"single-site", "random-order"}))
      ->capture_default_str();
  add_common(sim);

  ExactArgs exact_a;
  auto* exact = app.add_subcommand("exact", "Exact stationary marginals vs mean field (n <= 12)");
  exact->add_option("--n", exact_a.n, "number of pairs")->required();
  exact->add_option("--alpha", exact_a.alpha, "emission coefficient")->required();
  add_common(exact);

  GapArgs gap_a;
  auto* gap = app.add_subcommand("gap", "Mean-field error over a grid of small chains");
  gap->add_option("--ns", gap_a.ns, "chain lengths")->expected(1, -1)->capture_default_str();
  gap->add_option("--alphas", gap_a.alphas, "alpha values")->expected(1, -1)->capture_default_str();
  add_common(gap);

  FitArgs fit_a;
  auto* fit = app.add_subcommand("fit", "Least-squares alpha for a measured throughput trace");
  fit->add_option("--input", fit_a.input, "trace CSV (pair,rate)")->required();
  fit->add_option("--lo", fit_a.lo, "lower alpha bound")->capture_default_str();
  fit->add_option("--hi", fit_a.hi, "upper alpha bound")->capture_default_str();
  fit->add_option("--normalize", fit_a.normalize, "first or max")
      ->check(CLI::IsMember({"first", "max"}))
      ->capture_default_str();
  add_common(fit);

  CompareArgs cmp_a;
  auto* compare = app.add_subcommand("compare", "Normalized trace vs model, per pair");
  compare->add_option("--input", cmp_a.input, "trace CSV (pair,rate)")->required();
  compare->add_option("--alpha", cmp_a.alpha, "model alpha (default: fitted)");
  compare->add_option("--normalize", cmp_a.normalize, "first or max")
      ->check(CLI::IsMember({"first", "max"}))
      ->capture_default_str();
  add_common(compare);

  PacketArgs packet_a;
  TimingArgs packet_t;
  auto* packet = app.add_subcommand("packet", "Frame size giving a target alpha");
  packet->add_option("--alpha", packet_a.alpha, "target alpha")->required();
  packet->add_option("--rate", packet_a.rate, "data rate in Mbit/s")->capture_default_str();
  add_timing_options(packet, packet_t);
  add_common(packet);

  FrameArgs frame_a;
  TimingArgs frame_t;
  auto* frame = app.add_subcommand("frame", "T_s, T_w and alpha of a frame");
  frame->add_option("--bytes", frame_a.bytes, "MAC frame size")->capture_default_str();
  frame->add_option("--rate", frame_a.rate, "data rate in Mbit/s")->capture_default_str();
  add_timing_options(frame, frame_t);
  add_common(frame);

  try {
    std::vector<std::string> expanded = expand_config(app, args);
    std::vector<const char*> argv{"chainfair"};
    for (const auto& a : expanded) argv.push_back(a.c_str());
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  Emitted result;
  const std::string command = app.get_subcommands().front()->get_name();
  try {
    if (command == "solve") {
      result = do_solve(solve_a);
    } else if (command == "optimize") {
      result = do_optimize(opt_a);
    } else if (command == "sweep") {
      result = do_sweep(sweep_a);
    } else if (command == "ring") {
      result = do_ring(ring_a);
    } else if (command == "flat") {
      result = do_flat(flat_a);
    } else if (command == "curve") {
      result = do_curve(curve_a);
    } else if (command == "circle") {
      result = do_circle(circle_a);
    } else if (command == "simulate") {
      result = do_simulate(sim_a);
    } else if (command == "exact") {
      result = do_exact(exact_a);
    } else if (command == "gap") {
      result = do_gap(gap_a);
    } else if (command == "fit") {
      result = do_fit(fit_a);
    } else if (command == "compare") {
      result = do_compare(cmp_a);
    } else if (command == "packet") {
      result = do_packet(packet_a, packet_t);
    } else if (command == "frame") {
      result = do_frame(frame_a, frame_t);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const SizeError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NormalizationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ConvergenceError& e) {
    err << "numerical failure in " << command << ": " << e.what()
        << " (residual " << format_double(e.residual()) << ")\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "numerical failure in " << command << ": " << e.what() << "\n";
    return kExitNumerical;
  }

  std::ostringstream body;
  if (common.format == Format::svg) {
    if (!result.svg) {
      err << "error: " << command << " has no SVG view; use --format csv\n";
      return kExitUsage;
    }
    body << *result.svg;
  } else {
    write_csv(body, result.table);
  }

  if (common.output.empty()) {
    out << body.str();
  } else {
    const std::string path = output_path(common.output);
    std::ofstream file(path, std::ios::binary);
    if (!file) {
      err << "error: cannot write '" << path << "'\n";
      return kExitUsage;
    }
    file << body.str();
  }
  return kExitOk;
}

}  // namespace chainfair::cli
