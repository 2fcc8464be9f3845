#include "chainfair/datafit.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>

#include "chainfair/csv.hpp"
#include "chainfair/errors.hpp"

namespace chainfair {

namespace {

constexpr std::size_t kGridPoints = 91;
constexpr double kFitWidth = 1e-4;

std::vector<double> scale_profile(std::span<const double> v, Normalization norm) {
  const double ref = norm == Normalization::first_pair ? v[0]
                                                       : *std::max_element(v.begin(), v.end());
  if (!(ref > 0.0)) throw NormalizationError("normalize: reference value is not positive");
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] / ref;
  return out;
}

struct Objective {
  const std::vector<double>& rho;
  Normalization norm;
  SolverMethod method;

  double operator()(double alpha) const {
    try {
      SolveOptions opts;
      if (method == SolverMethod::fixed_point) opts.tol = 1e-14;
      const EmissionVector x = solve_chain({rho.size(), alpha}, method, opts);
      const std::vector<double> model = scale_profile(x, norm);
      double sse = 0.0;
      for (std::size_t i = 0; i < rho.size(); ++i) {
        sse += (model[i] - rho[i]) * (model[i] - rho[i]);
      }
      return sse;
    } catch (const ConvergenceError&) {
      return std::numeric_limits<double>::infinity();
    }
  }
};

}  // namespace

void ThroughputTrace::validate() const {
  if (rates.size() < 2) throw DomainError("ThroughputTrace: need at least 2 pairs");
  for (double r : rates) {
    if (!(r >= 0.0) || !std::isfinite(r)) {
      throw DomainError("ThroughputTrace: rates must be finite and >= 0");
    }
  }
  if (!(rates[0] > 0.0)) {
    throw NormalizationError("ThroughputTrace: rate of pair 1 must be > 0");
  }
}

std::vector<double> normalize(const ThroughputTrace& trace, Normalization norm) {
  trace.validate();
  return scale_profile(trace.rates, norm);
}

FitResult fit_alpha(const ThroughputTrace& trace, FitBounds bounds, Normalization norm,
                    SolverMethod method) {
  if (!(bounds.lo > 0.0 && bounds.lo < bounds.hi && bounds.hi < 1.0)) {
    throw DomainError("fit_alpha: bounds must satisfy 0 < lo < hi < 1");
  }
  const std::vector<double> rho = normalize(trace, norm);
  const Objective sse{rho, norm, method};

  std::vector<double> grid(kGridPoints), value(kGridPoints);
  for (std::size_t k = 0; k < kGridPoints; ++k) {
    grid[k] = bounds.lo +
              (bounds.hi - bounds.lo) * static_cast<double>(k) / (kGridPoints - 1);
    value[k] = sse(grid[k]);
  }
  const auto best_it = std::min_element(value.begin(), value.end());
  if (!std::isfinite(*best_it)) throw FitError("fit_alpha: solver failed at every alpha");
  const auto best = static_cast<std::size_t>(best_it - value.begin());

  FitResult result;
  for (std::size_t k = 0; k < kGridPoints; ++k) {
    const bool below_left = k == 0 || value[k] < value[k - 1];
    const bool below_right = k + 1 == kGridPoints || value[k] <= value[k + 1];
    if (below_left && below_right && std::isfinite(value[k])) ++result.grid_minima;
  }

  double lo = grid[best == 0 ? 0 : best - 1];
  double hi = grid[best + 1 == kGridPoints ? best : best + 1];
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = sse(c), fd = sse(d);
  while (hi - lo > kFitWidth) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = sse(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = sse(d);
    }
  }
  double alpha = 0.5 * (lo + hi);
  double f = sse(alpha);
  if (!(f <= *best_it)) {
    alpha = grid[best];
    f = *best_it;
  }

  result.alpha_fit = alpha;
  const EmissionVector x = solve_chain({rho.size(), alpha}, method);
  const std::vector<double> model = scale_profile(x, norm);
  result.residuals.resize(rho.size());
  for (std::size_t i = 0; i < rho.size(); ++i) {
    result.residuals[i] = model[i] - rho[i];
    result.sse += result.residuals[i] * result.residuals[i];
  }
  return result;
}

std::vector<ComparisonRow> compare_normalized(const ThroughputTrace& trace, double alpha,
                                              Normalization norm) {
  const std::vector<double> rho = normalize(trace, norm);
  const EmissionVector x = newton_solve({rho.size(), alpha});
  const std::vector<double> model = scale_profile(x, norm);
  std::vector<ComparisonRow> rows(rho.size());
  for (std::size_t i = 0; i < rho.size(); ++i) {
    rows[i] = {i + 1, rho[i], model[i], model[i] - rho[i]};
  }
  return rows;
}

ThroughputTrace read_trace_csv(std::istream& in, std::string label) {
  const CsvTable table = read_csv(in);
  const std::size_t pair_col = table.column("pair");
  const std::size_t rate_col = table.column("rate");
  ThroughputTrace trace;
  trace.label = std::move(label);
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const double pair = table.number(r, pair_col);
    if (pair != static_cast<double>(r + 1)) {
      throw ParseError("trace csv: expected pair " + std::to_string(r + 1) + " on row " +
                       std::to_string(r + 1));
    }
    trace.rates.push_back(table.number(r, rate_col));
  }
  trace.validate();
  return trace;
}

void write_trace_csv(std::ostream& out, const ThroughputTrace& trace) {
  CsvTable table{{"pair", "rate"}, {}};
  for (std::size_t i = 0; i < trace.rates.size(); ++i) {
    table.rows.push_back({std::to_string(i + 1), format_double(trace.rates[i])});
  }
  write_csv(out, table);
}

}  // namespace chainfair
