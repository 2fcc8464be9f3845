#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "chainfair/solver.hpp"

namespace chainfair {

/// Measured sending rate of each pair, in any consistent unit.
struct ThroughputTrace {
  std::vector<double> rates;
  std::string label;

  /// n >= 2 and all rates >= 0 (DomainError); rates[0] > 0
  /// (NormalizationError).
  void validate() const;
};

enum class Normalization {
  first_pair,  ///< divide by pair 1
  max_pair,    ///< divide by the largest value
};

struct FitBounds {
  double lo = 0.05;
  double hi = 0.95;
};

struct FitResult {
  double alpha_fit = 0.0;
  /// Sum of squared residuals at alpha_fit.
  double sse = 0.0;
  /// model_rho - observed_rho per pair.
  std::vector<double> residuals;
  /// Local minima of the SSE on the seeding grid; 1 when unimodal.
  std::size_t grid_minima = 0;
};

struct ComparisonRow {
  std::size_t pair = 0;  ///< 1-based
  double observed_rho = 0.0;
  double model_rho = 0.0;
  double residual = 0.0;  ///< model_rho - observed_rho
};

std::vector<double> normalize(const ThroughputTrace& trace,
                              Normalization norm = Normalization::first_pair);

/// Least-squares alpha for the normalized profile: a 91-point scan of
/// [lo, hi] seeds a golden-section search run to width 1e-4. Alphas where
/// the solver fails get an infinite penalty; if all fail, FitError.
FitResult fit_alpha(const ThroughputTrace& trace, FitBounds bounds = {},
                    Normalization norm = Normalization::first_pair,
                    SolverMethod method = SolverMethod::newton);

std::vector<ComparisonRow> compare_normalized(const ThroughputTrace& trace, double alpha,
                                              Normalization norm = Normalization::first_pair);

/// Reads `pair,rate` CSV with pairs numbered 1..n in order.
ThroughputTrace read_trace_csv(std::istream& in, std::string label = {});

void write_trace_csv(std::ostream& out, const ThroughputTrace& trace);

}  // namespace chainfair
