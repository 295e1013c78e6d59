#pragma once

#include <string>
#include <utility>
#include <vector>

#include "gdr/grid.hpp"
#include "gdr/model.hpp"
#include "gdr/scheme.hpp"

namespace gdr {

/// Max nodewise |a - b| over the whole lattice.
double sup_diff(const Field& a, const Field& b);

/// Same, restricted to the central half of the spatial domain.
double sup_diff_inner(const Field& a, const Field& b);

/// Least-squares line through (log size, log error).
struct RateFit {
  std::vector<std::pair<double, double>> pairs;
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

RateFit rate_fit(std::vector<std::pair<double, double>> pairs);

/// Reference solution for constant-volatility problems without obstacles,
/// computed by Gaussian convolution of the terminal data. With g = gamma z^2
/// the convolution acts on exp(2 gamma phi) and the result is mapped back by
/// log(w) / (2 gamma).
Field classical_oracle(const ProblemSpec& spec, const Grid& grid);

struct OrderReport {
  double min_diff = 0.0;
  std::size_t slice = 0;
  std::size_t node = 0;
  bool pass = false;
};

/// Checks that spec_hi dominates spec_lo (terminal data, generators,
/// obstacles; equal forward coefficients) on sampled nodes, solves both with
/// the same mode and penalties, and reports min (u_hi - u_lo).
OrderReport comparison_harness(const ProblemSpec& spec_hi, const ProblemSpec& spec_lo,
                               const Grid& grid, StepMode mode = StepMode::penalized,
                               const PenaltyParams& pen = {});

/// Throws std::invalid_argument naming the first node where spec_hi does not dominate spec_lo.
void check_ordering(const ProblemSpec& spec_hi, const ProblemSpec& spec_lo, const Grid& grid);

}  // namespace gdr
