#pragma once

#include <vector>

#include "gdr/grid.hpp"
#include "gdr/model.hpp"
#include "gdr/scheme.hpp"

namespace gdr {

/// Grid reconstruction of (Y, Z, A+, A-) from a solved field. Row k of the
/// increment fields holds the increment over [t_k, t_{k+1}]; the terminal row
/// and the two boundary columns are zero. K is not stored: under the
/// worst-case scenario its increments vanish, and its sign under every other
/// scenario is what martingale_defect records.
struct ProcessBundle {
  Field Y;
  Field Z;
  Field dAplus;
  Field dAminus;
  Field martingale_defect;
  /// Maximizing volatility v* at each node (sign of H at the next layer).
  Field worst_vol;
  /// |Y_k - (Y_{k+1} + dt F + dA+ - dA-)| per node.
  Field identity_residual;
  StepMode mode = StepMode::penalized;
  PenaltyParams pen;

  double max_identity_residual() const;
  double max_defect() const;
};

/// Five equally spaced volatilities spanning [sigma_low^2, sigma_high^2].
std::vector<double> default_vol_grid(const GParams& gp, std::size_t points = 5);

/// Rebuilds the bundle for a field computed with the same spec, penalties and
/// mode. Without with_defect the martingale_defect field is left at zero.
ProcessBundle reconstruct(const Field& field, const ProblemSpec& spec, const PenaltyParams& pen,
                          StepMode mode = StepMode::penalized, bool with_defect = true);

struct SkorohodResiduals {
  /// max over x-columns of sum_k |Y_k - h_k| dA+_k
  double r_plus = 0.0;
  /// max over x-columns of sum_k |h'_k - Y_k| dA-_k
  double r_minus = 0.0;
  /// Largest (h - Y)^+ where dA+ acts, and (Y - h')^+ where dA- acts.
  double lower_overshoot = 0.0;
  double upper_overshoot = 0.0;
};

SkorohodResiduals skorohod_residuals(const ProcessBundle& bundle, const ProblemSpec& spec);

/// Largest gain of a fixed-volatility step over the G step, across interior
/// nodes and the given scenarios. Non-positive for a consistent field.
double martingale_defect_scan(const Field& field, const ProblemSpec& spec, const PenaltyParams& pen,
                              StepMode mode, const std::vector<double>& v_grid);

/// Tail sums sum_{k >= tau} Z_k^2 v*_k dt per node.
Field bmo_tail_sums(const ProcessBundle& bundle);

/// Largest tail sum; a discrete stand-in for the BMO norm of Z.
double bmo_diagnostic(const ProcessBundle& bundle);

}  // namespace gdr
