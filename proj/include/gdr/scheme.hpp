#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

#include "gdr/gcalculus.hpp"
#include "gdr/grid.hpp"
#include "gdr/model.hpp"

namespace gdr {

/// Thrown when a time step produces a non-finite value.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// What is done with the obstacles after the explicit update.
///   penalized      implicit penalties only
///   project_lower  penalties, then u = max(u, h)
///   project_upper  penalties, then u = min(u, h')
///   project_both   penalties, then u = clamp(u, h, h')
enum class StepMode { penalized, project_lower, project_upper, project_both };

const char* to_string(StepMode mode);

enum class DifferencingChoice { automatic, central, upwind };

struct GridOptions {
  DifferencingChoice differencing = DifferencingChoice::automatic;
  std::size_t nt_cap = 10'000'000;
};

/// Largest stable time step for spacing dx:
///   cfl_safety * dx^2 / (sigma_high^2 K + dx B_max + dx^2 L)
/// with B_max = sup|b| + sigma_high^2 sup|l| sampled on the nodes and
/// L = L_y (1 + sigma_high^2) covering the y-dependence of the generators.
double max_stable_dt(const ProblemSpec& spec, double x_min, double x_max, std::size_t nx,
                     double cfl_safety);

/// Uniform grid on [x_min, x_max] x [0, T] with the smallest nt satisfying the CFL bound.
Grid build_grid(const ProblemSpec& spec, double x_min, double x_max, std::size_t nx,
                double cfl_safety, const GridOptions& options = {});

/// Solves u = v + a (u - h)^- - c (u - h')^+ for u, with a, c >= 0 and h <= h'.
/// Inactive sides are passed as std::nullopt.
template <std::floating_point Scalar>
Scalar resolve_penalties(Scalar v, std::optional<Scalar> lower, std::optional<Scalar> upper,
                         Scalar a, Scalar c) {
  if (lower && v < *lower) return (v + a * *lower) / (Scalar(1) + a);
  if (upper && v > *upper) return (v + c * *upper) / (Scalar(1) + c);
  return v;
}

/// The three stages of one node update.
struct NodeStep {
  double explicit_value = 0.0;  ///< u_next + dt F
  double resolved = 0.0;        ///< after the implicit penalties
  double value = 0.0;           ///< after the projection of the mode
};

/// Differences of next_layer at interior node j.
NodeDerivs node_derivs(const Layer& next_layer, std::size_t j, const Grid& grid, double t);

/// One interior node update. When scenario is set, G(H) is replaced by v H / 2.
NodeStep step_node(const Layer& next_layer, std::size_t j, double t, const ProblemSpec& spec,
                   const Grid& grid, const PenaltyParams& pen, StepMode mode,
                   std::optional<double> scenario = std::nullopt);

/// Backward step from the layer at t + dt to the layer at t.
Layer explicit_step(const Layer& next_layer, double t, const ProblemSpec& spec, const Grid& grid,
                    const PenaltyParams& pen, StepMode mode);

/// Fills the two boundary nodes by zero-curvature extrapolation, then applies
/// the obstacle treatment of the mode: projection on projected sides, the
/// implicit penalty resolution otherwise.
void boundary_fill(Layer& layer, double t, const ProblemSpec& spec, const Grid& grid,
                   const PenaltyParams& pen, StepMode mode);

}  // namespace gdr
