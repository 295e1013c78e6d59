#pragma once

#include <chrono>
#include <string>
#include <utility>
#include <vector>

#include "gdr/decomposition.hpp"
#include "gdr/grid.hpp"
#include "gdr/model.hpp"
#include "gdr/scheme.hpp"

namespace gdr {

struct SolveReport {
  Field field;
  /// max over nodes of (u - h')^+ and (h - u)^+; zero for inactive sides.
  double sup_upper_violation = 0.0;
  double sup_lower_violation = 0.0;
  std::size_t iterations = 0;
  std::chrono::duration<double> wall_time{0.0};
  StepMode mode = StepMode::penalized;
  PenaltyParams pen;
};

enum class Pairing { diagonal, fixed_n, fixed_m };

const char* to_string(Pairing p);
Pairing pairing_from_string(const std::string& name);

/// Increasing penalty intensities. With diagonal pairing stage i uses
/// n = m = intensities[i]; fixed_n holds n at fixed_intensity and sweeps m,
/// fixed_m the other way round.
struct PenaltySchedule {
  std::vector<double> intensities{4.0, 16.0, 64.0, 256.0, 1024.0};
  double stop_tol = 1e-4;
  Pairing pairing = Pairing::diagonal;
  double fixed_intensity = 0.0;

  void check() const;
  std::vector<PenaltyParams> stages() const;
};

struct TraceStage {
  std::size_t stage = 0;
  double n = 0.0;
  double m = 0.0;
  /// Sup distance to the previous stage; stage 1 is compared with the
  /// penalty-free solve.
  double sup_diff = 0.0;
  double upper_viol = 0.0;
  double lower_viol = 0.0;
  double r_plus = 0.0;
  double r_minus = 0.0;
};

struct ConvergenceTrace {
  std::vector<TraceStage> stages;
  bool converged = false;
};

enum class Side { lower, upper };

/// Backward sweep from the terminal condition with a fixed step mode.
SolveReport solve(const ProblemSpec& spec, const Grid& grid, const PenaltyParams& pen,
                  StepMode mode);

/// Doubly penalized equation: u_{n,m}.
SolveReport solve_penalized(const ProblemSpec& spec, const Grid& grid, const PenaltyParams& pen);

/// Reflected at the lower obstacle, penalized with intensity n at the upper one.
SolveReport solve_lower_reflected_upper_penalized(const ProblemSpec& spec, const Grid& grid,
                                                  double n);

/// Clamps into [h, h'] at every step. Needs both obstacles.
SolveReport solve_double_projection(const ProblemSpec& spec, const Grid& grid);

/// Single obstacle problem on the chosen side; the other side must be inactive.
SolveReport solve_single_reflected(const ProblemSpec& spec, const Grid& grid, Side side);

/// Runs solve_penalized along the schedule until two consecutive stages are
/// within stop_tol. An exhausted schedule returns the last stage with
/// trace.converged == false.
std::pair<SolveReport, ConvergenceTrace> solve_limit(const ProblemSpec& spec, const Grid& grid,
                                                     const PenaltySchedule& schedule);

}  // namespace gdr
