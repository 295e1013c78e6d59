#include "gdr/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gdr {

const char* to_string(Pairing p) {
  switch (p) {
    case Pairing::diagonal: return "diagonal";
    case Pairing::fixed_n: return "fixed_n";
    case Pairing::fixed_m: return "fixed_m";
  }
  return "?";
}

Pairing pairing_from_string(const std::string& name) {
  if (name == "diagonal") return Pairing::diagonal;
  if (name == "fixed_n") return Pairing::fixed_n;
  if (name == "fixed_m") return Pairing::fixed_m;
  throw std::invalid_argument("unknown pairing '" + name + "'");
}

void PenaltySchedule::check() const {
  if (intensities.empty()) throw std::invalid_argument("penalty schedule is empty");
  for (std::size_t i = 0; i < intensities.size(); ++i) {
    if (!std::isfinite(intensities[i]) || intensities[i] < 0.0)
      throw std::invalid_argument("penalty intensities must be finite and non-negative");
    if (i > 0 && !(intensities[i] > intensities[i - 1]))
      throw std::invalid_argument("penalty intensities must be strictly increasing");
  }
  if (!(stop_tol > 0.0)) throw std::invalid_argument("schedule stop_tol must be positive");
  if (!std::isfinite(fixed_intensity) || fixed_intensity < 0.0)
    throw std::invalid_argument("fixed intensity must be finite and non-negative");
}

std::vector<PenaltyParams> PenaltySchedule::stages() const {
  check();
  std::vector<PenaltyParams> out;
  out.reserve(intensities.size());
  for (double k : intensities) {
    switch (pairing) {
      case Pairing::diagonal: out.push_back({k, k}); break;
      case Pairing::fixed_n: out.push_back({k, fixed_intensity}); break;
      case Pairing::fixed_m: out.push_back({fixed_intensity, k}); break;
    }
  }
  return out;
}

namespace {

void measure_violations(SolveReport& report, const ProblemSpec& spec) {
  const Grid& grid = report.field.grid();
  const ObstaclePair& ob = spec.obstacles;
  double up = 0.0;
  double lo = 0.0;
  for (std::size_t k = 0; k <= grid.nt(); ++k) {
    const double t = grid.t(k);
    for (std::size_t j = 0; j < grid.x_count(); ++j) {
      const double x = grid.x(j);
      const double u = report.field(k, j);
      if (ob.upper_active) up = std::max(up, u - ob.h_prime(t, x));
      if (ob.lower_active) lo = std::max(lo, ob.h(t, x) - u);
    }
  }
  report.sup_upper_violation = up;
  report.sup_lower_violation = lo;
}

}  // namespace

SolveReport solve(const ProblemSpec& spec, const Grid& grid, const PenaltyParams& pen,
                  StepMode mode) {
  pen.check();
  if (grid.T() != spec.T) throw std::invalid_argument("solve: grid horizon differs from spec");
  const auto start = std::chrono::steady_clock::now();

  SolveReport report;
  report.mode = mode;
  report.pen = pen;
  report.field = Field(grid);

  Layer layer(static_cast<Eigen::Index>(grid.x_count()));
  for (std::size_t j = 0; j < grid.x_count(); ++j)
    layer(static_cast<Eigen::Index>(j)) = spec.phi(spec.T, grid.x(j));
  if (!layer.allFinite()) throw SolverError("terminal condition is not finite on the grid");
  report.field.set_slice(grid.nt(), layer);

  for (std::size_t k = grid.nt(); k-- > 0;) {
    layer = explicit_step(layer, grid.t(k), spec, grid, pen, mode);
    report.field.set_slice(k, layer);
  }
  report.iterations = grid.nt();
  measure_violations(report, spec);
  report.wall_time = std::chrono::steady_clock::now() - start;
  return report;
}

SolveReport solve_penalized(const ProblemSpec& spec, const Grid& grid, const PenaltyParams& pen) {
  return solve(spec, grid, pen, StepMode::penalized);
}

SolveReport solve_lower_reflected_upper_penalized(const ProblemSpec& spec, const Grid& grid,
                                                  double n) {
  if (!spec.obstacles.lower_active)
    throw std::invalid_argument("lower-reflected solve needs an active lower obstacle");
  return solve(spec, grid, PenaltyParams{0.0, n}, StepMode::project_lower);
}

SolveReport solve_double_projection(const ProblemSpec& spec, const Grid& grid) {
  if (!spec.obstacles.lower_active || !spec.obstacles.upper_active)
    throw std::invalid_argument("double projection needs both obstacles active");
  return solve(spec, grid, PenaltyParams{}, StepMode::project_both);
}

SolveReport solve_single_reflected(const ProblemSpec& spec, const Grid& grid, Side side) {
  const ObstaclePair& ob = spec.obstacles;
  if (side == Side::lower) {
    if (!ob.lower_active || ob.upper_active)
      throw std::invalid_argument("lower reflected solve needs only the lower obstacle active");
    return solve(spec, grid, PenaltyParams{}, StepMode::project_lower);
  }
  if (!ob.upper_active || ob.lower_active)
    throw std::invalid_argument("upper reflected solve needs only the upper obstacle active");
  return solve(spec, grid, PenaltyParams{}, StepMode::project_upper);
}

std::pair<SolveReport, ConvergenceTrace> solve_limit(const ProblemSpec& spec, const Grid& grid,
                                                     const PenaltySchedule& schedule) {
  const std::vector<PenaltyParams> stages = schedule.stages();
  ConvergenceTrace trace;
  SolveReport previous = solve_penalized(spec, grid, PenaltyParams{});
  for (std::size_t i = 0; i < stages.size(); ++i) {
    SolveReport current = solve_penalized(spec, grid, stages[i]);
    const ProcessBundle bundle = reconstruct(current.field, spec, stages[i], StepMode::penalized, false);
    const SkorohodResiduals r = skorohod_residuals(bundle, spec);

    TraceStage st;
    st.stage = i + 1;
    st.n = stages[i].n_upper;
    st.m = stages[i].m_lower;
    st.sup_diff = (current.field.values() - previous.field.values()).abs().maxCoeff();
    st.upper_viol = current.sup_upper_violation;
    st.lower_viol = current.sup_lower_violation;
    st.r_plus = r.r_plus;
    st.r_minus = r.r_minus;
    trace.stages.push_back(st);

    previous = std::move(current);
    if (st.sup_diff < schedule.stop_tol) {
      trace.converged = true;
      break;
    }
  }
  return {std::move(previous), std::move(trace)};
}

}  // namespace gdr
