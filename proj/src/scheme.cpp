#include "gdr/scheme.hpp"

#include <cmath>
#include <sstream>

namespace gdr {

const char* to_string(StepMode mode) {
  switch (mode) {
    case StepMode::penalized: return "penalized";
    case StepMode::project_lower: return "project_lower";
    case StepMode::project_upper: return "project_upper";
    case StepMode::project_both: return "project_both";
  }
  return "?";
}

namespace {

struct DriftBounds {
  double b = 0.0;
  double l = 0.0;
};

DriftBounds sample_drift(const ProblemSpec& spec, double x_min, double x_max, std::size_t nx) {
  DriftBounds out;
  const double dx = (x_max - x_min) / static_cast<double>(nx);
  constexpr int kTimeSamples = 9;
  for (int i = 0; i < kTimeSamples; ++i) {
    const double t = spec.T * i / (kTimeSamples - 1);
    for (std::size_t j = 0; j <= nx; ++j) {
      const double x = x_min + static_cast<double>(j) * dx;
      out.b = std::max(out.b, std::abs(spec.coeffs.b(t, x)));
      out.l = std::max(out.l, std::abs(spec.coeffs.l(t, x)));
    }
  }
  return out;
}

bool projects_lower(StepMode mode) {
  return mode == StepMode::project_lower || mode == StepMode::project_both;
}

bool projects_upper(StepMode mode) {
  return mode == StepMode::project_upper || mode == StepMode::project_both;
}

// Implicit penalties followed by the projection of the mode.
double apply_obstacles(double v, double t, double x, const ProblemSpec& spec, double dt,
                       const PenaltyParams& pen, StepMode mode, double* resolved_out = nullptr) {
  const ObstaclePair& ob = spec.obstacles;
  std::optional<double> lo;
  std::optional<double> hi;
  if (ob.lower_active) lo = ob.h(t, x);
  if (ob.upper_active) hi = ob.h_prime(t, x);
  double u = resolve_penalties(v, lo, hi, dt * pen.m_lower, dt * pen.n_upper);
  if (resolved_out) *resolved_out = u;
  if (lo && projects_lower(mode)) u = std::max(u, *lo);
  if (hi && projects_upper(mode)) u = std::min(u, *hi);
  return u;
}

[[noreturn]] void fail(const char* term, std::size_t j, double t, double x) {
  std::ostringstream os;
  os << "non-finite " << term << " at node j=" << j << " (t=" << t << ", x=" << x << ")";
  throw SolverError(os.str());
}

}  // namespace

double max_stable_dt(const ProblemSpec& spec, double x_min, double x_max, std::size_t nx,
                     double cfl_safety) {
  const double dx = (x_max - x_min) / static_cast<double>(nx);
  const DriftBounds drift = sample_drift(spec, x_min, x_max, nx);
  const double s_hi = spec.gparams.sigma_high_sq;
  const double b_max = drift.b + s_hi * drift.l;
  const double lip = spec.gen.L_y * (1.0 + s_hi);
  return cfl_safety * dx * dx / (s_hi * spec.coeffs.cap_vol + dx * b_max + dx * dx * lip);
}

Grid build_grid(const ProblemSpec& spec, double x_min, double x_max, std::size_t nx,
                double cfl_safety, const GridOptions& options) {
  if (!(x_min < x_max)) throw std::invalid_argument("build_grid: empty spatial domain");
  if (nx < 8) throw std::invalid_argument("build_grid: need nx >= 8");
  if (!(cfl_safety > 0.0 && cfl_safety <= 1.0))
    throw std::invalid_argument("build_grid: cfl_safety must lie in (0, 1]");
  if (!(spec.T > 0.0)) throw std::invalid_argument("build_grid: horizon must be positive");

  const double dt_max = max_stable_dt(spec, x_min, x_max, nx, cfl_safety);
  const double steps = std::ceil(spec.T / dt_max);
  if (!std::isfinite(steps) || steps > static_cast<double>(options.nt_cap)) {
    std::ostringstream os;
    os << "build_grid: CFL bound dt <= " << dt_max << " needs " << steps
       << " time steps, above the cap of " << options.nt_cap;
    throw std::invalid_argument(os.str());
  }
  auto nt = static_cast<std::size_t>(std::max(steps, 1.0));
  // ceil can land one short when T / dt_max is an integer up to rounding.
  while (spec.T / static_cast<double>(nt) > dt_max) ++nt;

  Differencing diff = Differencing::central;
  switch (options.differencing) {
    case DifferencingChoice::central: diff = Differencing::central; break;
    case DifferencingChoice::upwind: diff = Differencing::upwind; break;
    case DifferencingChoice::automatic: {
      // Central differences keep the stencil weights non-negative only while
      // the cell Peclet number stays below one.
      const DriftBounds drift = sample_drift(spec, x_min, x_max, nx);
      const double dx = (x_max - x_min) / static_cast<double>(nx);
      const double transport = drift.b + spec.gparams.sigma_high_sq * drift.l;
      const double diffusion = spec.gparams.sigma_low_sq * spec.coeffs.eps_vol;
      diff = dx * transport <= diffusion ? Differencing::central : Differencing::upwind;
      break;
    }
  }
  return Grid(x_min, x_max, nx, spec.T, nt, diff);
}

NodeDerivs node_derivs(const Layer& next_layer, std::size_t j, const Grid& grid, double t) {
  const auto i = static_cast<Eigen::Index>(j);
  const double dx = grid.dx();
  const double um = next_layer(i - 1);
  const double u0 = next_layer(i);
  const double up = next_layer(i + 1);
  NodeDerivs d = NodeDerivs::central(u0, (up - um) / (2.0 * dx), (up - 2.0 * u0 + um) / (dx * dx),
                                     grid.x(j), t);
  if (grid.differencing() == Differencing::upwind) {
    d.du_forward = (up - u0) / dx;
    d.du_backward = (u0 - um) / dx;
  }
  return d;
}

NodeStep step_node(const Layer& next_layer, std::size_t j, double t, const ProblemSpec& spec,
                   const Grid& grid, const PenaltyParams& pen, StepMode mode,
                   std::optional<double> scenario) {
  const double dt = grid.dt();
  const NodeDerivs d = node_derivs(next_layer, j, grid, t + dt);
  const double rhs = scenario ? rhs_F_scenario(d, spec, *scenario) : rhs_F(d, spec);
  if (!std::isfinite(rhs)) fail("right-hand side F", j, t, d.x);
  NodeStep out;
  out.explicit_value = d.u + dt * rhs;
  out.value = apply_obstacles(out.explicit_value, t, d.x, spec, dt, pen, mode, &out.resolved);
  if (!std::isfinite(out.value)) fail("penalty resolution", j, t, d.x);
  return out;
}

Layer explicit_step(const Layer& next_layer, double t, const ProblemSpec& spec, const Grid& grid,
                    const PenaltyParams& pen, StepMode mode) {
  if (static_cast<std::size_t>(next_layer.size()) != grid.x_count())
    throw std::invalid_argument("explicit_step: layer size does not match the grid");
  Layer out(next_layer.size());
  for (std::size_t j = 1; j < grid.nx(); ++j)
    out(static_cast<Eigen::Index>(j)) = step_node(next_layer, j, t, spec, grid, pen, mode).value;
  boundary_fill(out, t, spec, grid, pen, mode);
  return out;
}

void boundary_fill(Layer& layer, double t, const ProblemSpec& spec, const Grid& grid,
                   const PenaltyParams& pen, StepMode mode) {
  const auto n = static_cast<Eigen::Index>(grid.nx());
  layer(0) = 2.0 * layer(1) - layer(2);
  layer(n) = 2.0 * layer(n - 1) - layer(n - 2);
  layer(0) = apply_obstacles(layer(0), t, grid.x(0), spec, grid.dt(), pen, mode);
  layer(n) = apply_obstacles(layer(n), t, grid.x(grid.nx()), spec, grid.dt(), pen, mode);
}

}  // namespace gdr
