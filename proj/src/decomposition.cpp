#include "gdr/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gdr {

double ProcessBundle::max_identity_residual() const {
  return identity_residual.values().abs().maxCoeff();
}

double ProcessBundle::max_defect() const { return martingale_defect.values().maxCoeff(); }

std::vector<double> default_vol_grid(const GParams& gp, std::size_t points) {
  if (points < 2 || gp.degenerate()) return {gp.sigma_low_sq};
  std::vector<double> v(points);
  for (std::size_t i = 0; i < points; ++i)
    v[i] = gp.sigma_low_sq +
           (gp.sigma_high_sq - gp.sigma_low_sq) * static_cast<double>(i) / static_cast<double>(points - 1);
  v.back() = gp.sigma_high_sq;
  return v;
}

namespace {

void check_terminal(const Field& field, const ProblemSpec& spec) {
  const Grid& grid = field.grid();
  if (grid.T() != spec.T) throw std::invalid_argument("reconstruct: grid horizon differs from spec");
  const std::size_t nt = grid.nt();
  for (std::size_t j = 0; j < grid.x_count(); ++j) {
    const double phi = spec.phi(spec.T, grid.x(j));
    if (field(nt, j) != phi)
      throw std::invalid_argument("reconstruct: terminal slice does not match the spec's terminal condition");
  }
}

void check_vol_grid(const std::vector<double>& v_grid, const GParams& gp) {
  if (v_grid.empty()) throw std::invalid_argument("volatility grid is empty");
  for (double v : v_grid)
    if (!(v >= gp.sigma_low_sq && v <= gp.sigma_high_sq))
      throw std::invalid_argument("volatility scenario outside [sigma_low^2, sigma_high^2]");
}

double scenario_gain(const Layer& next, std::size_t j, double t, const ProblemSpec& spec,
                     const Grid& grid, const PenaltyParams& pen, StepMode mode, double actual,
                     const std::vector<double>& v_grid) {
  double worst = -std::numeric_limits<double>::infinity();
  for (double v : v_grid)
    worst = std::max(worst, step_node(next, j, t, spec, grid, pen, mode, v).value - actual);
  return worst;
}

}  // namespace

ProcessBundle reconstruct(const Field& field, const ProblemSpec& spec, const PenaltyParams& pen,
                          StepMode mode, bool with_defect) {
  pen.check();
  check_terminal(field, spec);
  const Grid& grid = field.grid();
  const double dt = grid.dt();
  const ObstaclePair& ob = spec.obstacles;
  const std::vector<double> v_grid = default_vol_grid(spec.gparams);

  ProcessBundle out{field, Field(grid), Field(grid), Field(grid), Field(grid),
                    Field(grid), Field(grid), mode, pen};

  for (std::size_t k = 0; k <= grid.nt(); ++k) {
    const double t = grid.t(k);
    const Layer y = field.slice(k);
    const auto n = static_cast<Eigen::Index>(grid.nx());
    for (Eigen::Index j = 0; j <= n; ++j) {
      double du = 0.0;
      if (j == 0) du = (y(1) - y(0)) / grid.dx();
      else if (j == n) du = (y(n) - y(n - 1)) / grid.dx();
      else du = (y(j + 1) - y(j - 1)) / (2.0 * grid.dx());
      out.Z(k, static_cast<std::size_t>(j)) = spec.coeffs.sigma(t, grid.x(static_cast<std::size_t>(j))) * du;
    }
  }

  for (std::size_t k = 0; k < grid.nt(); ++k) {
    const double t = grid.t(k);
    const Layer next = field.slice(k + 1);
    for (std::size_t j = 1; j < grid.nx(); ++j) {
      const double x = grid.x(j);
      const NodeStep s = step_node(next, j, t, spec, grid, pen, mode);
      double plus = std::max(field(k, j) - s.resolved, 0.0);
      double minus = std::max(s.resolved - field(k, j), 0.0);
      if (ob.lower_active) plus += dt * pen.m_lower * std::max(ob.h(t, x) - s.resolved, 0.0);
      if (ob.upper_active) minus += dt * pen.n_upper * std::max(s.resolved - ob.h_prime(t, x), 0.0);
      out.dAplus(k, j) = plus;
      out.dAminus(k, j) = minus;
      out.identity_residual(k, j) = field(k, j) - (s.explicit_value + plus - minus);

      const NodeDerivs d = node_derivs(next, j, grid, t + dt);
      out.worst_vol(k, j) = worst_case_vol(rhs_H(d, spec), spec.gparams);
      if (with_defect)
        out.martingale_defect(k, j) =
            scenario_gain(next, j, t, spec, grid, pen, mode, s.value, v_grid);
    }
  }
  return out;
}

SkorohodResiduals skorohod_residuals(const ProcessBundle& bundle, const ProblemSpec& spec) {
  SkorohodResiduals r;
  const Grid& grid = bundle.Y.grid();
  const ObstaclePair& ob = spec.obstacles;
  for (std::size_t j = 1; j < grid.nx(); ++j) {
    const double x = grid.x(j);
    double plus = 0.0;
    double minus = 0.0;
    for (std::size_t k = 0; k < grid.nt(); ++k) {
      const double t = grid.t(k);
      const double y = bundle.Y(k, j);
      if (ob.lower_active && bundle.dAplus(k, j) > 0.0) {
        const double gap = y - ob.h(t, x);
        plus += std::abs(gap) * bundle.dAplus(k, j);
        r.lower_overshoot = std::max(r.lower_overshoot, -gap);
      }
      if (ob.upper_active && bundle.dAminus(k, j) > 0.0) {
        const double gap = ob.h_prime(t, x) - y;
        minus += std::abs(gap) * bundle.dAminus(k, j);
        r.upper_overshoot = std::max(r.upper_overshoot, -gap);
      }
    }
    r.r_plus = std::max(r.r_plus, plus);
    r.r_minus = std::max(r.r_minus, minus);
  }
  return r;
}

double martingale_defect_scan(const Field& field, const ProblemSpec& spec, const PenaltyParams& pen,
                              StepMode mode, const std::vector<double>& v_grid) {
  check_vol_grid(v_grid, spec.gparams);
  const Grid& grid = field.grid();
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < grid.nt(); ++k) {
    const double t = grid.t(k);
    const Layer next = field.slice(k + 1);
    for (std::size_t j = 1; j < grid.nx(); ++j) {
      const double actual = step_node(next, j, t, spec, grid, pen, mode).value;
      worst = std::max(worst, scenario_gain(next, j, t, spec, grid, pen, mode, actual, v_grid));
    }
  }
  return worst;
}

Field bmo_tail_sums(const ProcessBundle& bundle) {
  const Grid& grid = bundle.Z.grid();
  Field tail(grid);
  const double v_edge = bundle.worst_vol.values().maxCoeff();
  for (std::size_t j = 0; j < grid.x_count(); ++j) {
    double acc = 0.0;
    for (std::size_t k = grid.nt(); k-- > 0;) {
      const double z = bundle.Z(k, j);
      // Boundary columns carry no scenario; use the upper volatility there.
      const double v = bundle.worst_vol(k, j) > 0.0 ? bundle.worst_vol(k, j) : v_edge;
      acc += z * z * v * grid.dt();
      tail(k, j) = acc;
    }
  }
  return tail;
}

double bmo_diagnostic(const ProcessBundle& bundle) {
  return bmo_tail_sums(bundle).values().maxCoeff();
}

}  // namespace gdr
