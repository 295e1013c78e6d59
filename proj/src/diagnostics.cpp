#include "gdr/diagnostics.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <Eigen/QR>

#include "gdr/solvers.hpp"

namespace gdr {

namespace {

void require_same_lattice(const Field& a, const Field& b) {
  if (!a.grid().same_lattice(b.grid()))
    throw std::invalid_argument("fields live on different grids");
}

bool is_zero_constant(const FnSpec& f) { return f.is_zero(); }

}  // namespace

double sup_diff(const Field& a, const Field& b) {
  require_same_lattice(a, b);
  return (a.values() - b.values()).abs().maxCoeff();
}

double sup_diff_inner(const Field& a, const Field& b) {
  require_same_lattice(a, b);
  const Grid& g = a.grid();
  const auto first = static_cast<Eigen::Index>(g.inner_first());
  const auto width = static_cast<Eigen::Index>(g.inner_last() - g.inner_first() + 1);
  return (a.values().middleCols(first, width) - b.values().middleCols(first, width)).abs().maxCoeff();
}

RateFit rate_fit(std::vector<std::pair<double, double>> pairs) {
  if (pairs.size() < 3) throw std::invalid_argument("rate_fit needs at least three pairs");
  for (const auto& [size, err] : pairs)
    if (!(size > 0.0) || !(err > 0.0))
      throw std::invalid_argument("rate_fit needs positive sizes and errors");

  Eigen::MatrixXd design(static_cast<Eigen::Index>(pairs.size()), 2);
  Eigen::VectorXd rhs(static_cast<Eigen::Index>(pairs.size()));
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    design(r, 0) = std::log(pairs[i].first);
    design(r, 1) = 1.0;
    rhs(r) = std::log(pairs[i].second);
  }
  const Eigen::Vector2d coef = design.colPivHouseholderQr().solve(rhs);

  RateFit fit;
  fit.pairs = std::move(pairs);
  fit.slope = coef(0);
  fit.intercept = coef(1);
  const Eigen::VectorXd resid = rhs - design * coef;
  const double ss_tot = (rhs.array() - rhs.mean()).square().sum();
  fit.r_squared = ss_tot > 0.0 ? 1.0 - resid.squaredNorm() / ss_tot : 1.0;
  return fit;
}

Field classical_oracle(const ProblemSpec& spec, const Grid& grid) {
  const GParams& gp = spec.gparams;
  if (!gp.degenerate()) throw std::invalid_argument("classical_oracle needs sigma_low^2 == sigma_high^2");
  if (!spec.coeffs.sigma.is_constant())
    throw std::invalid_argument("classical_oracle needs a constant sigma");
  if (!is_zero_constant(spec.coeffs.b) || !is_zero_constant(spec.coeffs.l) ||
      !is_zero_constant(spec.gen.f))
    throw std::invalid_argument("classical_oracle needs b = l = f = 0");
  if (spec.obstacles.lower_active || spec.obstacles.upper_active)
    throw std::invalid_argument("classical_oracle needs inactive obstacles");

  double gamma = 0.0;
  if (const auto* q = std::get_if<fn::QuadraticInZ>(&spec.gen.g.kind())) gamma = q->gamma;
  else if (!is_zero_constant(spec.gen.g))
    throw std::invalid_argument("classical_oracle needs g = 0 or g = gamma z^2");

  // The clip bound of g is assumed not to bind; the transform holds for the unclipped gamma z^2.
  const double sigma = spec.coeffs.sigma(0.0, 0.0);
  const double rate = std::sqrt(gp.sigma_high_sq) * std::abs(sigma);
  const bool transformed = gamma != 0.0;

  auto terminal = [&](double x) {
    const double p = spec.phi(spec.T, x);
    return transformed ? std::exp(2.0 * gamma * p) : p;
  };
  auto back = [&](double w) { return transformed ? std::log(w) / (2.0 * gamma) : w; };

  constexpr double kWidth = 9.0;   // kernel truncation in standard deviations
  constexpr int kRefine = 4;       // lattice points per grid cell
  const double hq = grid.dx() / kRefine;
  const double reach = kWidth * rate * std::sqrt(spec.T) + hq;
  const auto pad = static_cast<long>(std::ceil(reach / hq));
  const long lattice = static_cast<long>(grid.nx()) * kRefine + 2 * pad + 1;
  std::vector<double> samples(static_cast<std::size_t>(lattice));
  for (long i = 0; i < lattice; ++i)
    samples[static_cast<std::size_t>(i)] = terminal(grid.x_min() + static_cast<double>(i - pad) * hq);

  Field out(grid);
  for (std::size_t k = 0; k <= grid.nt(); ++k) {
    const double tau = spec.T - grid.t(k);
    const double sd = rate * std::sqrt(std::max(tau, 0.0));
    for (std::size_t j = 0; j < grid.x_count(); ++j) {
      const double x = grid.x(j);
      double w = 0.0;
      if (k == grid.nt() || sd == 0.0) {
        w = terminal(x);
      } else if (sd >= 8.0 * hq) {
        const long half = static_cast<long>(std::ceil(kWidth * sd / hq));
        const long centre = static_cast<long>(j) * kRefine + pad;
        double num = 0.0;
        double den = 0.0;
        for (long i = -half; i <= half; ++i) {
          const double s = static_cast<double>(i) * hq / sd;
          const double weight = std::exp(-0.5 * s * s);
          num += weight * samples[static_cast<std::size_t>(centre + i)];
          den += weight;
        }
        w = num / den;
      } else {
        // Kernel narrower than the lattice: integrate the data directly.
        constexpr int kHalf = 72;
        const double h = kWidth * sd / kHalf;
        double num = 0.0;
        double den = 0.0;
        for (int i = -kHalf; i <= kHalf; ++i) {
          const double s = i * h / sd;
          const double weight = std::exp(-0.5 * s * s);
          num += weight * terminal(x + i * h);
          den += weight;
        }
        w = num / den;
      }
      out(k, j) = k == grid.nt() ? spec.phi(spec.T, x) : back(w);
    }
  }
  return out;
}

void check_ordering(const ProblemSpec& hi, const ProblemSpec& lo, const Grid& grid) {
  auto refuse = [](const std::string& what, double t, double x) {
    std::ostringstream os;
    os << "comparison precondition fails: " << what << " at t=" << t << ", x=" << x;
    throw std::invalid_argument(os.str());
  };
  if (hi.T != lo.T) refuse("different horizons", 0.0, 0.0);
  if (hi.gparams.sigma_low_sq != lo.gparams.sigma_low_sq ||
      hi.gparams.sigma_high_sq != lo.gparams.sigma_high_sq)
    refuse("different volatility intervals", 0.0, 0.0);

  const ObstaclePair& oh = hi.obstacles;
  const ObstaclePair& ol = lo.obstacles;
  // An inactive lower obstacle is -inf and an inactive upper one +inf.
  if (!oh.lower_active && ol.lower_active) refuse("lower obstacle of hi below lo (inactive)", 0.0, 0.0);
  if (!ol.upper_active && oh.upper_active) refuse("upper obstacle of lo above hi (inactive)", 0.0, 0.0);

  const double reach = std::max({1.0, hi.gen.M_0, lo.gen.M_0});
  const double yz[] = {-reach, -1.0, 0.0, 1.0, reach};
  for (std::size_t k = 0; k <= grid.nt(); ++k) {
    const double t = grid.t(k);
    for (std::size_t j = 0; j < grid.x_count(); ++j) {
      const double x = grid.x(j);
      if (hi.coeffs.b(t, x) != lo.coeffs.b(t, x) || hi.coeffs.l(t, x) != lo.coeffs.l(t, x) ||
          hi.coeffs.sigma(t, x) != lo.coeffs.sigma(t, x))
        refuse("forward coefficients differ", t, x);
      for (double y : yz)
        for (double z : yz) {
          if (hi.gen.f(t, x, y, z) < lo.gen.f(t, x, y, z)) refuse("f_hi < f_lo", t, x);
          if (hi.gen.g(t, x, y, z) < lo.gen.g(t, x, y, z)) refuse("g_hi < g_lo", t, x);
        }
      if (oh.lower_active && ol.lower_active && oh.h(t, x) < ol.h(t, x)) refuse("h_hi < h_lo", t, x);
      if (oh.upper_active && ol.upper_active && oh.h_prime(t, x) < ol.h_prime(t, x))
        refuse("h'_hi < h'_lo", t, x);
      if (k == grid.nt() && hi.phi(hi.T, x) < lo.phi(lo.T, x)) refuse("phi_hi < phi_lo", t, x);
    }
  }
}

OrderReport comparison_harness(const ProblemSpec& spec_hi, const ProblemSpec& spec_lo,
                               const Grid& grid, StepMode mode, const PenaltyParams& pen) {
  check_ordering(spec_hi, spec_lo, grid);
  const SolveReport hi = solve(spec_hi, grid, pen, mode);
  const SolveReport lo = solve(spec_lo, grid, pen, mode);
  OrderReport report;
  Eigen::Index k = 0;
  Eigen::Index j = 0;
  report.min_diff = (hi.field.values() - lo.field.values()).minCoeff(&k, &j);
  report.slice = static_cast<std::size_t>(k);
  report.node = static_cast<std::size_t>(j);
  report.pass = report.min_diff >= -1e-10;
  return report;
}

}  // namespace gdr
