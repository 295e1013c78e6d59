#include "gdr/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gdr/grid.hpp"

namespace gdr {

void PenaltyParams::check() const {
  if (!std::isfinite(m_lower) || !std::isfinite(n_upper) || m_lower < 0.0 || n_upper < 0.0)
    throw std::invalid_argument("penalty intensities must be finite and non-negative");
}

std::size_t ValidationReport::count(const std::string& constraint) const {
  return static_cast<std::size_t>(
      std::count_if(violations.begin(), violations.end(),
                    [&](const Violation& v) { return v.constraint == constraint; }));
}

namespace {

class Sampler {
 public:
  explicit Sampler(ValidationReport& report) : report_(report) {}

  double eval(const FnSpec& f, const char* name, const Args& a) {
    const double v = f(a);
    if (!std::isfinite(v)) {
      std::ostringstream os;
      os << "function " << name << " (" << f.kind_name() << ") is not finite at t=" << a.t
         << " x=" << a.x << " y=" << a.y << " z=" << a.z;
      throw EvaluationError(os.str());
    }
    if (std::isfinite(f.sup_bound()) && std::abs(v) > f.sup_bound() * (1.0 + 1e-12)) {
      std::ostringstream os;
      os << name << "=" << v << " exceeds declared bound " << f.sup_bound();
      add("|" + std::string(name) + "| ≤ sup_bound", os.str(), a.t, a.x);
    }
    return v;
  }

  void add(std::string constraint, std::string detail, double t, double x) {
    report_.violations.push_back({std::move(constraint), std::move(detail), t, x});
  }

 private:
  ValidationReport& report_;
};

std::string describe(double lhs, const char* op, double rhs) {
  std::ostringstream os;
  os << lhs << ' ' << op << ' ' << rhs;
  return os.str();
}

}  // namespace

ValidationReport validate(const ProblemSpec& spec, const Grid& probe) {
  if (probe.T() < spec.T)
    throw std::invalid_argument("validation probe does not cover the time horizon");

  ValidationReport report;
  Sampler s(report);

  const GParams& gp = spec.gparams;
  if (!(gp.sigma_low_sq > 0.0) || gp.sigma_low_sq > gp.sigma_high_sq ||
      !std::isfinite(gp.sigma_high_sq))
    s.add("0<σ̲²<σ̄²", describe(gp.sigma_low_sq, "vs", gp.sigma_high_sq), 0.0, 0.0);
  if (!(spec.T > 0.0)) s.add("T>0", describe(spec.T, ">", 0.0), 0.0, 0.0);
  const CoefficientSet& c = spec.coeffs;
  if (!(c.eps_vol > 0.0) || !(c.eps_vol < c.cap_vol))
    s.add("0<ε<K", describe(c.eps_vol, "<", c.cap_vol), 0.0, 0.0);

  const GeneratorSpec& gen = spec.gen;
  const ObstaclePair& ob = spec.obstacles;

  // Probe values for the (y, z) arguments of the generators.
  const double reach = std::max({1.0, gen.M_0, ob.N_0});
  const double yz[] = {-reach, -1.0, 0.0, 1.0, reach};

  for (std::size_t k = 0; k < probe.t_count(); ++k) {
    const double t = std::min(probe.t(k), spec.T);
    for (std::size_t j = 0; j < probe.x_count(); ++j) {
      const double x = probe.x(j);
      const Args tx{t, x, 0.0, 0.0};

      s.eval(c.b, "b", tx);
      s.eval(c.l, "l", tx);
      const double sig = s.eval(c.sigma, "sigma", tx);
      const double sig2 = sig * sig;
      if (sig2 < c.eps_vol || sig2 > c.cap_vol) {
        std::ostringstream os;
        os << "sigma^2=" << sig2 << " outside [" << c.eps_vol << ", " << c.cap_vol << "]";
        s.add("ε ≤ σ² ≤ K", os.str(), t, x);
      }

      const double f0 = s.eval(gen.f, "f", tx);
      const double g0 = s.eval(gen.g, "g", tx);
      if (std::abs(f0) + std::abs(g0) > gen.M_0)
        s.add("|f(t,x,0,0)|+|g(t,x,0,0)| ≤ M_0", describe(std::abs(f0) + std::abs(g0), "≤", gen.M_0),
              t, x);
      for (double y : yz)
        for (double z : yz) {
          const Args a{t, x, y, z};
          s.eval(gen.f, "f", a);
          s.eval(gen.g, "g", a);
        }

      double h = 0.0;
      double hp = 0.0;
      if (ob.lower_active) {
        h = s.eval(ob.h, "h", tx);
        if (h > ob.N_0) s.add("h ≤ N_0", describe(h, "≤", ob.N_0), t, x);
      }
      if (ob.upper_active) {
        hp = s.eval(ob.h_prime, "h'", tx);
        if (-hp > ob.N_0) s.add("−h′ ≤ N_0", describe(-hp, "≤", ob.N_0), t, x);
      }
      if (ob.lower_active && ob.upper_active && h > hp)
        s.add("h ≤ h′", describe(h, "≤", hp), t, x);

      if (k == probe.t_count() - 1) {
        const double phi = s.eval(spec.phi, "phi", Args{spec.T, x, 0.0, 0.0});
        if (std::abs(phi) > gen.M_0) s.add("|φ| ≤ M_0", describe(std::abs(phi), "≤", gen.M_0), t, x);
        if (ob.lower_active && h > phi) s.add("h(T,x) ≤ φ(x)", describe(h, "≤", phi), t, x);
        if (ob.upper_active && phi > hp) s.add("φ(x) ≤ h′(T,x)", describe(phi, "≤", hp), t, x);
      }
    }
  }
  return report;
}

}  // namespace gdr
