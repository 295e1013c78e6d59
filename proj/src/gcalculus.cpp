#include "gdr/gcalculus.hpp"

namespace gdr {

namespace {

// c * Du with the one-sided difference taken in the direction of c.
double drift(double c, const NodeDerivs& d) {
  return std::max(c, 0.0) * d.du_forward - std::max(-c, 0.0) * d.du_backward;
}

double lower_order(const NodeDerivs& d, const ProblemSpec& spec) {
  const Args tx{d.t, d.x, 0.0, 0.0};
  const double sig = spec.coeffs.sigma(tx);
  return drift(spec.coeffs.b(tx), d) + spec.gen.f(Args{d.t, d.x, d.u, sig * d.du});
}

}  // namespace

double rhs_H(const NodeDerivs& d, const ProblemSpec& spec) {
  const Args tx{d.t, d.x, 0.0, 0.0};
  const double sig = spec.coeffs.sigma(tx);
  return sig * sig * d.d2u + 2.0 * drift(spec.coeffs.l(tx), d) +
         2.0 * spec.gen.g(Args{d.t, d.x, d.u, sig * d.du});
}

double rhs_F(const NodeDerivs& d, const ProblemSpec& spec) {
  return g_eval(rhs_H(d, spec), spec.gparams) + lower_order(d, spec);
}

double rhs_F_scenario(const NodeDerivs& d, const ProblemSpec& spec, double v) {
  return 0.5 * (v * rhs_H(d, spec)) + lower_order(d, spec);
}

double rhs_F_penalized(const NodeDerivs& d, const ProblemSpec& spec, const PenaltyParams& pen) {
  double value = rhs_F(d, spec);
  const ObstaclePair& ob = spec.obstacles;
  if (ob.lower_active) value += pen.m_lower * std::max(ob.h(d.t, d.x) - d.u, 0.0);
  if (ob.upper_active) value -= pen.n_upper * std::max(d.u - ob.h_prime(d.t, d.x), 0.0);
  return value;
}

}  // namespace gdr
