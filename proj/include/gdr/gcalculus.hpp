#pragma once

#include <algorithm>
#include <concepts>

#include "gdr/model.hpp"

namespace gdr {

/// G(a) = 1/2 (sigma_high^2 a^+ - sigma_low^2 a^-).
template <std::floating_point Scalar>
Scalar g_eval(Scalar a, const GParams& gp) {
  const Scalar pos = std::max(a, Scalar(0));
  const Scalar neg = std::max(-a, Scalar(0));
  return Scalar(0.5) * (Scalar(gp.sigma_high_sq) * pos - Scalar(gp.sigma_low_sq) * neg);
}

/// Maximizer of v -> v a / 2 over [sigma_low^2, sigma_high^2]. Ties at a == 0
/// resolve to the upper endpoint.
template <std::floating_point Scalar>
Scalar worst_case_vol(Scalar a, const GParams& gp) {
  return a < Scalar(0) ? Scalar(gp.sigma_low_sq) : Scalar(gp.sigma_high_sq);
}

/// Value and space differences of u at one node. du is the central first
/// difference; du_forward / du_backward are the one-sided differences used by
/// the upwind drift treatment and equal du under central differencing.
struct NodeDerivs {
  double u = 0.0;
  double du = 0.0;
  double d2u = 0.0;
  double x = 0.0;
  double t = 0.0;
  double du_forward = 0.0;
  double du_backward = 0.0;

  static NodeDerivs central(double u, double du, double d2u, double x, double t) {
    return {u, du, d2u, x, t, du, du};
  }
};

/// sigma^2 D2u + 2 l Du + 2 g(t, x, u, sigma Du)
double rhs_H(const NodeDerivs& d, const ProblemSpec& spec);

/// G(H) + b Du + f(t, x, u, sigma Du)
double rhs_F(const NodeDerivs& d, const ProblemSpec& spec);

/// rhs_F with G(H) replaced by v H / 2 for one fixed scenario v.
double rhs_F_scenario(const NodeDerivs& d, const ProblemSpec& spec, double v);

/// rhs_F + m (u - h)^- - n (u - h')^+, skipping inactive obstacles.
double rhs_F_penalized(const NodeDerivs& d, const ProblemSpec& spec, const PenaltyParams& pen);

}  // namespace gdr
