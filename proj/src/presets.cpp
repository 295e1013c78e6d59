#include "gdr/presets.hpp"

#include <stdexcept>

namespace gdr {

namespace {

ProblemSpec base_spec() {
  ProblemSpec s;
  s.gparams = {1.0, 2.0};
  s.coeffs.sigma = FnSpec::constant(1.0);
  s.coeffs.eps_vol = 0.5;
  s.coeffs.cap_vol = 1.0;
  s.gen.M_0 = 1.0;
  s.obstacles.N_0 = 1.0;
  s.T = 1.0;
  return s;
}

void set_lower(ProblemSpec& s, FnSpec h) {
  s.obstacles.h = std::move(h);
  s.obstacles.lower_active = true;
}

void set_upper(ProblemSpec& s, FnSpec hp) {
  s.obstacles.h_prime = std::move(hp);
  s.obstacles.upper_active = true;
}

Preset constant_sandwich() {
  ProblemSpec s = base_spec();
  set_lower(s, FnSpec::constant(0.0));
  set_upper(s, FnSpec::constant(1.0));
  s.phi = FnSpec::constant(0.5);
  return {"constant-sandwich", "constant terminal value strictly between constant obstacles",
          "penalties never activate; bounded solution independent of n, m", s, std::nullopt, {}};
}

Preset gheat(bool convex) {
  ProblemSpec s = base_spec();
  s.phi = FnSpec::polynomial({0.0, 0.0, convex ? 1.0 : -1.0}, 100.0);
  s.gen.M_0 = 100.0;
  if (convex)
    return {"gheat-quadratic", "G-heat equation with phi = x^2, no obstacles",
            "upper branch of G: u = x^2 + sigma_high^2 (T - t)", s, std::nullopt, {}};
  return {"gheat-concave", "G-heat equation with phi = -x^2, no obstacles",
          "lower branch of G: u = -x^2 - sigma_low^2 (T - t)", s, std::nullopt, {}};
}

Preset gheat_capped() {
  ProblemSpec s = base_spec();
  const double cap = 0.8 * s.gparams.sigma_high_sq * s.T;
  s.phi = FnSpec::polynomial({0.0, 0.0, 1.0}, cap);
  set_upper(s, FnSpec::constant(cap));
  s.gen.M_0 = 2.0;
  s.obstacles.N_0 = 2.0;
  return {"gheat-capped", "G-heat with phi = min(x^2, 1.6) under the upper obstacle h' = 1.6",
          "Cauchy behaviour of the penalized family along the schedule", s, std::nullopt, {}};
}

Preset upper_active() {
  ProblemSpec s = base_spec();
  s.gen.f = FnSpec::constant(1.0);
  s.phi = FnSpec::polynomial({0.0, 0.0, -0.5}, 1.0);
  set_upper(s, FnSpec::constant(0.25));
  return {"upper-active", "constant upward driver f = 1 pressed against h' = 0.25",
          "n sup (u - h')^+ bounded independently of n; u_n decreasing in n", s, std::nullopt, {}};
}

Preset lower_active() {
  ProblemSpec s = base_spec();
  s.coeffs.b = FnSpec::constant(0.3);
  s.coeffs.l = FnSpec::constant(0.1);
  s.gen.f = FnSpec::affine(-0.5, -0.2, Var::y).declare(0.2, 0.0, 1.0);
  s.gen.L_y = 0.2;
  s.phi = FnSpec::affine(0.2, 0.02).declare_sup(0.4);
  set_lower(s, FnSpec::constant(0.0));
  return {"lower-active", "downward driver f = -0.5 - 0.2 y with drift, lower obstacle h = 0",
          "single lower reflection; contact-set Skorohod residual", s, std::nullopt, {}};
}

Preset double_active() {
  ProblemSpec s = base_spec();
  s.gen.f = FnSpec::polynomial({0.0, -1.0}, 0.25);
  set_lower(s, FnSpec::constant(-0.1));
  set_upper(s, FnSpec::constant(0.1));
  s.phi = FnSpec::constant(0.0);
  return {"double-active", "driver f = clamp(-x, -0.25, 0.25) hitting both obstacles -0.1, 0.1",
          "lower violation vanishes; u_{n,n} and the lower-reflected family agree; AMC residuals",
          s, std::nullopt, {}};
}

Preset colehopf() {
  ProblemSpec s = base_spec();
  s.gparams = {1.0, 1.0};
  s.gen.g = FnSpec::quadratic_in_z(0.5, 10.0);
  s.gen.L_z = 0.5;
  s.phi = FnSpec::tabulated({-1.0, 1.0}, {-0.5, 0.5});
  return {"quadratic-gen-colehopf", "classical volatility, g = z^2 / 2, bounded ramp terminal data",
          "quadratic-in-z generator against the exponential-transform oracle", s, std::nullopt, {}};
}

Preset quadratic_drift() {
  ProblemSpec s = base_spec();
  s.coeffs.b = FnSpec::polynomial({0.1, -0.02}, 0.5);
  s.coeffs.l = FnSpec::constant(0.05);
  s.coeffs.sigma = FnSpec::tabulated({-10.0, 10.0}, {0.75, 0.95});
  s.gen.f = FnSpec::affine(0.15, -0.1, Var::y).declare(0.1, 0.0, 0.25);
  s.gen.g = FnSpec::quadratic_in_z(0.25, 2.0);
  s.gen.L_y = 0.1;
  s.gen.L_z = 0.25;
  s.phi = FnSpec::tabulated({-2.0, 2.0}, {-0.3, 0.3});
  set_lower(s, FnSpec::constant(-0.3));
  set_upper(s, FnSpec::constant(0.3));
  return {"quadratic-drift", "state-dependent sigma, drift b and l, quadratic g, both obstacles",
          "every term of the nonlinear operator active at once", s, std::nullopt, {}};
}

ProblemSpec comparison_lo() {
  ProblemSpec s = base_spec();
  s.gen.f = FnSpec::polynomial({0.0, -1.0}, 0.25);
  set_lower(s, FnSpec::constant(-0.2));
  set_upper(s, FnSpec::constant(0.2));
  s.phi = FnSpec::constant(0.0);
  return s;
}

ProblemSpec comparison_hi() {
  ProblemSpec s = comparison_lo();
  s.phi = FnSpec::constant(0.05);
  s.gen.f = FnSpec::polynomial({0.1, -1.0}, 0.25);
  s.gen.g = FnSpec::quadratic_in_z(0.1, 1.0);
  s.gen.L_z = 0.1;
  s.obstacles.h = FnSpec::constant(-0.15);
  s.obstacles.h_prime = FnSpec::constant(0.25);
  return s;
}

Preset comparison_pair() {
  return {"comparison-pair", "ordered pair: larger terminal value, f, g and obstacles",
          "comparison: ordered data give ordered solutions", comparison_hi(), comparison_lo(), {}};
}

}  // namespace

const std::vector<Preset>& preset_catalog() {
  static const std::vector<Preset> catalog = {
      constant_sandwich(), gheat(true),    gheat(false), gheat_capped(),  upper_active(),
      lower_active(),      double_active(), colehopf(),  quadratic_drift(), comparison_pair(),
  };
  return catalog;
}

const Preset& find_preset(const std::string& name) {
  for (const Preset& p : preset_catalog())
    if (p.name == name) return p;
  throw std::invalid_argument("unknown preset '" + name + "'");
}

std::vector<std::pair<std::string, ProblemSpec>> comparison_variants() {
  const ProblemSpec lo = comparison_lo();
  const ProblemSpec hi = comparison_hi();
  std::vector<std::pair<std::string, ProblemSpec>> out;

  ProblemSpec s = lo;
  s.phi = hi.phi;
  out.emplace_back("terminal", s);

  s = lo;
  s.gen.f = hi.gen.f;
  out.emplace_back("driver-f", s);

  s = lo;
  s.gen.g = hi.gen.g;
  s.gen.L_z = hi.gen.L_z;
  out.emplace_back("driver-g", s);

  s = lo;
  s.obstacles = hi.obstacles;
  out.emplace_back("obstacles", s);

  out.emplace_back("all", hi);
  return out;
}

}  // namespace gdr
