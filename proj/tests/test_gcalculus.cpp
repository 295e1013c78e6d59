#include <catch_amalgamated.hpp>

#include <random>

#include "gdr/gcalculus.hpp"
#include "gdr/presets.hpp"

using namespace gdr;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const GParams kGp{1.0, 2.0};

ProblemSpec plain() {
  ProblemSpec s;
  s.gparams = kGp;
  return s;
}

}  // namespace

TEST_CASE("g_eval on both branches") {
  CHECK(g_eval(0.0, kGp) == 0.0);
  CHECK(g_eval(0.0, GParams{0.3, 7.0}) == 0.0);
  CHECK(g_eval(2.0, kGp) == 2.0);
  CHECK(g_eval(-2.0, kGp) == -1.0);
  CHECK(g_eval(2.0f, kGp) == 2.0f);
  CHECK(g_eval(-2.0L, kGp) == -1.0L);
}

TEST_CASE("worst_case_vol picks the bang-bang endpoint") {
  CHECK(worst_case_vol(5.0, kGp) == 2.0);
  CHECK(worst_case_vol(-5.0, kGp) == 1.0);
  CHECK(worst_case_vol(0.0, kGp) == 2.0);
  for (double a : {-3.0, -0.1, 0.0, 0.1, 4.0})
    CHECK(0.5 * worst_case_vol(a, kGp) * a == g_eval(a, kGp));
  // at a = 0 every scenario attains the same value
  for (int i = 0; i < 5; ++i) CHECK(0.5 * (1.0 + 0.25 * i) * 0.0 == g_eval(0.0, kGp));
}

TEST_CASE("g_eval is sublinear, monotone and positively homogeneous") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  std::uniform_real_distribution<double> lam(0.0, 10.0);
  for (int i = 0; i < 2000; ++i) {
    const double a = u(rng);
    const double b = u(rng);
    const double l = lam(rng);
    const double scale = 1e-14 * (std::abs(a) + std::abs(b) + 1.0);
    CHECK(g_eval(a + b, kGp) <= g_eval(a, kGp) + g_eval(b, kGp) + scale);
    CHECK((a <= b) == (g_eval(a, kGp) <= g_eval(b, kGp)));
    CHECK_THAT(g_eval(l * a, kGp), WithinAbs(l * g_eval(a, kGp), 1e-13 * (1.0 + std::abs(l * a))));
  }
}

TEST_CASE("sup representation over a 101-point volatility grid is exact") {
  for (double a : {-7.5, -1.0, -1e-9, 0.0, 1e-9, 0.3, 12.0}) {
    double best = -std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 100; ++i) {
      const double v = kGp.sigma_low_sq + (kGp.sigma_high_sq - kGp.sigma_low_sq) * (i / 100.0);
      best = std::max(best, 0.5 * v * a);
    }
    CHECK(std::abs(g_eval(a, kGp) - best) == 0.0);
  }
}

TEST_CASE("rhs_H examples") {
  ProblemSpec s = plain();
  CHECK(rhs_H(NodeDerivs::central(0.0, 0.0, 4.0, 0.0, 0.0), s) == 4.0);
  s.gen.g = FnSpec::quadratic_in_z(1.0, 1e6);
  CHECK(rhs_H(NodeDerivs::central(0.0, 3.0, 0.0, 0.0, 0.0), s) == 18.0);
}

TEST_CASE("rhs_H and rhs_F on quadratic-drift match a term-by-term re-evaluation") {
  const ProblemSpec s = find_preset("quadratic-drift").spec;
  for (double x : {-3.0, 0.4, 7.0}) {
    const double t = 0.3;
    const double u = 0.12;
    const double du = -0.7;
    const double d2u = 1.9;
    const NodeDerivs d = NodeDerivs::central(u, du, d2u, x, t);
    const double sig = s.coeffs.sigma(t, x);
    const double z = sig * du;
    const double H = sig * sig * d2u + 2.0 * s.coeffs.l(t, x) * du + 2.0 * s.gen.g(t, x, u, z);
    CHECK_THAT(rhs_H(d, s), WithinRel(H, 1e-14));
    const double G = H > 0 ? 0.5 * s.gparams.sigma_high_sq * H : 0.5 * s.gparams.sigma_low_sq * H;
    const double F = G + s.coeffs.b(t, x) * du + s.gen.f(t, x, u, z);
    CHECK_THAT(rhs_F(d, s), WithinRel(F, 1e-14));
  }
}

TEST_CASE("rhs_F examples") {
  ProblemSpec s = plain();
  s.coeffs.l = FnSpec::constant(0.3);
  const NodeDerivs d = NodeDerivs::central(0.1, 0.5, -2.0, 0.0, 0.0);
  CHECK(rhs_F(d, s) == g_eval(rhs_H(d, s), s.gparams));

  s = plain();
  s.gen.f = FnSpec::constant(0.75);
  CHECK(rhs_F(NodeDerivs::central(0.0, 0.0, 0.0, 0.0, 0.0), s) == 0.75);

  s = plain();
  s.gparams = {0.64, 0.64};
  s.coeffs.sigma = FnSpec::constant(0.8);
  const double d2u = 3.0;
  CHECK_THAT(rhs_F(NodeDerivs::central(0.0, 1.0, d2u, 0.0, 0.0), s), WithinRel(0.5 * 0.64 * 0.64 * d2u, 1e-15));
}

TEST_CASE("rhs_F_scenario at the maximizer equals rhs_F") {
  ProblemSpec s = plain();
  s.coeffs.b = FnSpec::constant(0.2);
  s.gen.f = FnSpec::affine(0.1, -0.3, Var::y);
  for (double d2u : {-2.0, 0.0, 1.5}) {
    const NodeDerivs d = NodeDerivs::central(0.4, 0.3, d2u, 0.0, 0.0);
    const double v = worst_case_vol(rhs_H(d, s), s.gparams);
    CHECK(rhs_F_scenario(d, s, v) == rhs_F(d, s));
    CHECK(rhs_F_scenario(d, s, 1.5) <= rhs_F(d, s));
  }
}

TEST_CASE("rhs_F_penalized examples") {
  ProblemSpec s = plain();
  s.obstacles.h = FnSpec::constant(0.0);
  s.obstacles.h_prime = FnSpec::constant(1.0);
  s.obstacles.lower_active = true;
  s.obstacles.upper_active = true;

  const NodeDerivs inside = NodeDerivs::central(0.5, 0.0, 0.0, 0.0, 0.0);
  CHECK(rhs_F_penalized(inside, s, {100.0, 100.0}) == rhs_F(inside, s));
  CHECK(rhs_F_penalized(NodeDerivs::central(2.0, 0.0, 0.0, 0.0, 0.0), s, {0.0, 10.0}) == -10.0);
  CHECK(rhs_F_penalized(NodeDerivs::central(-0.5, 0.0, 0.0, 0.0, 0.0), s, {8.0, 0.0}) == 4.0);

  s.obstacles.upper_active = false;
  CHECK(rhs_F_penalized(NodeDerivs::central(2.0, 0.0, 0.0, 0.0, 0.0), s, {0.0, 10.0}) == 0.0);
}

TEST_CASE("rhs_F_penalized is non-increasing in n and non-decreasing in m") {
  ProblemSpec s = plain();
  s.obstacles.h = FnSpec::constant(0.0);
  s.obstacles.h_prime = FnSpec::constant(1.0);
  s.obstacles.lower_active = true;
  s.obstacles.upper_active = true;
  for (double u : {-1.0, 0.0, 0.5, 1.0, 2.0}) {
    const NodeDerivs d = NodeDerivs::central(u, 0.2, 0.7, 0.0, 0.0);
    double prev_n = std::numeric_limits<double>::infinity();
    double prev_m = -std::numeric_limits<double>::infinity();
    for (double k : {0.0, 1.0, 4.0, 64.0}) {
      const double by_n = rhs_F_penalized(d, s, {3.0, k});
      const double by_m = rhs_F_penalized(d, s, {k, 3.0});
      CHECK(by_n <= prev_n);
      CHECK(by_m >= prev_m);
      prev_n = by_n;
      prev_m = by_m;
    }
  }
}
