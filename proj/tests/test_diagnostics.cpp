#include <catch_amalgamated.hpp>

#include <cmath>

#include "gdr/diagnostics.hpp"
#include "gdr/presets.hpp"
#include "gdr/solvers.hpp"

using namespace gdr;
using Catch::Matchers::WithinAbs;

namespace {

Grid grid_for(const ProblemSpec& s, std::size_t nx = 200) { return build_grid(s, -10.0, 10.0, nx, 0.9); }

ProblemSpec classical(double gamma) {
  ProblemSpec s;
  s.gparams = {1.0, 1.0};
  if (gamma > 0.0) s.gen.g = FnSpec::quadratic_in_z(gamma, 10.0);
  s.phi = FnSpec::tabulated({-1.0, 1.0}, {-0.5, 0.5});
  return s;
}

}  // namespace

TEST_CASE("sup_diff basics") {
  const Grid g(-1.0, 1.0, 8, 1.0, 4);
  Field a(g);
  a.values().setRandom();
  Field b = a;
  CHECK(sup_diff(a, b) == 0.0);
  b.values() += 0.25;
  CHECK_THAT(sup_diff(a, b), WithinAbs(0.25, 1e-15));
  CHECK_THAT(sup_diff_inner(a, b), WithinAbs(0.25, 1e-15));
  Field c(Grid(-1.0, 1.0, 8, 1.0, 5));
  CHECK_THROWS(sup_diff(a, c));
  b = a;
  b(2, 0) += 5.0;
  CHECK(sup_diff_inner(a, b) == 0.0);
  CHECK(sup_diff(a, b) == 5.0);
}

TEST_CASE("rate_fit recovers exact power laws") {
  const RateFit inv = rate_fit({{4.0, 0.25}, {16.0, 1.0 / 16.0}, {64.0, 1.0 / 64.0}});
  CHECK_THAT(inv.slope, WithinAbs(-1.0, 1e-9));
  CHECK_THAT(inv.r_squared, WithinAbs(1.0, 1e-12));
  const RateFit flat = rate_fit({{4.0, 3.0}, {16.0, 3.0}, {64.0, 3.0}});
  CHECK_THAT(flat.slope, WithinAbs(0.0, 1e-12));
  CHECK_THROWS(rate_fit({{4.0, 1.0}, {16.0, 0.5}}));
  CHECK_THROWS(rate_fit({{4.0, 1.0}, {16.0, 0.0}, {64.0, 0.1}}));
}

TEST_CASE("measured upper violation decays at rate about 1/n") {
  const ProblemSpec& s = find_preset("upper-active").spec;
  const Grid g = grid_for(s);
  std::vector<std::pair<double, double>> pairs;
  for (double n : {16.0, 64.0, 256.0, 1024.0})
    pairs.emplace_back(n, solve_penalized(s, g, {n, n}).sup_upper_violation);
  CHECK_THAT(rate_fit(pairs).slope, WithinAbs(-1.0, 0.3));
}

TEST_CASE("classical oracle: heat closed form") {
  ProblemSpec s;
  s.gparams = {1.0, 1.0};
  s.phi = FnSpec::polynomial({0.0, 0.0, 1.0}, 1e6);
  const Grid g = grid_for(s);
  const Field u = classical_oracle(s, g);
  CHECK_THAT(u(0, g.nearest_node(0.0)), WithinAbs(1.0, 1e-6));
  CHECK_THAT(u(0, g.nearest_node(1.0)), WithinAbs(2.0, 1e-6));
  for (std::size_t j = 0; j < g.x_count(); ++j) CHECK(u(g.nt(), j) == s.phi(1.0, g.x(j)));
}

TEST_CASE("classical oracle: small gamma approaches the linear heat solution") {
  const Grid g = grid_for(classical(0.0));
  const Field lin = classical_oracle(classical(0.0), g);
  const double d1 = sup_diff_inner(classical_oracle(classical(1e-2), g), lin);
  const double d2 = sup_diff_inner(classical_oracle(classical(1e-3), g), lin);
  CHECK(d1 < 0.02);
  CHECK(d2 < d1 / 5.0);
}

TEST_CASE("classical oracle agrees with the solver on the Cole-Hopf preset") {
  const ProblemSpec& s = find_preset("quadratic-gen-colehopf").spec;
  const Grid g = grid_for(s, 400);
  CHECK(sup_diff_inner(classical_oracle(s, g), solve_penalized(s, g, {}).field) <= 5e-3);
}

TEST_CASE("classical oracle preconditions") {
  const Grid g = grid_for(classical(0.5));
  ProblemSpec s = classical(0.5);
  s.gparams = {1.0, 2.0};
  CHECK_THROWS(classical_oracle(s, g));
  s = classical(0.5);
  s.coeffs.b = FnSpec::constant(0.1);
  CHECK_THROWS(classical_oracle(s, g));
  s = classical(0.5);
  s.obstacles.lower_active = true;
  s.obstacles.h = FnSpec::constant(-1.0);
  CHECK_THROWS(classical_oracle(s, g));
  s = classical(0.5);
  s.gen.g = FnSpec::constant(0.1);
  CHECK_THROWS(classical_oracle(s, g));
}

TEST_CASE("comparison harness: identical specs give zero") {
  const ProblemSpec& s = find_preset("double-active").spec;
  const OrderReport r = comparison_harness(s, s, grid_for(s), StepMode::penalized, {16.0, 16.0});
  CHECK(r.pass);
  CHECK(r.min_diff == 0.0);
}

TEST_CASE("comparison harness: shifted terminal value") {
  ProblemSpec lo = find_preset("lower-active").spec;
  lo.obstacles.lower_active = false;
  ProblemSpec hi = lo;
  hi.phi = FnSpec::affine(1.2, 0.02).declare_sup(1.4);
  hi.gen.M_0 = 2.0;
  const OrderReport r = comparison_harness(hi, lo, grid_for(lo));
  CHECK(r.pass);
  CHECK(r.min_diff > 0.0);
  CHECK(r.min_diff <= 1.0 + 1e-12);
}

TEST_CASE("comparison harness: raised lower obstacle") {
  const ProblemSpec lo = find_preset("double-active").spec;
  ProblemSpec hi = lo;
  hi.obstacles.h = FnSpec::constant(-0.05);
  const Grid g = grid_for(lo);
  CHECK(comparison_harness(hi, lo, g, StepMode::project_both).pass);
  CHECK(comparison_harness(hi, lo, g, StepMode::penalized, {64.0, 64.0}).pass);
}

TEST_CASE("comparison harness refuses unordered data and names the node") {
  const ProblemSpec lo = find_preset("double-active").spec;
  ProblemSpec hi = lo;
  hi.gen.f = FnSpec::polynomial({0.0, 1.0}, 0.25);
  try {
    comparison_harness(hi, lo, grid_for(lo));
    FAIL("expected refusal");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("x=") != std::string::npos);
  }
  hi = lo;
  hi.coeffs.b = FnSpec::constant(0.1);
  CHECK_THROWS(comparison_harness(hi, lo, grid_for(lo)));
}

TEST_CASE("comparison variants each dominate the partner") {
  const Preset& pair = find_preset("comparison-pair");
  const Grid g = grid_for(pair.spec);
  for (const auto& [name, hi] : comparison_variants()) {
    INFO(name);
    CHECK_NOTHROW(check_ordering(hi, *pair.partner, g));
    CHECK(comparison_harness(hi, *pair.partner, g, StepMode::penalized, {64.0, 64.0}).pass);
  }
}
