#include <catch_amalgamated.hpp>

#include <cmath>

#include "gdr/diagnostics.hpp"
#include "gdr/presets.hpp"
#include "gdr/solvers.hpp"

using namespace gdr;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

Grid grid_for(const ProblemSpec& s, std::size_t nx = 200) { return build_grid(s, -10.0, 10.0, nx, 0.9); }

double at_origin(const SolveReport& r) {
  const Grid& g = r.field.grid();
  return r.field(0, g.nearest_node(0.0));
}

ProblemSpec one_sided_lower(double h, double phi) {
  ProblemSpec s;
  s.gparams = {1.0, 2.0};
  s.obstacles.h = FnSpec::constant(h);
  s.obstacles.lower_active = true;
  s.phi = FnSpec::constant(phi);
  return s;
}

}  // namespace

TEST_CASE("constant sandwich stays constant for any penalties") {
  const ProblemSpec& s = find_preset("constant-sandwich").spec;
  const Grid g = grid_for(s);
  for (PenaltyParams pen : {PenaltyParams{0.0, 0.0}, PenaltyParams{4.0, 1024.0}, PenaltyParams{1e6, 3.0}}) {
    const SolveReport r = solve_penalized(s, g, pen);
    CHECK((r.field.values() == 0.5).all());
    CHECK(r.sup_lower_violation == 0.0);
    CHECK(r.sup_upper_violation == 0.0);
    CHECK(r.iterations == g.nt());
  }
}

TEST_CASE("G-heat closed forms on both branches") {
  const SolveReport up = solve_penalized(find_preset("gheat-quadratic").spec,
                                         grid_for(find_preset("gheat-quadratic").spec), {});
  CHECK_THAT(at_origin(up), WithinAbs(2.0, 1e-9));
  const SolveReport down = solve_penalized(find_preset("gheat-concave").spec,
                                           grid_for(find_preset("gheat-concave").spec), {});
  CHECK_THAT(at_origin(down), WithinAbs(-1.0, 1e-9));

  const Grid& g = up.field.grid();
  const std::size_t k = g.nearest_slice(0.5);
  for (std::size_t j = g.inner_first(); j <= g.inner_last(); j += 10)
    CHECK_THAT(up.field(k, j), WithinAbs(g.x(j) * g.x(j) + 2.0 * (1.0 - g.t(k)), 1e-6));
}

TEST_CASE("terminal slice equals phi") {
  const ProblemSpec& s = find_preset("double-active").spec;
  const Grid g = grid_for(s);
  const SolveReport r = solve_penalized(s, g, {16.0, 16.0});
  for (std::size_t j = 0; j < g.x_count(); ++j) CHECK(r.field(g.nt(), j) == s.phi(s.T, g.x(j)));
}

TEST_CASE("lower reflection with penalized upper side") {
  const ProblemSpec& s = find_preset("double-active").spec;
  const Grid g = grid_for(s);
  const SolveReport r = solve_lower_reflected_upper_penalized(s, g, 16.0);
  CHECK(r.sup_lower_violation == 0.0);
  CHECK(r.mode == StepMode::project_lower);
  for (std::size_t k = 0; k < g.t_count(); ++k)
    for (std::size_t j = 0; j < g.x_count(); ++j) REQUIRE(r.field(k, j) >= -0.1);

  ProblemSpec free = s;
  free.obstacles.lower_active = false;
  CHECK_THROWS(solve_lower_reflected_upper_penalized(free, g, 4.0));
}

TEST_CASE("lower reflection with inactive upper and n = 0 is the single obstacle solve") {
  ProblemSpec s = find_preset("lower-active").spec;
  const Grid g = grid_for(s);
  const SolveReport a = solve_lower_reflected_upper_penalized(s, g, 0.0);
  const SolveReport b = solve_single_reflected(s, g, Side::lower);
  CHECK(sup_diff(a.field, b.field) == 0.0);
}

TEST_CASE("zero data sitting on the lower obstacle") {
  const ProblemSpec s = one_sided_lower(0.0, 0.0);
  const SolveReport r = solve_lower_reflected_upper_penalized(s, grid_for(s), 7.0);
  CHECK((r.field.values() == 0.0).all());
}

TEST_CASE("upper violation of the lower-reflected family halves as n doubles") {
  const ProblemSpec& s = find_preset("double-active").spec;
  const Grid g = grid_for(s);
  std::vector<double> viol;
  for (double n : {4.0, 8.0, 16.0, 32.0})
    viol.push_back(solve_lower_reflected_upper_penalized(s, g, n).sup_upper_violation);
  for (std::size_t i = 1; i < viol.size(); ++i) CHECK_THAT(viol[i] / viol[i - 1], WithinAbs(0.5, 0.15));
}

TEST_CASE("double projection stays inside the obstacles") {
  const ProblemSpec& s = find_preset("double-active").spec;
  const Grid g = grid_for(s);
  const SolveReport r = solve_double_projection(s, g);
  CHECK((r.field.values() >= -0.1).all());
  CHECK((r.field.values() <= 0.1).all());
  CHECK(r.sup_lower_violation == 0.0);
  CHECK(r.sup_upper_violation == 0.0);

  ProblemSpec one = s;
  one.obstacles.upper_active = false;
  CHECK_THROWS(solve_double_projection(one, g));
}

TEST_CASE("double projection with obstacles far away matches a heavily penalized solve") {
  ProblemSpec s = find_preset("gheat-capped").spec;
  s.obstacles.h = FnSpec::constant(-1.0);
  s.obstacles.lower_active = true;
  s.obstacles.h_prime = FnSpec::constant(1.9);
  const Grid g = grid_for(s);
  const SolveReport a = solve_double_projection(s, g);
  const SolveReport b = solve_penalized(s, g, {1e6, 1e6});
  CHECK(sup_diff_inner(a.field, b.field) < 1e-12);
}

TEST_CASE("terminal data on an upper obstacle with upward dynamics stays there") {
  ProblemSpec s;
  s.gparams = {1.0, 2.0};
  s.gen.f = FnSpec::constant(1.0);
  s.obstacles.h = FnSpec::constant(-1.0);
  s.obstacles.h_prime = FnSpec::constant(0.5);
  s.obstacles.lower_active = true;
  s.obstacles.upper_active = true;
  s.phi = FnSpec::constant(0.5);
  const SolveReport r = solve_double_projection(s, grid_for(s));
  CHECK((r.field.values() - 0.5).abs().maxCoeff() <= 1e-12);
}

TEST_CASE("classical volatility reduces projection to the linear double-obstacle scheme") {
  ProblemSpec s = find_preset("double-active").spec;
  s.gparams = {1.5, 1.5};
  const Grid g = grid_for(s);
  const SolveReport r = solve_double_projection(s, g);
  // one manual step of the linear scheme at an interior node
  const Layer next = r.field.slice(1);
  const std::size_t j = 77;
  const double d2 = (next(j + 1) - 2.0 * next(j) + next(j - 1)) / (g.dx() * g.dx());
  double v = next(j) + g.dt() * (0.5 * 1.5 * d2 + s.gen.f(g.t(1), g.x(j)));
  v = std::clamp(v, -0.1, 0.1);
  CHECK_THAT(r.field(0, j), WithinAbs(v, 1e-14));
}

TEST_CASE("single reflected solves") {
  const ProblemSpec s = one_sided_lower(0.0, 1.0);
  const Grid g = grid_for(s);
  const SolveReport r = solve_single_reflected(s, g, Side::lower);
  CHECK((r.field.values() == 1.0).all());

  const ProblemSpec& la = find_preset("lower-active").spec;
  const Grid gl = grid_for(la);
  const SolveReport refl = solve_single_reflected(la, gl, Side::lower);
  ProblemSpec free = la;
  free.obstacles.lower_active = false;
  const SolveReport unc = solve_penalized(free, gl, {});
  for (std::size_t k = 0; k < gl.t_count(); k += 40)
    for (std::size_t j = gl.inner_first(); j <= gl.inner_last(); ++j) {
      REQUIRE(refl.field(k, j) >= std::max(unc.field(k, j), 0.0) - 1e-12);
    }
  CHECK_THROWS(solve_single_reflected(la, gl, Side::upper));
  CHECK_THROWS(solve_single_reflected(find_preset("double-active").spec, gl, Side::lower));
}

TEST_CASE("schedule pairings and validation") {
  PenaltySchedule sched;
  CHECK(sched.stages().size() == 5);
  CHECK(sched.stages()[2].m_lower == 64.0);
  CHECK(sched.stages()[2].n_upper == 64.0);
  sched.pairing = Pairing::fixed_n;
  sched.fixed_intensity = 8.0;
  CHECK(sched.stages()[1].m_lower == 16.0);
  CHECK(sched.stages()[1].n_upper == 8.0);
  sched.pairing = Pairing::fixed_m;
  CHECK(sched.stages()[1].m_lower == 8.0);
  CHECK(sched.stages()[1].n_upper == 16.0);

  PenaltySchedule bad;
  bad.intensities = {4.0, 4.0};
  CHECK_THROWS(bad.check());
  bad.intensities = {};
  CHECK_THROWS(bad.check());
  CHECK(pairing_from_string(to_string(Pairing::fixed_m)) == Pairing::fixed_m);
}

TEST_CASE("solve_limit on the constant preset converges at stage 1") {
  const ProblemSpec& s = find_preset("constant-sandwich").spec;
  auto [r, trace] = solve_limit(s, grid_for(s), PenaltySchedule{});
  CHECK(trace.converged);
  REQUIRE(trace.stages.size() == 1);
  CHECK(trace.stages[0].sup_diff == 0.0);
  CHECK(trace.stages[0].stage == 1);
}

TEST_CASE("solve_limit trace: Cauchy decay and bounded scaled violation") {
  const ProblemSpec& s = find_preset("upper-active").spec;
  auto [r, trace] = solve_limit(s, grid_for(s), PenaltySchedule{});
  REQUIRE(trace.stages.size() == 5);
  CHECK_FALSE(trace.converged);
  for (std::size_t i = 2; i < trace.stages.size(); ++i)
    CHECK(trace.stages[i].sup_diff < trace.stages[i - 1].sup_diff);
  for (const TraceStage& st : trace.stages) {
    CHECK(st.n * st.upper_viol < 1.5);
    CHECK(st.lower_viol == 0.0);
  }
  CHECK(r.pen.n_upper == 1024.0);
}

TEST_CASE("penalized family is monotone in each intensity") {
  const ProblemSpec& s = find_preset("double-active").spec;
  const Grid g = grid_for(s);
  Field prev_n = solve_penalized(s, g, {16.0, 4.0}).field;
  Field prev_m = solve_penalized(s, g, {4.0, 16.0}).field;
  for (double k : {16.0, 64.0, 256.0}) {
    const Field cur_n = solve_penalized(s, g, {16.0, k}).field;
    const Field cur_m = solve_penalized(s, g, {k, 16.0}).field;
    CHECK((cur_n.values() - prev_n.values()).maxCoeff() <= 1e-10);
    CHECK((prev_m.values() - cur_m.values()).maxCoeff() <= 1e-10);
    prev_n = cur_n;
    prev_m = cur_m;
  }
}

TEST_CASE("repeated solves are bit identical") {
  const ProblemSpec& s = find_preset("quadratic-drift").spec;
  const Grid g = grid_for(s);
  CHECK(sup_diff(solve_penalized(s, g, {64.0, 64.0}).field, solve_penalized(s, g, {64.0, 64.0}).field) == 0.0);
}
