#include "gdr/run.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "gdr/diagnostics.hpp"

namespace gdr {

namespace {

constexpr double kOrderSlack = 1e-10;
constexpr double kDefectTol = 1e-10;
constexpr double kIdentityTol = 1e-10;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

CheckLine check(std::string name, bool pass, std::string detail) {
  return {std::move(name), pass, std::move(detail)};
}

// Sequence of intensity * violation for stages where the violation is positive.
CheckLine penalty_bounded(const std::string& name, const std::vector<double>& scaled) {
  if (scaled.size() < 2) return check(name, true, "obstacle never violated");
  bool ok = true;
  std::ostringstream os;
  for (std::size_t i = 0; i < scaled.size(); ++i) {
    os << (i ? ", " : "") << fmt(scaled[i]);
    if (i == 0) continue;
    const double ratio = scaled[i] / scaled[i - 1];
    if (ratio >= 3.0 || ratio <= 1.0 / 3.0) ok = false;
    if (i >= 2 && ratio > 1.1) ok = false;
  }
  return check(name, ok, "intensity * violation = [" + os.str() + "]");
}

// max of (b - a) over the inner half-domain; positive when b exceeds a there.
double max_increase(const Field& a, const Field& b) {
  const Grid& g = a.grid();
  const auto first = static_cast<Eigen::Index>(g.inner_first());
  const auto width = static_cast<Eigen::Index>(g.inner_last() - g.inner_first() + 1);
  return (b.values() - a.values()).middleCols(first, width).maxCoeff();
}

}  // namespace

std::vector<CheckLine> suite_checks(const RunConfig& config, const Grid& grid,
                                    SolveReport* limit_out, ConvergenceTrace* trace_out) {
  const ProblemSpec& spec = config.spec;
  const ObstaclePair& ob = spec.obstacles;
  std::vector<CheckLine> lines;

  const ValidationReport vr = validate(spec, grid);
  lines.push_back(check("assumptions", vr.ok(),
                        vr.ok() ? "all sampled constraints hold"
                                : std::to_string(vr.violations.size()) + " violations, first: " +
                                      vr.violations.front().constraint));

  auto [limit, trace] = solve_limit(spec, grid, config.schedule);
  const std::vector<PenaltyParams> stages = config.schedule.stages();
  const std::size_t used = trace.stages.size();
  const PenaltyParams last = stages[used - 1];

  {
    // Stage 1 is measured against the penalty-free solve; the Cauchy property
    // concerns consecutive penalized stages.
    bool ok = true;
    std::ostringstream os;
    for (std::size_t i = 0; i < used; ++i) {
      os << (i ? ", " : "") << fmt(trace.stages[i].sup_diff);
      const double prev = i >= 2 ? trace.stages[i - 1].sup_diff : 0.0;
      if (i >= 2 && prev > 0.0 && !(trace.stages[i].sup_diff < prev)) ok = false;
    }
    lines.push_back(check("penalty-cauchy", ok,
                          "sup_diff = [" + os.str() + "]" + (trace.converged ? " converged" : " not converged")));
  }
  {
    std::vector<double> up;
    std::vector<double> lo;
    for (const TraceStage& s : trace.stages) {
      if (s.upper_viol > 0.0) up.push_back(s.n * s.upper_viol);
      if (s.lower_viol > 0.0) lo.push_back(s.m * s.lower_viol);
    }
    lines.push_back(penalty_bounded("upper-penalty-bounded", up));
    lines.push_back(penalty_bounded("lower-penalty-bounded", lo));
  }
  {
    // Fixed m, increasing n: values must not increase; fixed n, increasing m: must not decrease.
    const double m0 = stages.front().m_lower;
    const double n0 = stages.front().n_upper;
    double worst_n = -std::numeric_limits<double>::infinity();
    double worst_m = -std::numeric_limits<double>::infinity();
    SolveReport prev_n = solve_penalized(spec, grid, {m0, config.schedule.intensities.front()});
    SolveReport prev_m = solve_penalized(spec, grid, {config.schedule.intensities.front(), n0});
    for (std::size_t i = 1; i < config.schedule.intensities.size(); ++i) {
      const double k = config.schedule.intensities[i];
      SolveReport cur_n = solve_penalized(spec, grid, {m0, k});
      SolveReport cur_m = solve_penalized(spec, grid, {k, n0});
      worst_n = std::max(worst_n, max_increase(prev_n.field, cur_n.field));
      worst_m = std::max(worst_m, max_increase(cur_m.field, prev_m.field));
      prev_n = std::move(cur_n);
      prev_m = std::move(cur_m);
    }
    lines.push_back(check("monotone-in-n", worst_n <= kOrderSlack, "max increase " + fmt(worst_n)));
    lines.push_back(check("monotone-in-m", worst_m <= kOrderSlack, "max decrease " + fmt(worst_m)));
  }
  {
    // sup |u| along the schedule must not grow with the intensity.
    double first = -1.0;
    double worst = 0.0;
    std::ostringstream os;
    for (std::size_t i = 0; i < used; ++i) {
      const double sup = solve_penalized(spec, grid, stages[i]).field.values().abs().maxCoeff();
      os << (i ? ", " : "") << fmt(sup);
      if (i == 0) first = sup;
      worst = std::max(worst, sup - first);
    }
    lines.push_back(check("uniform-bound", worst <= kOrderSlack, "sup|u| = [" + os.str() + "]"));
  }
  {
    const std::vector<double> v_grid = default_vol_grid(spec.gparams);
    const std::pair<StepMode, PenaltyParams> modes[] = {
        {StepMode::penalized, last},
        {StepMode::project_lower, {0.0, last.n_upper}},
        {StepMode::project_upper, {last.m_lower, 0.0}},
        {StepMode::project_both, {}},
    };
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& [mode, pen] : modes) {
      const SolveReport r = solve(spec, grid, pen, mode);
      worst = std::max(worst, martingale_defect_scan(r.field, spec, pen, mode, v_grid));
    }
    lines.push_back(check("martingale-defect", worst <= kDefectTol, "max scenario gain " + fmt(worst)));
  }
  {
    const ProcessBundle bundle = reconstruct(limit.field, spec, last, StepMode::penalized, false);
    const double resid = bundle.max_identity_residual();
    lines.push_back(check("reconstruction", resid <= kIdentityTol, "one-step residual " + fmt(resid)));
    bool sign_ok = (bundle.dAplus.values() >= 0.0).all() && (bundle.dAminus.values() >= 0.0).all();
    sign_ok = sign_ok && ((bundle.dAplus.values() > 0.0) && (bundle.dAminus.values() > 0.0)).count() == 0;
    lines.push_back(check("compensators", sign_ok, "dA+, dA- non-negative with disjoint supports"));
  }
  {
    bool ok = true;
    std::ostringstream os;
    for (std::size_t i = 0; i < used; ++i) {
      const TraceStage& s = trace.stages[i];
      os << (i ? ", " : "") << "(" << fmt(s.r_plus) << ", " << fmt(s.r_minus) << ")";
      if (i >= 2 && (s.r_plus > trace.stages[i - 1].r_plus + 1e-12 ||
                    s.r_minus > trace.stages[i - 1].r_minus + 1e-12))
        ok = false;
    }
    lines.push_back(check("skorohod-residuals", ok, "(R+, R-) = [" + os.str() + "]"));
  }
  if (ob.lower_active) {
    auto gap = [&](const PenaltyParams& p) {
      const SolveReport both = solve_penalized(spec, grid, {p.n_upper, p.n_upper});
      const SolveReport refl = solve_lower_reflected_upper_penalized(spec, grid, p.n_upper);
      return sup_diff(both.field, refl.field);
    };
    const double g0 = gap(stages.front());
    const double g1 = gap(last);
    lines.push_back(check("construction-agreement", g1 <= g0 + kOrderSlack,
                          "sup|u_nn - ubar_n| " + fmt(g0) + " -> " + fmt(g1)));
  }
  if (config.partner) {
    const OrderReport pen = comparison_harness(spec, *config.partner, grid, StepMode::penalized, last);
    const OrderReport proj = comparison_harness(spec, *config.partner, grid, StepMode::project_both);
    lines.push_back(check("comparison", pen.pass && proj.pass,
                          "min(u_hi - u_lo) penalized " + fmt(pen.min_diff) + ", projected " +
                              fmt(proj.min_diff)));
  }

  if (limit_out) *limit_out = std::move(limit);
  if (trace_out) *trace_out = std::move(trace);
  return lines;
}

void write_field_csv(const std::filesystem::path& path, const ProcessBundle& bundle,
                     const std::vector<double>& slice_times) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  const Grid& grid = bundle.Y.grid();
  out << "t,x,u,z,da_plus,da_minus,defect\n";
  for (double t : slice_times) {
    const std::size_t k = grid.nearest_slice(t);
    for (std::size_t j = 0; j < grid.x_count(); ++j) {
      out << fmt17(grid.t(k)) << ',' << fmt17(grid.x(j)) << ',' << fmt17(bundle.Y(k, j)) << ','
          << fmt17(bundle.Z(k, j)) << ',' << fmt17(bundle.dAplus(k, j)) << ','
          << fmt17(bundle.dAminus(k, j)) << ',' << fmt17(bundle.martingale_defect(k, j)) << '\n';
    }
  }
}

void write_trace_csv(const std::filesystem::path& path, const ConvergenceTrace& trace) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "stage,n,m,sup_diff,upper_viol,lower_viol,r_plus,r_minus\n";
  for (const TraceStage& s : trace.stages)
    out << s.stage << ',' << fmt17(s.n) << ',' << fmt17(s.m) << ',' << fmt17(s.sup_diff) << ','
        << fmt17(s.upper_viol) << ',' << fmt17(s.lower_viol) << ',' << fmt17(s.r_plus) << ','
        << fmt17(s.r_minus) << '\n';
}

namespace {

struct Outcome {
  std::vector<CheckLine> lines;
  std::vector<std::string> notes;
};

Outcome run_one(const RunConfig& config, const std::filesystem::path& dir) {
  const ProblemSpec& spec = config.spec;
  const Grid grid = build_grid(spec, config.grid.x_min, config.grid.x_max, config.grid.nx,
                               config.grid.cfl_safety);
  const ValidationReport vr = validate(spec, grid);
  if (!vr.ok()) {
    const Violation& v = vr.violations.front();
    std::ostringstream os;
    os << vr.violations.size() << " assumption violations; first " << v.constraint << " at t=" << v.t
       << ", x=" << v.x << " (" << v.detail << ")";
    throw ConfigError("/spec", os.str());
  }

  Outcome outcome;
  std::ostringstream g;
  g << "grid nx=" << grid.nx() << " nt=" << grid.nt() << " dx=" << fmt(grid.dx())
    << " dt=" << fmt(grid.dt()) << " differencing="
    << (grid.differencing() == Differencing::central ? "central" : "upwind");
  outcome.notes.push_back(g.str());

  const std::vector<PenaltyParams> stages = config.schedule.stages();
  PenaltyParams pen = stages.back();
  StepMode step_mode = StepMode::penalized;
  std::optional<ConvergenceTrace> trace;
  SolveReport report;
  const auto start = std::chrono::steady_clock::now();

  switch (config.mode) {
    case RunMode::penalized:
      report = solve_penalized(spec, grid, pen);
      break;
    case RunMode::reflected_lower_pen_upper:
      if (!spec.obstacles.lower_active)
        throw ConfigError("/mode", "reflected_lower_pen_upper needs an active lower obstacle");
      pen = {0.0, pen.n_upper};
      step_mode = StepMode::project_lower;
      report = solve_lower_reflected_upper_penalized(spec, grid, pen.n_upper);
      break;
    case RunMode::projection: {
      const ObstaclePair& ob = spec.obstacles;
      pen = {};
      if (ob.lower_active && ob.upper_active) {
        step_mode = StepMode::project_both;
        report = solve_double_projection(spec, grid);
      } else if (ob.lower_active) {
        step_mode = StepMode::project_lower;
        report = solve_single_reflected(spec, grid, Side::lower);
      } else if (ob.upper_active) {
        step_mode = StepMode::project_upper;
        report = solve_single_reflected(spec, grid, Side::upper);
      } else {
        throw ConfigError("/mode", "projection needs at least one active obstacle");
      }
      break;
    }
    case RunMode::limit: {
      auto [r, tr] = solve_limit(spec, grid, config.schedule);
      report = std::move(r);
      pen = stages[tr.stages.size() - 1];
      outcome.notes.push_back(std::string("limit ") + (tr.converged ? "converged" : "not converged") +
                              " after " + std::to_string(tr.stages.size()) + " stages");
      trace = std::move(tr);
      break;
    }
    case RunMode::suite: {
      ConvergenceTrace tr;
      outcome.lines = suite_checks(config, grid, &report, &tr);
      pen = stages[tr.stages.size() - 1];
      trace = std::move(tr);
      break;
    }
  }

  const ProcessBundle bundle = reconstruct(report.field, spec, pen, step_mode);
  if (config.mode != RunMode::suite) {
    const double resid = bundle.max_identity_residual();
    const double defect = bundle.max_defect();
    outcome.lines.push_back(check("reconstruction", resid <= kIdentityTol, "one-step residual " + fmt(resid)));
    outcome.lines.push_back(check("martingale-defect", defect <= kDefectTol, "max scenario gain " + fmt(defect)));
  }
  std::ostringstream v;
  v << "sup (u-h')^+ = " << fmt(report.sup_upper_violation)
    << ", sup (h-u)^+ = " << fmt(report.sup_lower_violation);
  outcome.notes.push_back(v.str());
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
  outcome.notes.push_back("wall time " + fmt(elapsed.count()) + " s");

  std::filesystem::create_directories(dir);
  write_field_csv(dir / config.outputs.field_csv, bundle, config.outputs.slices);
  if (trace) write_trace_csv(dir / config.outputs.trace_csv, *trace);
  return outcome;
}

void emit(std::ostream& out, const std::string& label, const Outcome& o) {
  for (const std::string& n : o.notes) out << "# [" << label << "] " << n << '\n';
  for (const CheckLine& c : o.lines)
    out << (c.pass ? "PASS" : "FAIL") << " [" << label << "] " << c.name << ": " << c.detail << '\n';
}

bool all_pass(const Outcome& o) {
  for (const CheckLine& c : o.lines)
    if (!c.pass) return false;
  return true;
}

}  // namespace

int run(const RunConfig& config, const std::filesystem::path& out_dir, std::ostream& log) {
  try {
    check_config(config);
    std::ostringstream report;
    bool ok = true;
    if (config.all_presets) {
      for (const Preset& p : preset_catalog()) {
        RunConfig sub = config;
        sub.all_presets = false;
        sub.preset = p.name;
        sub.spec = p.spec;
        sub.partner = p.partner;
        sub.grid = p.grid;
        check_config(sub);
        const Outcome o = run_one(sub, out_dir / p.name);
        emit(report, p.name, o);
        ok = ok && all_pass(o);
      }
    } else {
      const std::string label = config.preset.empty() ? "config" : config.preset;
      const Outcome o = run_one(config, out_dir);
      emit(report, label, o);
      ok = all_pass(o);
    }
    std::filesystem::create_directories(out_dir);
    std::ofstream(out_dir / config.outputs.report) << report.str();
    log << report.str();
    return ok ? kExitOk : kExitAssertion;
  } catch (const ConfigError& e) {
    log << "error: invalid config: " << e.what() << '\n';
    return kExitConfig;
  } catch (const SolverError& e) {
    log << "error: solver failure: " << e.what() << '\n';
    return kExitSolver;
  } catch (const EvaluationError& e) {
    log << "error: solver failure: " << e.what() << '\n';
    return kExitSolver;
  } catch (const std::invalid_argument& e) {
    log << "error: invalid config: " << e.what() << '\n';
    return kExitConfig;
  }
}

void list_presets(std::ostream& out) {
  for (const Preset& p : preset_catalog())
    out << std::left << std::setw(24) << p.name << p.description << "\n" << std::setw(24) << ""
        << "exercises: " << p.exercises << "\n";
}

}  // namespace gdr
