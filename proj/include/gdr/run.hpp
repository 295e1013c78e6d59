#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "gdr/config.hpp"
#include "gdr/decomposition.hpp"
#include "gdr/solvers.hpp"

namespace gdr {

inline constexpr int kExitOk = 0;
inline constexpr int kExitAssertion = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitSolver = 3;

struct CheckLine {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Structural checks of the penalization construction for one problem.
std::vector<CheckLine> suite_checks(const RunConfig& config, const Grid& grid,
                                    SolveReport* limit_out = nullptr,
                                    ConvergenceTrace* trace_out = nullptr);

/// Writes `t,x,u,z,da_plus,da_minus,defect` rows for the requested slice times.
void write_field_csv(const std::filesystem::path& path, const ProcessBundle& bundle,
                     const std::vector<double>& slice_times);

/// Writes `stage,n,m,sup_diff,upper_viol,lower_viol,r_plus,r_minus` rows.
void write_trace_csv(const std::filesystem::path& path, const ConvergenceTrace& trace);

/// Executes a configuration, writing artifacts below out_dir. Returns the
/// process exit status: 0 success, 1 failed assertion, 2 invalid config,
/// 3 solver failure.
int run(const RunConfig& config, const std::filesystem::path& out_dir, std::ostream& log);

void list_presets(std::ostream& out);

}  // namespace gdr
