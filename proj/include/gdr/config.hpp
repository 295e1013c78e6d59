#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "gdr/model.hpp"
#include "gdr/presets.hpp"
#include "gdr/solvers.hpp"

namespace gdr {

/// Malformed or inconsistent configuration. where() is a JSON-pointer style
/// location inside the config document.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string where, const std::string& what)
      : std::runtime_error(where + ": " + what), where_(std::move(where)) {}
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

enum class RunMode { penalized, reflected_lower_pen_upper, projection, limit, suite };

const char* to_string(RunMode mode);
RunMode run_mode_from_string(const std::string& name);

struct OutputConfig {
  std::string field_csv = "field.csv";
  std::string trace_csv = "trace.csv";
  std::string report = "report.txt";
  /// Times whose slices are written to the field CSV.
  std::vector<double> slices{0.0};
};

struct RunConfig {
  /// Preset the spec came from, empty for inline specs.
  std::string preset;
  ProblemSpec spec;
  std::optional<ProblemSpec> partner;
  GridConfig grid;
  PenaltySchedule schedule;
  RunMode mode = RunMode::limit;
  OutputConfig outputs;
  /// Suite mode without a preset or inline spec runs every catalog preset.
  bool all_presets = false;
};

nlohmann::json to_json(const FnSpec& f);
FnSpec fn_from_json(const nlohmann::json& j, const std::string& where);

nlohmann::json to_json(const ProblemSpec& spec);
ProblemSpec spec_from_json(const nlohmann::json& j, const std::string& where);

nlohmann::json to_json(const RunConfig& config);
RunConfig config_from_json(const nlohmann::json& j);

RunConfig load_config(const std::string& path);

/// Parses "4,16,64" into intensities.
std::vector<double> parse_schedule(const std::string& text);

/// RunConfig for a catalog preset with its default grid.
RunConfig config_for_preset(const std::string& name);

/// Throws ConfigError when slices fall outside [0, T] or the schedule is malformed.
void check_config(const RunConfig& config);

}  // namespace gdr
