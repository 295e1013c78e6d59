#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gdr/model.hpp"

namespace gdr {

struct GridConfig {
  double x_min = -10.0;
  double x_max = 10.0;
  std::size_t nx = 400;
  double cfl_safety = 0.9;
};

struct Preset {
  std::string name;
  std::string description;
  /// Property of the construction the preset is meant to exercise.
  std::string exercises;
  ProblemSpec spec;
  /// Dominated partner for comparison runs (spec >= partner).
  std::optional<ProblemSpec> partner;
  GridConfig grid;
};

const std::vector<Preset>& preset_catalog();

/// Throws std::invalid_argument for unknown names.
const Preset& find_preset(const std::string& name);

/// Single-ingredient variants of the comparison pair: the dominated spec with
/// exactly one of (terminal data, f, g, obstacles) taken from the dominating
/// one, followed by the full dominating spec. Each entry dominates the
/// partner of "comparison-pair".
std::vector<std::pair<std::string, ProblemSpec>> comparison_variants();

}  // namespace gdr
