#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "gdr/fn_spec.hpp"

namespace gdr {

class Grid;

/// Volatility-uncertainty interval of the G-Brownian motion.
struct GParams {
  double sigma_low_sq = 1.0;
  double sigma_high_sq = 1.0;

  bool degenerate() const { return sigma_low_sq == sigma_high_sq; }
};

/// Coefficients of the forward G-SDE dX = b dt + l d<B> + sigma dB, together
/// with the ellipticity window eps_vol <= sigma^2 <= cap_vol.
struct CoefficientSet {
  FnSpec b = FnSpec::constant(0.0);
  FnSpec l = FnSpec::constant(0.0);
  FnSpec sigma = FnSpec::constant(1.0);
  double eps_vol = 0.5;
  double cap_vol = 1.0;
};

/// Drivers of the dt and d<B> integrals.
struct GeneratorSpec {
  FnSpec f = FnSpec::constant(0.0);
  FnSpec g = FnSpec::constant(0.0);
  double L_y = 0.0;
  double L_z = 0.0;
  double M_0 = 1.0;
};

/// Magnitude used when an inactive obstacle must be reported as a number.
inline constexpr double kInactiveObstacle = 1e9;

struct ObstaclePair {
  FnSpec h = FnSpec::constant(0.0);
  FnSpec h_prime = FnSpec::constant(0.0);
  double N_0 = 1.0;
  bool lower_active = false;
  bool upper_active = false;

  /// Lower obstacle, or -kInactiveObstacle when inactive. Arithmetic must
  /// branch on lower_active instead of using this sentinel.
  double lower(double t, double x) const {
    return lower_active ? h(t, x) : -kInactiveObstacle;
  }
  double upper(double t, double x) const {
    return upper_active ? h_prime(t, x) : kInactiveObstacle;
  }
};

struct ProblemSpec {
  GParams gparams;
  CoefficientSet coeffs;
  GeneratorSpec gen;
  ObstaclePair obstacles;
  FnSpec phi = FnSpec::constant(0.0);
  double T = 1.0;
};

/// Penalty intensities: m pushes up from the lower obstacle, n down from the upper one.
struct PenaltyParams {
  double m_lower = 0.0;
  double n_upper = 0.0;

  void check() const;
};

struct Violation {
  std::string constraint;
  std::string detail;
  double t = 0.0;
  double x = 0.0;

  bool operator==(const Violation&) const = default;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  std::size_t count(const std::string& constraint) const;
  bool operator==(const ValidationReport&) const = default;
};

/// Thrown when a catalog function evaluates to a non-finite value.
class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Checks the standing assumptions by sampling every node of the probe grid.
ValidationReport validate(const ProblemSpec& spec, const Grid& probe);

}  // namespace gdr
