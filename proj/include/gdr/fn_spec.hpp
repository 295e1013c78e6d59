#pragma once

#include <functional>
#include <limits>
#include <string>
#include <variant>
#include <vector>

namespace gdr {

/// Argument tuple shared by every catalog function. Functions of (t,x) ignore
/// y and z; the terminal condition reads x only.
struct Args {
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

enum class Var { t, x, y, z };

const char* to_string(Var v);
Var var_from_string(const std::string& name);

namespace fn {

struct Constant {
  double c = 0.0;
};

/// a + b * arg
struct Affine {
  double a = 0.0;
  double b = 0.0;
  Var var = Var::x;
};

/// sum_k coeffs[k] * arg^k, hard-clipped into [-clip, clip]
struct Polynomial {
  std::vector<double> coeffs;
  double clip = 0.0;
  Var var = Var::x;
};

/// gamma * z^2, hard-clipped into [-clip, clip]
struct QuadraticInZ {
  double gamma = 0.0;
  double clip = 0.0;
};

/// Piecewise-linear interpolation through (nodes[i], values[i]); flat outside.
struct Tabulated {
  std::vector<double> nodes;
  std::vector<double> values;
  Var var = Var::x;
};

/// Host-supplied evaluator. Never serialized.
struct Custom {
  std::function<double(const Args&)> eval;
  std::string name = "custom";
};

}  // namespace fn

/// A closed catalog of scalar functions plus the regularity constants the
/// caller declares for them. Evaluation is pure.
class FnSpec {
 public:
  using Kind = std::variant<fn::Constant, fn::Affine, fn::Polynomial, fn::QuadraticInZ,
                            fn::Tabulated, fn::Custom>;

  FnSpec();
  explicit FnSpec(Kind kind);

  static FnSpec constant(double c);
  static FnSpec affine(double a, double b, Var var = Var::x);
  static FnSpec polynomial(std::vector<double> coeffs, double clip, Var var = Var::x);
  static FnSpec quadratic_in_z(double gamma, double clip);
  static FnSpec tabulated(std::vector<double> nodes, std::vector<double> values,
                          Var var = Var::x);
  static FnSpec custom(std::function<double(const Args&)> eval, std::string name,
                       double sup_bound);

  double operator()(const Args& a) const;
  double operator()(double t, double x, double y = 0.0, double z = 0.0) const {
    return (*this)(Args{t, x, y, z});
  }

  const Kind& kind() const { return kind_; }
  std::string kind_name() const;
  bool is_zero() const;
  bool is_constant() const { return std::holds_alternative<fn::Constant>(kind_); }

  double lipschitz_y() const { return lipschitz_y_; }
  double lipschitz_z() const { return lipschitz_z_; }
  /// Declared bound on |f|; infinity means "not declared" and skips the check.
  double sup_bound() const { return sup_bound_; }

  FnSpec& declare(double lipschitz_y, double lipschitz_z, double sup_bound);
  FnSpec& declare_sup(double sup_bound);

 private:
  Kind kind_;
  double lipschitz_y_ = 0.0;
  double lipschitz_z_ = 0.0;
  double sup_bound_ = std::numeric_limits<double>::infinity();
};

}  // namespace gdr
