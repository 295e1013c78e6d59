#include "gdr/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace gdr {

using nlohmann::json;

const char* to_string(RunMode mode) {
  switch (mode) {
    case RunMode::penalized: return "penalized";
    case RunMode::reflected_lower_pen_upper: return "reflected_lower_pen_upper";
    case RunMode::projection: return "projection";
    case RunMode::limit: return "limit";
    case RunMode::suite: return "suite";
  }
  return "?";
}

RunMode run_mode_from_string(const std::string& name) {
  if (name == "penalized") return RunMode::penalized;
  if (name == "reflected_lower_pen_upper") return RunMode::reflected_lower_pen_upper;
  if (name == "projection") return RunMode::projection;
  if (name == "limit") return RunMode::limit;
  if (name == "suite") return RunMode::suite;
  throw std::invalid_argument("unknown mode '" + name + "'");
}

namespace {

const json& member(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ConfigError(where + "/" + key, "missing required field");
  return *it;
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ConfigError(where, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(where, "expected a finite number");
  return v;
}

double number_at(const json& j, const char* key, const std::string& where) {
  return number(member(j, key, where), where + "/" + key);
}

double number_or(const json& j, const char* key, double fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  return number(j.at(key), where + "/" + key);
}

std::vector<double> numbers(const json& j, const std::string& where) {
  if (!j.is_array()) throw ConfigError(where, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], where + "/" + std::to_string(i)));
  return out;
}

std::string text(const json& j, const std::string& where) {
  if (!j.is_string()) throw ConfigError(where, "expected a string");
  return j.get<std::string>();
}

Var var_or(const json& j, Var fallback, const std::string& where) {
  if (!j.contains("var")) return fallback;
  try {
    return var_from_string(text(j.at("var"), where + "/var"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(where + "/var", e.what());
  }
}

template <class F>
auto wrap(const std::string& where, F&& f) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(where, e.what());
  }
}

}  // namespace

json to_json(const FnSpec& f) {
  json j;
  std::visit(
      [&](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, fn::Constant>) {
          j = {{"kind", "constant"}, {"c", k.c}};
        } else if constexpr (std::is_same_v<K, fn::Affine>) {
          j = {{"kind", "affine"}, {"a", k.a}, {"b", k.b}, {"var", to_string(k.var)}};
        } else if constexpr (std::is_same_v<K, fn::Polynomial>) {
          j = {{"kind", "polynomial"}, {"coeffs", k.coeffs}, {"clip", k.clip}, {"var", to_string(k.var)}};
        } else if constexpr (std::is_same_v<K, fn::QuadraticInZ>) {
          j = {{"kind", "quadratic_in_z"}, {"gamma", k.gamma}, {"clip", k.clip}};
        } else if constexpr (std::is_same_v<K, fn::Tabulated>) {
          j = {{"kind", "tabulated"}, {"nodes", k.nodes}, {"values", k.values}, {"var", to_string(k.var)}};
        } else {
          throw std::invalid_argument("host-supplied function '" + k.name + "' cannot be serialized");
        }
      },
      f.kind());
  j["lipschitz_y"] = f.lipschitz_y();
  j["lipschitz_z"] = f.lipschitz_z();
  if (std::isfinite(f.sup_bound())) j["sup_bound"] = f.sup_bound();
  return j;
}

FnSpec fn_from_json(const json& j, const std::string& where) {
  const std::string kind = text(member(j, "kind", where), where + "/kind");
  FnSpec f = wrap(where, [&] {
    if (kind == "constant") return FnSpec::constant(number_at(j, "c", where));
    if (kind == "affine")
      return FnSpec::affine(number_at(j, "a", where), number_at(j, "b", where), var_or(j, Var::x, where));
    if (kind == "polynomial")
      return FnSpec::polynomial(numbers(member(j, "coeffs", where), where + "/coeffs"),
                                number_at(j, "clip", where), var_or(j, Var::x, where));
    if (kind == "quadratic_in_z")
      return FnSpec::quadratic_in_z(number_at(j, "gamma", where), number_at(j, "clip", where));
    if (kind == "tabulated")
      return FnSpec::tabulated(numbers(member(j, "nodes", where), where + "/nodes"),
                               numbers(member(j, "values", where), where + "/values"),
                               var_or(j, Var::x, where));
    throw ConfigError(where + "/kind", "unknown function kind '" + kind + "'");
  });
  if (j.contains("lipschitz_y") || j.contains("lipschitz_z") || j.contains("sup_bound")) {
    const double ly = number_or(j, "lipschitz_y", f.lipschitz_y(), where);
    const double lz = number_or(j, "lipschitz_z", f.lipschitz_z(), where);
    const double sup = number_or(j, "sup_bound", f.sup_bound(), where);
    wrap(where, [&] { return &f.declare(ly, lz, sup); });
  }
  return f;
}

json to_json(const ProblemSpec& s) {
  json ob = {{"N_0", s.obstacles.N_0}};
  ob["h"] = s.obstacles.lower_active ? to_json(s.obstacles.h) : json(nullptr);
  ob["h_prime"] = s.obstacles.upper_active ? to_json(s.obstacles.h_prime) : json(nullptr);
  return {
      {"gparams", {{"sigma_low_sq", s.gparams.sigma_low_sq}, {"sigma_high_sq", s.gparams.sigma_high_sq}}},
      {"coeffs",
       {{"b", to_json(s.coeffs.b)},
        {"l", to_json(s.coeffs.l)},
        {"sigma", to_json(s.coeffs.sigma)},
        {"eps_vol", s.coeffs.eps_vol},
        {"cap_vol", s.coeffs.cap_vol}}},
      {"generators",
       {{"f", to_json(s.gen.f)},
        {"g", to_json(s.gen.g)},
        {"L_y", s.gen.L_y},
        {"L_z", s.gen.L_z},
        {"M_0", s.gen.M_0}}},
      {"obstacles", ob},
      {"phi", to_json(s.phi)},
      {"T", s.T},
  };
}

ProblemSpec spec_from_json(const json& j, const std::string& where) {
  ProblemSpec s;
  const std::string gw = where + "/gparams";
  const json& gp = member(j, "gparams", where);
  s.gparams.sigma_low_sq = number_at(gp, "sigma_low_sq", gw);
  s.gparams.sigma_high_sq = number_at(gp, "sigma_high_sq", gw);

  if (j.contains("coeffs")) {
    const std::string cw = where + "/coeffs";
    const json& c = j.at("coeffs");
    if (c.contains("b")) s.coeffs.b = fn_from_json(c.at("b"), cw + "/b");
    if (c.contains("l")) s.coeffs.l = fn_from_json(c.at("l"), cw + "/l");
    if (c.contains("sigma")) s.coeffs.sigma = fn_from_json(c.at("sigma"), cw + "/sigma");
    s.coeffs.eps_vol = number_or(c, "eps_vol", s.coeffs.eps_vol, cw);
    s.coeffs.cap_vol = number_or(c, "cap_vol", s.coeffs.cap_vol, cw);
  }
  if (j.contains("generators")) {
    const std::string ew = where + "/generators";
    const json& g = j.at("generators");
    if (g.contains("f")) s.gen.f = fn_from_json(g.at("f"), ew + "/f");
    if (g.contains("g")) s.gen.g = fn_from_json(g.at("g"), ew + "/g");
    s.gen.L_y = number_or(g, "L_y", s.gen.L_y, ew);
    s.gen.L_z = number_or(g, "L_z", s.gen.L_z, ew);
    s.gen.M_0 = number_or(g, "M_0", s.gen.M_0, ew);
  }
  if (j.contains("obstacles")) {
    const std::string ow = where + "/obstacles";
    const json& o = j.at("obstacles");
    if (o.contains("h") && !o.at("h").is_null()) {
      s.obstacles.h = fn_from_json(o.at("h"), ow + "/h");
      s.obstacles.lower_active = true;
    }
    if (o.contains("h_prime") && !o.at("h_prime").is_null()) {
      s.obstacles.h_prime = fn_from_json(o.at("h_prime"), ow + "/h_prime");
      s.obstacles.upper_active = true;
    }
    s.obstacles.N_0 = number_or(o, "N_0", s.obstacles.N_0, ow);
  }
  s.phi = fn_from_json(member(j, "phi", where), where + "/phi");
  s.T = number_at(j, "T", where);
  if (!(s.T > 0.0)) throw ConfigError(where + "/T", "horizon must be positive");
  return s;
}

json to_json(const RunConfig& c) {
  json j;
  if (!c.preset.empty()) j["preset"] = c.preset;
  j["spec"] = to_json(c.spec);
  if (c.partner) j["partner"] = to_json(*c.partner);
  j["grid"] = {{"x_min", c.grid.x_min}, {"x_max", c.grid.x_max}, {"nx", c.grid.nx},
               {"cfl_safety", c.grid.cfl_safety}};
  j["schedule"] = {{"intensities", c.schedule.intensities},
                   {"stop_tol", c.schedule.stop_tol},
                   {"pairing", to_string(c.schedule.pairing)},
                   {"fixed_intensity", c.schedule.fixed_intensity}};
  j["mode"] = to_string(c.mode);
  j["outputs"] = {{"field_csv", c.outputs.field_csv},
                  {"trace_csv", c.outputs.trace_csv},
                  {"report", c.outputs.report},
                  {"slices", c.outputs.slices}};
  return j;
}

RunConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("", "config must be an object");
  RunConfig c;
  bool have_spec = false;
  if (j.contains("preset")) {
    c.preset = text(j.at("preset"), "/preset");
    const Preset& p = wrap("/preset", [&]() -> const Preset& { return find_preset(c.preset); });
    c.spec = p.spec;
    c.partner = p.partner;
    c.grid = p.grid;
    have_spec = true;
  }
  if (j.contains("spec")) {
    c.spec = spec_from_json(j.at("spec"), "/spec");
    if (!j.contains("preset")) c.partner.reset();
    have_spec = true;
  }
  if (j.contains("partner")) c.partner = spec_from_json(j.at("partner"), "/partner");

  if (j.contains("mode"))
    c.mode = wrap("/mode", [&] { return run_mode_from_string(text(j.at("mode"), "/mode")); });
  if (!have_spec) {
    if (c.mode != RunMode::suite) throw ConfigError("/spec", "config needs a preset or an inline spec");
    c.all_presets = true;
  }

  if (j.contains("grid")) {
    const json& g = j.at("grid");
    c.grid.x_min = number_or(g, "x_min", c.grid.x_min, "/grid");
    c.grid.x_max = number_or(g, "x_max", c.grid.x_max, "/grid");
    if (g.contains("nx")) {
      const json& nx = g.at("nx");
      if (!nx.is_number_integer() || nx.get<long long>() < 8)
        throw ConfigError("/grid/nx", "expected an integer >= 8");
      c.grid.nx = nx.get<std::size_t>();
    }
    c.grid.cfl_safety = number_or(g, "cfl_safety", c.grid.cfl_safety, "/grid");
  }
  if (j.contains("schedule")) {
    const json& s = j.at("schedule");
    if (s.contains("intensities")) c.schedule.intensities = numbers(s.at("intensities"), "/schedule/intensities");
    c.schedule.stop_tol = number_or(s, "stop_tol", c.schedule.stop_tol, "/schedule");
    if (s.contains("pairing"))
      c.schedule.pairing =
          wrap("/schedule/pairing", [&] { return pairing_from_string(text(s.at("pairing"), "/schedule/pairing")); });
    c.schedule.fixed_intensity = number_or(s, "fixed_intensity", c.schedule.fixed_intensity, "/schedule");
  }
  if (j.contains("outputs")) {
    const json& o = j.at("outputs");
    if (o.contains("field_csv")) c.outputs.field_csv = text(o.at("field_csv"), "/outputs/field_csv");
    if (o.contains("trace_csv")) c.outputs.trace_csv = text(o.at("trace_csv"), "/outputs/trace_csv");
    if (o.contains("report")) c.outputs.report = text(o.at("report"), "/outputs/report");
    if (o.contains("slices")) c.outputs.slices = numbers(o.at("slices"), "/outputs/slices");
  }
  check_config(c);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, "cannot open config file");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError(path, std::string("parse error: ") + e.what());
  }
  return config_from_json(j);
}

std::vector<double> parse_schedule(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw ConfigError("--schedule", "cannot parse '" + item + "'");
    }
    if (used != item.size()) throw ConfigError("--schedule", "cannot parse '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw ConfigError("--schedule", "empty schedule");
  return out;
}

RunConfig config_for_preset(const std::string& name) {
  const Preset& p = find_preset(name);
  RunConfig c;
  c.preset = p.name;
  c.spec = p.spec;
  c.partner = p.partner;
  c.grid = p.grid;
  return c;
}

void check_config(const RunConfig& c) {
  wrap("/schedule", [&] {
    c.schedule.check();
    return 0;
  });
  if (!(c.grid.x_min < c.grid.x_max)) throw ConfigError("/grid", "x_min must be below x_max");
  if (c.grid.nx < 8) throw ConfigError("/grid/nx", "need nx >= 8");
  if (!(c.grid.cfl_safety > 0.0 && c.grid.cfl_safety <= 1.0))
    throw ConfigError("/grid/cfl_safety", "must lie in (0, 1]");
  if (c.all_presets) return;
  for (std::size_t i = 0; i < c.outputs.slices.size(); ++i) {
    const double t = c.outputs.slices[i];
    if (!(t >= 0.0 && t <= c.spec.T))
      throw ConfigError("/outputs/slices/" + std::to_string(i), "slice time outside [0, T]");
  }
}

}  // namespace gdr
