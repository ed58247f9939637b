#pragma once

// Run configuration for the command-line experiments: named presets, strict
// JSON round-tripping, and parsing of time lists written in units of pi.

#include <charconv>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "paultrap/classical.hpp"
#include "paultrap/error.hpp"

namespace paultrap {

enum class SolverMethod { Rk4, Picard };
enum class SpacePolicy { Auto, Explicit };
enum class OutputFormat { Csv, Json };

struct SolverConfig {
  SolverMethod method = SolverMethod::Rk4;
  double rk4_step = 1e-3;  // spacing of the classical time grid for either solver
  int iterations = 4;
};

struct TimeConfig {
  double t_end = 4.0 * std::numbers::pi;
  std::size_t output_stride = 10;  // emit every k-th classical sample in series output
};

struct SpaceConfig {
  SpacePolicy policy = SpacePolicy::Auto;
  std::optional<std::size_t> points;  // overrides the auto count; required for explicit
  double center = 0.0;
  double half_width = 0.0;
};

struct OutputConfig {
  OutputFormat format = OutputFormat::Csv;
  std::string path;  // empty: standard output
};

struct RunConfig {
  std::string preset;
  double U2 = 0.25;
  double V = 0.05;
  ClassicalInit init;
  int n = 8;
  double b0 = -10.0;
  std::optional<double> declared_c0;
  SolverConfig solver;
  TimeConfig time;
  std::vector<double> times;  // snapshot instants
  SpaceConfig space;
  OutputConfig output;

  TrapParameters params() const { return TrapParameters(U2, V); }
};

inline const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"fig1-rho", "fig2-soliton", "fig3-collapse", "static"};
  return names;
}

inline RunConfig preset(std::string_view name) {
  constexpr double pi = std::numbers::pi;
  RunConfig c;
  c.preset = std::string(name);
  if (name == "fig1-rho" || name == "fig2-soliton") {
    c.times = {0.0, 0.5 * pi, pi, 1.5 * pi, 2.0 * pi, 2.5 * pi, 3.0 * pi, 3.5 * pi, 4.0 * pi};
    return c;
  }
  if (name == "fig3-collapse") {
    c.init = ClassicalInit{0.02, 10.0, 0.0, -pi / 2.0};
    c.n = 4;
    c.b0 = 0.02;
    c.time.t_end = 2.0 * pi;
    c.times = {0.0, 0.25 * pi, 0.5 * pi, 0.75 * pi, pi, 1.25 * pi, 1.5 * pi, 1.75 * pi, 2.0 * pi};
    return c;
  }
  if (name == "static") {
    c.U2 = 1.0;
    c.V = 0.0;
    c.n = 0;
    c.b0 = 0.0;
    c.time.t_end = 2.0 * pi;
    c.times = {0.0, 0.5 * pi, pi, 1.5 * pi, 2.0 * pi};
    return c;
  }
  throw Error(Errc::UnknownPreset, "unknown preset '" + std::string(name) + "'");
}

/// Parses "2pi", "0.5pi", "pi", "-pi" or a plain number into radians.
inline double parse_time(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
  };
  std::string_view s = trim(text);
  double scale = 1.0;
  if (s.size() >= 2 && s.substr(s.size() - 2) == "pi") {
    scale = std::numbers::pi;
    s.remove_suffix(2);
    s = trim(s);
    if (s.empty() || s == "+") return scale;
    if (s == "-") return -scale;
    if (s.back() == '*') s = trim(s.substr(0, s.size() - 1));
  }
  if (s.empty()) throw Error(Errc::ConfigError, "empty time value");
  if (s.front() == '+') s.remove_prefix(1);
  double value = 0.0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || end != s.data() + s.size() || !std::isfinite(value)) {
    throw Error(Errc::ConfigError, "cannot parse time '" + std::string(text) + "'");
  }
  return value * scale;
}

inline std::vector<double> parse_times(std::string_view list) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= list.size()) {
    const std::size_t comma = list.find(',', pos);
    const std::string_view item = list.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
    out.push_back(parse_time(item));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

/// Rejects configurations that cannot run before any computation starts.
inline void validate(const RunConfig& c) {
  auto fail = [](const std::string& what) { throw Error(Errc::ConfigError, what); };
  if (!(c.U2 > 0.0) || !std::isfinite(c.U2)) fail("params.U2 must be positive");
  if (!std::isfinite(c.V)) fail("params.V must be finite");
  for (double v : {c.init.A, c.init.B, c.init.alpha, c.init.beta}) {
    if (!std::isfinite(v)) fail("init values must be finite");
  }
  if (c.n < 0) fail("train.n must be non-negative");
  if (!std::isfinite(c.b0)) fail("train.b0 must be finite");
  if (c.declared_c0 && !(*c.declared_c0 > 0.0)) fail("train.declared_c0 must be positive");
  if (!(c.solver.rk4_step > 0.0)) fail("solver.rk4_step must be positive");
  if (c.solver.iterations < 0) fail("solver.iterations must be non-negative");
  if (!(c.time.t_end > 0.0) || !std::isfinite(c.time.t_end)) fail("time.t_end must be positive");
  if (c.time.t_end / c.solver.rk4_step < 2.0) fail("time.t_end must span at least two solver steps");
  if (c.time.output_stride == 0) fail("time.output_stride must be at least 1");
  for (double t : c.times) {
    if (!(t >= 0.0) || t > c.time.t_end * (1.0 + 1e-12)) fail("snapshot time " + std::to_string(t) + " outside [0, t_end]");
  }
  if (c.space.points && (*c.space.points < 8 || (*c.space.points & (*c.space.points - 1)) != 0)) {
    fail("space.points must be a power of two >= 8");
  }
  if (c.space.policy == SpacePolicy::Explicit) {
    if (!c.space.points) fail("explicit space policy needs space.points");
    if (!(c.space.half_width > 0.0)) fail("explicit space policy needs space.half_width > 0");
    if (!std::isfinite(c.space.center)) fail("space.center must be finite");
  }
}

/// b0 actually used by the quantum construction. With a declared c0 the
/// ratio b0/c0 that sets the center orbit is taken at the declared value.
inline double effective_b0(const RunConfig& c, double computed_c0) {
  return c.declared_c0 ? c.b0 * computed_c0 / *c.declared_c0 : c.b0;
}

inline nlohmann::ordered_json to_json(const RunConfig& c) {
  nlohmann::ordered_json j;
  j["preset"] = c.preset;
  j["params"] = {{"U2", c.U2}, {"V", c.V}};
  j["init"] = {{"A", c.init.A}, {"B", c.init.B}, {"alpha", c.init.alpha}, {"beta", c.init.beta}};
  j["train"] = {{"n", c.n}, {"b0", c.b0}, {"declared_c0", nullptr}};
  if (c.declared_c0) j["train"]["declared_c0"] = *c.declared_c0;
  j["solver"] = {{"method", c.solver.method == SolverMethod::Rk4 ? "rk4" : "picard"},
                 {"rk4_step", c.solver.rk4_step},
                 {"iterations", c.solver.iterations}};
  j["time"] = {{"t_end", c.time.t_end}, {"output_stride", c.time.output_stride}};
  j["times"] = c.times;
  j["space"] = {{"policy", c.space.policy == SpacePolicy::Auto ? "auto" : "explicit"},
                {"points", nullptr},
                {"center", c.space.center},
                {"half_width", c.space.half_width}};
  if (c.space.points) j["space"]["points"] = *c.space.points;
  j["output"] = {{"format", c.output.format == OutputFormat::Csv ? "csv" : "json"}, {"path", c.output.path}};
  return j;
}

namespace detail {

inline void reject_unknown(const nlohmann::json& obj, std::initializer_list<std::string_view> allowed,
                           const std::string& where) {
  if (!obj.is_object()) throw Error(Errc::ConfigError, where + " must be an object");
  for (const auto& item : obj.items()) {
    bool known = false;
    for (auto a : allowed) known = known || item.key() == a;
    if (!known) throw Error(Errc::ConfigError, "unknown key '" + where + (where.empty() ? "" : ".") + item.key() + "'");
  }
}

template <class T>
void read(const nlohmann::json& obj, const char* key, T& out, const std::string& where) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw Error(Errc::ConfigError, "bad value for '" + where + "." + key + "'");
  }
}

inline double read_time(const nlohmann::json& v) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return parse_time(v.get<std::string>());
  throw Error(Errc::ConfigError, "times must be numbers or strings such as \"0.5pi\"");
}

}  // namespace detail

/// Builds a configuration from JSON on top of `base`. A "preset" key replaces
/// the base with that preset; every other key overrides single fields. Keys
/// not part of RunConfig are errors.
inline RunConfig from_json(const nlohmann::json& j, const RunConfig& base) {
  using detail::read;
  using detail::reject_unknown;
  reject_unknown(j, {"preset", "params", "init", "train", "solver", "time", "times", "space", "output"}, "");
  if (j.contains("preset") && !j.at("preset").is_string()) throw Error(Errc::ConfigError, "preset must be a string");
  RunConfig c = j.contains("preset") ? preset(j.at("preset").get<std::string>()) : base;
  if (j.contains("params")) {
    const auto& p = j.at("params");
    reject_unknown(p, {"U2", "V"}, "params");
    read(p, "U2", c.U2, "params");
    read(p, "V", c.V, "params");
  }
  if (j.contains("init")) {
    const auto& p = j.at("init");
    reject_unknown(p, {"A", "B", "alpha", "beta"}, "init");
    read(p, "A", c.init.A, "init");
    read(p, "B", c.init.B, "init");
    read(p, "alpha", c.init.alpha, "init");
    read(p, "beta", c.init.beta, "init");
  }
  if (j.contains("train")) {
    const auto& p = j.at("train");
    reject_unknown(p, {"n", "b0", "declared_c0"}, "train");
    read(p, "n", c.n, "train");
    read(p, "b0", c.b0, "train");
    if (p.contains("declared_c0")) {
      if (p.at("declared_c0").is_null()) {
        c.declared_c0.reset();
      } else {
        double v = 0.0;
        read(p, "declared_c0", v, "train");
        c.declared_c0 = v;
      }
    }
  }
  if (j.contains("solver")) {
    const auto& p = j.at("solver");
    reject_unknown(p, {"method", "rk4_step", "iterations"}, "solver");
    std::string method = c.solver.method == SolverMethod::Rk4 ? "rk4" : "picard";
    read(p, "method", method, "solver");
    if (method == "rk4") {
      c.solver.method = SolverMethod::Rk4;
    } else if (method == "picard") {
      c.solver.method = SolverMethod::Picard;
    } else {
      throw Error(Errc::ConfigError, "solver.method must be \"rk4\" or \"picard\"");
    }
    read(p, "rk4_step", c.solver.rk4_step, "solver");
    read(p, "iterations", c.solver.iterations, "solver");
  }
  if (j.contains("time")) {
    const auto& p = j.at("time");
    reject_unknown(p, {"t_end", "output_stride"}, "time");
    if (p.contains("t_end")) c.time.t_end = detail::read_time(p.at("t_end"));
    read(p, "output_stride", c.time.output_stride, "time");
  }
  if (j.contains("times")) {
    const auto& p = j.at("times");
    if (!p.is_array()) throw Error(Errc::ConfigError, "times must be an array");
    c.times.clear();
    for (const auto& v : p) c.times.push_back(detail::read_time(v));
  }
  if (j.contains("space")) {
    const auto& p = j.at("space");
    reject_unknown(p, {"policy", "points", "center", "half_width"}, "space");
    std::string policy = c.space.policy == SpacePolicy::Auto ? "auto" : "explicit";
    read(p, "policy", policy, "space");
    if (policy == "auto") {
      c.space.policy = SpacePolicy::Auto;
    } else if (policy == "explicit") {
      c.space.policy = SpacePolicy::Explicit;
    } else {
      throw Error(Errc::ConfigError, "space.policy must be \"auto\" or \"explicit\"");
    }
    if (p.contains("points")) {
      if (p.at("points").is_null()) {
        c.space.points.reset();
      } else {
        std::size_t v = 0;
        read(p, "points", v, "space");
        c.space.points = v;
      }
    }
    read(p, "center", c.space.center, "space");
    read(p, "half_width", c.space.half_width, "space");
  }
  if (j.contains("output")) {
    const auto& p = j.at("output");
    reject_unknown(p, {"format", "path"}, "output");
    std::string format = c.output.format == OutputFormat::Csv ? "csv" : "json";
    read(p, "format", format, "output");
    if (format == "csv") {
      c.output.format = OutputFormat::Csv;
    } else if (format == "json") {
      c.output.format = OutputFormat::Json;
    } else {
      throw Error(Errc::ConfigError, "output.format must be \"csv\" or \"json\"");
    }
    read(p, "path", c.output.path, "output");
  }
  return c;
}

inline RunConfig from_json(const nlohmann::json& j) { return from_json(j, preset("fig2-soliton")); }

inline RunConfig parse_config(std::string_view text, const RunConfig& base) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Errc::ConfigError, std::string("config is not valid JSON: ") + e.what());
  }
  return from_json(j, base);
}

inline RunConfig parse_config(std::string_view text) { return parse_config(text, preset("fig2-soliton")); }

}  // namespace paultrap
