#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rvdp/chain.hpp"
#include "rvdp/error.hpp"
#include "rvdp/model.hpp"

namespace rvdp {

enum class Command { Ode, Chain, Pde, Network, Verify, Sweep };
enum class OdeSystem { Vdp, Rayleigh, Rvdp, Homogeneous, StuartLandau };
enum class IcKind { AnalyticWave, Uniform, Gaussian, TwoWaves };

struct IcPreset {
  IcKind kind = IcKind::AnalyticWave;
  double a = 0.0;  ///< uniform value, or gaussian centre
  double b = 0.0;  ///< gaussian width

  friend bool operator==(const IcPreset&, const IcPreset&) = default;
};

/// Fully resolved run description. Every field has a documented default.
struct RunConfig {
  Command command = Command::Pde;
  ModelParams params = canonical_delta(ModelParams{});
  OdeSystem system = OdeSystem::Rvdp;
  CouplingMode coupling = CouplingMode::ContinuumNormalized;
  std::vector<double> sweep_mu;

  double length = std::numbers::pi * std::numbers::sqrt2;  // one wavelength of the k = sqrt(2) wave
  double duration = 10.0;
  double dx = 0.02;
  double dt = 1e-3;
  std::string graph;      ///< complete(n), path(n) or edgeless(n)
  std::string adjacency;  ///< path to a whitespace-separated adjacency matrix

  BoundaryKind bc = BoundaryKind::Periodic;

  IcPreset ic;
  double u0 = 1.0;
  double v0 = 0.0;

  std::string output_dir = "out";
  std::size_t stride = 10;
  bool plot_script = true;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

inline std::string_view to_string(Command c) {
  switch (c) {
    case Command::Ode: return "ode";
    case Command::Chain: return "chain";
    case Command::Pde: return "pde";
    case Command::Network: return "network";
    case Command::Verify: return "verify";
    case Command::Sweep: return "sweep";
  }
  return "?";
}

inline std::optional<Command> parse_command(std::string_view s) {
  for (auto c : {Command::Ode, Command::Chain, Command::Pde, Command::Network, Command::Verify,
                 Command::Sweep}) {
    if (to_string(c) == s) return c;
  }
  return std::nullopt;
}

inline std::string_view to_string(OdeSystem s) {
  switch (s) {
    case OdeSystem::Vdp: return "vdp";
    case OdeSystem::Rayleigh: return "rayleigh";
    case OdeSystem::Rvdp: return "rvdp";
    case OdeSystem::Homogeneous: return "homogeneous";
    case OdeSystem::StuartLandau: return "stuart_landau";
  }
  return "?";
}

inline std::string_view to_string(CouplingMode m) {
  return m == CouplingMode::Raw ? "raw" : "continuum";
}

/// Shortest decimal text that reads back to the same double.
inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string to_string(const IcPreset& ic) {
  switch (ic.kind) {
    case IcKind::AnalyticWave: return "analytic_wave";
    case IcKind::Uniform: return "uniform(" + format_double(ic.a) + ")";
    case IcKind::Gaussian: return "gaussian(" + format_double(ic.a) + "," + format_double(ic.b) + ")";
    case IcKind::TwoWaves: return "two_waves";
  }
  return "?";
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline std::optional<double> to_double(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

/// "name(a,b,...)" -> {name, args}; a bare name has no args.
inline std::optional<std::pair<std::string, std::vector<double>>> parse_call(std::string_view s) {
  s = trim(s);
  const auto open = s.find('(');
  if (open == std::string_view::npos) return std::pair{std::string(s), std::vector<double>{}};
  if (s.back() != ')') return std::nullopt;
  std::pair<std::string, std::vector<double>> out{std::string(trim(s.substr(0, open))), {}};
  auto args = s.substr(open + 1, s.size() - open - 2);
  while (!trim(args).empty()) {
    const auto comma = args.find(',');
    const auto v = to_double(args.substr(0, comma));
    if (!v) return std::nullopt;
    out.second.push_back(*v);
    if (comma == std::string_view::npos) break;
    args.remove_prefix(comma + 1);
  }
  return out;
}

struct Entry {
  std::string section;
  std::string key;
  std::string value;
  std::size_t line;
};

class ConfigBuilder {
 public:
  explicit ConfigBuilder(Command command) { config_.command = command; }

  void apply(const Entry& e) {
    const std::string id = e.section + "." + e.key;
    const auto it = setters().find(id);
    if (it == setters().end()) {
      throw ConfigError(ErrorCode::UnknownKey, e.line, "unknown key '" + id + "'");
    }
    seen_[id] = e.line;
    it->second(*this, e);
  }

  RunConfig finish() {
    if (delta_canonical_) {
      config_.params = canonical_delta(config_.params);
    } else {
      config_.params.canonical = false;
    }
    try {
      validate_params(config_.params);
    } catch (const Error& err) {
      throw ConfigError(err.code(), line_of("model.delta"), err.what());
    }
    if (config_.command == Command::Network && config_.graph.empty() &&
        config_.adjacency.empty()) {
      throw ConfigError(ErrorCode::MissingRequired, 0,
                        "network needs grid.graph or grid.adjacency");
    }
    if (config_.command == Command::Sweep && config_.sweep_mu.empty()) {
      throw ConfigError(ErrorCode::MissingRequired, 0, "sweep needs model.sweep_mu");
    }
    return config_;
  }

 private:
  using Setter = void (*)(ConfigBuilder&, const Entry&);

  std::size_t line_of(const std::string& id) const {
    const auto it = seen_.find(id);
    return it == seen_.end() ? 0 : it->second;
  }

  static double number(const Entry& e) {
    const auto v = to_double(e.value);
    if (!v) {
      throw ConfigError(ErrorCode::TypeError, e.line,
                        e.section + "." + e.key + " expects a number, got '" + e.value + "'");
    }
    if (!std::isfinite(*v)) throw ConfigError(ErrorCode::NonFinite, e.line, e.key + " is not finite");
    return *v;
  }
  static double positive(const Entry& e, ErrorCode code = ErrorCode::InvalidArgument) {
    const double v = number(e);
    if (!(v > 0.0)) throw ConfigError(code, e.line, e.key + " must be > 0");
    return v;
  }
  static double non_negative(const Entry& e) {
    const double v = number(e);
    if (v < 0.0) throw ConfigError(ErrorCode::NegativeCoefficient, e.line, e.key + " must be >= 0");
    return v;
  }
  static bool boolean(const Entry& e) {
    if (e.value == "true" || e.value == "1" || e.value == "yes") return true;
    if (e.value == "false" || e.value == "0" || e.value == "no") return false;
    throw ConfigError(ErrorCode::TypeError, e.line, e.key + " expects true/false");
  }
  [[noreturn]] static void bad_choice(const Entry& e, std::string_view choices) {
    throw ConfigError(ErrorCode::TypeError, e.line,
                      e.key + " must be one of " + std::string(choices) + ", got '" + e.value + "'");
  }

  static const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"model.omega0", [](ConfigBuilder& b, const Entry& e) {
           b.config_.params.omega0 = positive(e, ErrorCode::NonPositiveOmega);
         }},
        {"model.epsilon", [](ConfigBuilder& b, const Entry& e) { b.config_.params.epsilon = non_negative(e); }},
        {"model.delta", [](ConfigBuilder& b, const Entry& e) {
           if (e.value == "canonical") {
             b.delta_canonical_ = true;
           } else {
             b.delta_canonical_ = false;
             b.config_.params.delta = non_negative(e);
           }
         }},
        {"model.mu", [](ConfigBuilder& b, const Entry& e) { b.config_.params.mu = non_negative(e); }},
        {"model.amp", [](ConfigBuilder& b, const Entry& e) { b.config_.params.amp = non_negative(e); }},
        {"model.equation", [](ConfigBuilder& b, const Entry& e) {
           for (auto s : {OdeSystem::Vdp, OdeSystem::Rayleigh, OdeSystem::Rvdp,
                          OdeSystem::Homogeneous, OdeSystem::StuartLandau}) {
             if (to_string(s) == e.value) {
               b.config_.system = s;
               return;
             }
           }
           bad_choice(e, "vdp, rayleigh, rvdp, homogeneous, stuart_landau");
         }},
        {"model.coupling", [](ConfigBuilder& b, const Entry& e) {
           if (e.value == "raw") b.config_.coupling = CouplingMode::Raw;
           else if (e.value == "continuum") b.config_.coupling = CouplingMode::ContinuumNormalized;
           else bad_choice(e, "raw, continuum");
         }},
        {"model.sweep_mu", [](ConfigBuilder& b, const Entry& e) {
           b.config_.sweep_mu.clear();
           std::string_view rest = e.value;
           while (!trim(rest).empty()) {
             const auto comma = rest.find(',');
             Entry item = e;
             item.value = std::string(trim(rest.substr(0, comma)));
             b.config_.sweep_mu.push_back(non_negative(item));
             if (comma == std::string_view::npos) break;
             rest.remove_prefix(comma + 1);
           }
         }},
        {"grid.L", [](ConfigBuilder& b, const Entry& e) { b.config_.length = positive(e, ErrorCode::InvalidGrid); }},
        {"grid.T", [](ConfigBuilder& b, const Entry& e) { b.config_.duration = positive(e, ErrorCode::InvalidGrid); }},
        {"grid.dx", [](ConfigBuilder& b, const Entry& e) { b.config_.dx = positive(e, ErrorCode::InvalidGrid); }},
        {"grid.dt", [](ConfigBuilder& b, const Entry& e) { b.config_.dt = positive(e, ErrorCode::InvalidGrid); }},
        {"grid.graph", [](ConfigBuilder& b, const Entry& e) {
           const auto call = parse_call(e.value);
           const bool ok = call && call->second.size() == 1 && call->second[0] >= 2 &&
                           call->second[0] == std::floor(call->second[0]) &&
                           (call->first == "complete" || call->first == "path" ||
                            call->first == "edgeless");
           if (!ok) bad_choice(e, "complete(n), path(n), edgeless(n) with n >= 2");
           b.config_.graph = e.value;
         }},
        {"grid.adjacency", [](ConfigBuilder& b, const Entry& e) { b.config_.adjacency = e.value; }},
        {"bc.kind", [](ConfigBuilder& b, const Entry& e) {
           for (auto k : {BoundaryKind::Periodic, BoundaryKind::NeumannZero,
                          BoundaryKind::DirichletZero, BoundaryKind::DirichletFunction}) {
             if (rvdp::to_string(k) == e.value) {
               b.config_.bc = k;
               return;
             }
           }
           bad_choice(e, "periodic, neumann, dirichlet_zero, dirichlet_exact");
         }},
        {"ic.preset", [](ConfigBuilder& b, const Entry& e) {
           const auto call = parse_call(e.value);
           if (call) {
             const auto& [name, args] = *call;
             if (name == "analytic_wave" && args.empty()) {
               b.config_.ic = {IcKind::AnalyticWave, 0.0, 0.0};
               return;
             }
             if (name == "two_waves" && args.empty()) {
               b.config_.ic = {IcKind::TwoWaves, 0.0, 0.0};
               return;
             }
             if (name == "uniform" && args.size() == 1) {
               b.config_.ic = {IcKind::Uniform, args[0], 0.0};
               return;
             }
             if (name == "gaussian" && args.size() == 2 && args[1] > 0.0) {
               b.config_.ic = {IcKind::Gaussian, args[0], args[1]};
               return;
             }
           }
           bad_choice(e, "analytic_wave, uniform(c), gaussian(center,width), two_waves");
         }},
        {"ic.u0", [](ConfigBuilder& b, const Entry& e) { b.config_.u0 = number(e); }},
        {"ic.v0", [](ConfigBuilder& b, const Entry& e) { b.config_.v0 = number(e); }},
        {"output.dir", [](ConfigBuilder& b, const Entry& e) { b.config_.output_dir = e.value; }},
        {"output.stride", [](ConfigBuilder& b, const Entry& e) {
           const double v = number(e);
           if (v < 1.0 || v != std::floor(v)) {
             throw ConfigError(ErrorCode::TypeError, e.line, "stride must be a positive integer");
           }
           b.config_.stride = static_cast<std::size_t>(v);
         }},
        {"output.plot_script", [](ConfigBuilder& b, const Entry& e) { b.config_.plot_script = boolean(e); }},
    };
    return table;
  }

  RunConfig config_;
  bool delta_canonical_ = true;
  std::map<std::string, std::size_t> seen_;
};

}  // namespace detail

/// Parses the `key = value` / `[section]` format. Lines starting with `#` or `;` are
/// comments. `overrides` are `section.key=value` strings applied after the file.
inline RunConfig parse_config(std::string_view text, Command command,
                              const std::vector<std::string>& overrides = {}) {
  detail::ConfigBuilder builder(command);
  std::string section;
  std::size_t lineno = 0;
  while (!text.empty()) {
    ++lineno;
    const auto nl = text.find('\n');
    auto line = detail::trim(text.substr(0, nl));
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    if (line.empty() || line.front() == '#' || line.front() == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(ErrorCode::TypeError, lineno, "malformed section header");
      section = std::string(detail::trim(line.substr(1, line.size() - 2)));
      static const std::vector<std::string> known = {"model", "grid", "bc", "ic", "output"};
      if (std::find(known.begin(), known.end(), section) == known.end()) {
        throw ConfigError(ErrorCode::UnknownKey, lineno, "unknown section [" + section + "]");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(ErrorCode::TypeError, lineno, "expected 'key = value'");
    }
    if (section.empty()) {
      throw ConfigError(ErrorCode::UnknownKey, lineno, "key outside of any section");
    }
    builder.apply({section, std::string(detail::trim(line.substr(0, eq))),
                   std::string(detail::trim(line.substr(eq + 1))), lineno});
  }
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    const auto dot = o.find('.');
    if (eq == std::string::npos || dot == std::string::npos || dot > eq) {
      throw ConfigError(ErrorCode::TypeError, 0, "override must look like section.key=value: " + o);
    }
    builder.apply({o.substr(0, dot), std::string(detail::trim(std::string_view(o).substr(dot + 1, eq - dot - 1))),
                   std::string(detail::trim(std::string_view(o).substr(eq + 1))), 0});
  }
  return builder.finish();
}

/// Writes every resolved field in the format parse_config reads.
inline std::string to_config_text(const RunConfig& c) {
  std::string s;
  const auto kv = [&](std::string_view k, const std::string& v) {
    s += k;
    s += " = ";
    s += v;
    s += '\n';
  };
  s += "# command: " + std::string(to_string(c.command)) + "\n";
  s += "[model]\n";
  kv("omega0", format_double(c.params.omega0));
  kv("epsilon", format_double(c.params.epsilon));
  kv("delta", c.params.canonical ? "canonical" : format_double(c.params.delta));
  kv("mu", format_double(c.params.mu));
  kv("amp", format_double(c.params.amp));
  kv("equation", std::string(to_string(c.system)));
  kv("coupling", std::string(to_string(c.coupling)));
  if (!c.sweep_mu.empty()) {
    std::string list;
    for (std::size_t k = 0; k < c.sweep_mu.size(); ++k) {
      if (k) list += ",";
      list += format_double(c.sweep_mu[k]);
    }
    kv("sweep_mu", list);
  }
  s += "[grid]\n";
  kv("L", format_double(c.length));
  kv("T", format_double(c.duration));
  kv("dx", format_double(c.dx));
  kv("dt", format_double(c.dt));
  if (!c.graph.empty()) kv("graph", c.graph);
  if (!c.adjacency.empty()) kv("adjacency", c.adjacency);
  s += "[bc]\n";
  kv("kind", rvdp::to_string(c.bc));
  s += "[ic]\n";
  kv("preset", to_string(c.ic));
  kv("u0", format_double(c.u0));
  kv("v0", format_double(c.v0));
  s += "[output]\n";
  kv("dir", c.output_dir);
  kv("stride", std::to_string(c.stride));
  kv("plot_script", c.plot_script ? "true" : "false");
  return s;
}

}  // namespace rvdp
