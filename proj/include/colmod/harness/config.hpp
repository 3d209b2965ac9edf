#pragma once

#include <charconv>
#include <cstddef>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "colmod/harness/spec.hpp"

// Flat key-value configuration:
//
//   # comment
//   mode = both
//   theta = 0.75
//   bloch = 0.5, 0, 0
//   sweep_bloch = 0,0,1; 0.5,0,0
//
// Later assignments override earlier ones; command-line flags are applied on
// top with line 0.

namespace colmod::harness {

struct ConfigValue {
  std::string text;
  std::size_t line = 0;
};

using ConfigMap = std::map<std::string, ConfigValue>;

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline double parse_double(std::string_view s, const std::string& key, std::size_t line) {
  s = trim(s);
  if (s == "inf" || s == "+inf" || s == "infinity") return std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, v);
  if (s.empty() || res.ec != std::errc() || res.ptr != end) {
    throw ConfigError(key, line, "expected a number, got '" + std::string(s) + "'");
  }
  return v;
}

inline std::size_t parse_size(std::string_view s, const std::string& key, std::size_t line) {
  s = trim(s);
  std::size_t v = 0;
  const auto* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, v);
  if (s.empty() || res.ec != std::errc() || res.ptr != end) {
    throw ConfigError(key, line, "expected a nonnegative integer, got '" + std::string(s) + "'");
  }
  return v;
}

inline bool parse_bool(std::string_view s, const std::string& key, std::size_t line) {
  s = trim(s);
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw ConfigError(key, line, "expected true or false, got '" + std::string(s) + "'");
}

inline std::vector<double> parse_list(std::string_view s, const std::string& key, std::size_t line) {
  std::vector<double> out;
  for (auto part : split(s, ',')) out.push_back(parse_double(part, key, line));
  return out;
}

inline BlochVector parse_bloch(std::string_view s, const std::string& key, std::size_t line) {
  const auto v = parse_list(s, key, line);
  if (v.size() != 3) throw ConfigError(key, line, "a Bloch vector has three components");
  return {v[0], v[1], v[2]};
}

}  // namespace detail

inline const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "mode",    "theta",       "beta",         "steps",         "dim",         "bloch",
      "populations", "energies", "dephase_every", "memory_cap",   "mi_raw_cap",  "sweep_theta",
      "sweep_beta", "sweep_bloch", "analytic_steps", "factorization", "out",      "plots",
      "jobs",    "preset"};
  return keys;
}

/// Parse config text into `into`; later keys overwrite earlier ones.
inline void parse_config_text(std::string_view text, ConfigMap& into) {
  std::size_t line_no = 0;
  for (auto line : detail::split(text, '\n')) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError("syntax", line_no, "expected 'key = value'");
    const std::string key(detail::trim(line.substr(0, eq)));
    const std::string value(detail::trim(line.substr(eq + 1)));
    bool known = false;
    for (const auto& k : config_keys()) known = known || k == key;
    if (!known) throw ConfigError(key.empty() ? "syntax" : key, line_no, "unknown key");
    if (value.empty()) throw ConfigError(key, line_no, "missing value");
    into[key] = ConfigValue{value, line_no};
  }
}

inline void parse_config_file(const std::string& path, ConfigMap& into) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", 0, "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  parse_config_text(buf.str(), into);
}

/// Build a run specification from merged key-value settings.
inline RunSpec build_run_spec(const ConfigMap& values) {
  RunSpec spec;
  if (auto it = values.find("preset"); it != values.end()) {
    if (it->second.text == "fig1") {
      spec = preset_fig1();
    } else if (it->second.text == "fig2") {
      spec = preset_fig2();
    } else {
      throw ConfigError("preset", it->second.line, "unknown preset '" + it->second.text + "' (fig1, fig2)");
    }
  }
  // Fixed key order: scalars first, so an explicit sweep wins over a scalar of the same quantity.
  for (const auto& key : config_keys()) {
    const auto found = values.find(key);
    if (found == values.end()) continue;
    const ConfigValue& v = found->second;
    const std::string& s = v.text;
    const std::size_t ln = v.line;
    if (key == "preset") continue;
    if (key == "mode") {
      if (s == "exact") spec.mode = Mode::kExact;
      else if (s == "analytic") spec.mode = Mode::kAnalytic;
      else if (s == "both") spec.mode = Mode::kBoth;
      else throw ConfigError(key, ln, "expected exact, analytic or both");
    } else if (key == "theta") {
      spec.theta = detail::parse_double(s, key, ln);
      spec.sweep_theta.clear();
    } else if (key == "beta") {
      spec.beta = detail::parse_double(s, key, ln);
      spec.sweep_beta.clear();
    } else if (key == "steps") {
      spec.n_steps = detail::parse_size(s, key, ln);
    } else if (key == "dim") {
      spec.dim = detail::parse_size(s, key, ln);
    } else if (key == "bloch") {
      spec.bloch = detail::parse_bloch(s, key, ln);
      spec.sweep_bloch.clear();
    } else if (key == "populations") {
      spec.populations = detail::parse_list(s, key, ln);
    } else if (key == "energies") {
      spec.energies = detail::parse_list(s, key, ln);
    } else if (key == "dephase_every") {
      const auto k = detail::parse_size(s, key, ln);
      if (k == 0) throw ConfigError(key, ln, "must be >= 1");
      spec.protocol = DephasedProtocol{k};
    } else if (key == "memory_cap") {
      spec.memory_cap = detail::parse_size(s, key, ln);
    } else if (key == "mi_raw_cap") {
      spec.mi_raw_cap = detail::parse_size(s, key, ln);
    } else if (key == "sweep_theta") {
      spec.sweep_theta = detail::parse_list(s, key, ln);
    } else if (key == "sweep_beta") {
      spec.sweep_beta = detail::parse_list(s, key, ln);
    } else if (key == "sweep_bloch") {
      spec.sweep_bloch.clear();
      for (auto part : detail::split(s, ';')) spec.sweep_bloch.push_back(detail::parse_bloch(part, key, ln));
    } else if (key == "analytic_steps") {
      spec.analytic_steps = detail::parse_size(s, key, ln);
    } else if (key == "factorization") {
      spec.factorization = detail::parse_bool(s, key, ln);
    } else if (key == "out") {
      spec.output_path = s;
    } else if (key == "plots") {
      spec.emit_plots = detail::parse_bool(s, key, ln);
    } else if (key == "jobs") {
      spec.jobs = detail::parse_size(s, key, ln);
    }
  }
  // Settings from the file keep their line numbers in validation messages.
  try {
    spec.validate();
  } catch (const ConfigError& e) {
    if (auto it = values.find(e.field()); it != values.end() && it->second.line > 0) {
      throw ConfigError(e.field(), it->second.line, std::string(e.what()).substr(e.field().size() + 2));
    }
    throw;
  }
  return spec;
}

}  // namespace colmod::harness
