#include "xycorr/cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace xycorr::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  return out;
}

double to_double(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size() || !std::isfinite(v)) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key, "expected a number, got '" + text + "'");
  }
}

int to_int(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key, "expected an integer, got '" + text + "'");
  }
}

bool to_bool(const std::string& key, const std::string& text) {
  if (text == "1" || text == "true" || text == "yes" || text == "on") return true;
  if (text == "0" || text == "false" || text == "no" || text == "off") return false;
  throw ConfigError(key, "expected a boolean, got '" + text + "'");
}

std::vector<double> to_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split(text, ',')) {
    if (item.empty()) throw ConfigError(key, "empty list entry");
    out.push_back(to_double(key, item));
  }
  if (out.empty()) throw ConfigError(key, "empty list");
  return out;
}

std::array<int, 2> to_geometry(ModelKind kind, const std::string& text) {
  const auto parts = split(text, 'x');
  if (kind == ModelKind::torus) {
    if (parts.size() != 2) throw ConfigError("geometry", "torus geometry must look like 4x3");
    return {to_int("geometry", parts[0]), to_int("geometry", parts[1])};
  }
  if (kind == ModelKind::ladder && parts.size() == 2) {
    // 2xL is accepted for ladders as well as L.
    if (to_int("geometry", parts[0]) != 2) throw ConfigError("geometry", "ladders have two legs");
    return {to_int("geometry", parts[1]), 0};
  }
  if (parts.size() != 1) throw ConfigError("geometry", "expected a single length");
  return {to_int("geometry", parts[0]), 0};
}

std::array<int, 2> default_geometry(ModelKind kind) {
  switch (kind) {
    case ModelKind::chain: return {12, 0};
    case ModelKind::ladder: return {4, 0};
    case ModelKind::torus: return {4, 3};
    case ModelKind::chain_infinite: break;
  }
  return {0, 0};
}

BetaGridSpec to_beta_grid(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 3 && parts.size() != 4)
    throw ConfigError("beta-grid", "expected start:stop:points[:linear|log]");
  BetaGridSpec g;
  g.start = to_double("beta-grid", parts[0]);
  g.stop = to_double("beta-grid", parts[1]);
  g.points = to_int("beta-grid", parts[2]);
  if (parts.size() == 4) {
    if (parts[3] == "log") {
      g.log = true;
    } else if (parts[3] != "linear") {
      throw ConfigError("beta-grid", "spacing must be linear or log");
    }
  }
  if (g.points < 1) throw ConfigError("beta-grid", "needs at least one point");
  if (g.start < 0.0) throw ConfigError("beta-grid", "temperatures must be nonnegative");
  if (g.points > 1 && !(g.stop > g.start)) throw ConfigError("beta-grid", "stop must exceed start");
  if (g.log && !(g.start > 0.0)) throw ConfigError("beta-grid", "log spacing needs start > 0");
  return g;
}

}  // namespace

std::string to_string(Command c) {
  switch (c) {
    case Command::analytic: return "analytic";
    case Command::eq_curve: return "eq-curve";
    case Command::quench: return "quench";
    case Command::ergodicity: return "ergodicity";
  }
  return "?";
}

Command parse_command(const std::string& name) {
  if (name == "analytic") return Command::analytic;
  if (name == "eq-curve") return Command::eq_curve;
  if (name == "quench") return Command::quench;
  if (name == "ergodicity") return Command::ergodicity;
  throw ConfigError("command", "unknown command '" + name + "'");
}

std::vector<double> BetaGridSpec::grid() const {
  return log ? log_grid(start, stop, points) : linear_grid(start, stop, points);
}

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = {
      "command", "model",       "geometry",    "J",          "gamma",      "beta",       "a",
      "h-final", "t-min",       "t-max",       "samples",    "window-check", "beta-grid", "measures",
      "epsilon", "relevant-lo", "relevant-hi", "scan-lo",    "scan-points", "out",       "workers",
      "strict"};
  return keys;
}

KeyValues parse_key_values(const std::string& text) {
  KeyValues out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config", "line " + std::to_string(lineno) + " is not key=value");
    const std::string key = trim(line.substr(0, eq));
    if (std::find(known_keys().begin(), known_keys().end(), key) == known_keys().end())
      throw ConfigError(key, "unknown key");
    out[key] = trim(line.substr(eq + 1));
  }
  return out;
}

RunConfig build_config(const KeyValues& v) {
  for (const auto& [key, value] : v) {
    if (std::find(known_keys().begin(), known_keys().end(), key) == known_keys().end())
      throw ConfigError(key, "unknown key");
  }
  auto get = [&](const std::string& key) -> const std::string* {
    const auto it = v.find(key);
    return it == v.end() ? nullptr : &it->second;
  };
  auto require = [&](const std::string& key) -> const std::string& {
    const std::string* s = get(key);
    if (!s || s->empty()) throw ConfigError(key, "required but missing");
    return *s;
  };

  RunConfig c;
  c.command = parse_command(require("command"));

  try {
    c.model.kind = parse_model_kind(require("model"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError("model", e.what());
  }
  c.model.geometry = get("geometry") ? to_geometry(c.model.kind, *get("geometry")) : default_geometry(c.model.kind);
  if (get("J")) c.model.J = to_double("J", *get("J"));
  if (c.model.J == 0.0) throw ConfigError("J", "must be nonzero");
  if (c.model.finite()) {
    try {
      const SpinLattice lattice = c.model.lattice();
      if (lattice.num_sites > 12) throw ConfigError("geometry", "finite models are limited to 12 sites");
    } catch (const std::invalid_argument& e) {
      throw ConfigError("geometry", e.what());
    }
  }

  c.gamma = to_double("gamma", require("gamma"));
  if (c.gamma == 0.0 && !c.model.finite()) throw ConfigError("gamma", "the infinite chain requires gamma != 0");

  const bool needs_beta = c.command != Command::eq_curve;
  if (needs_beta) {
    c.beta_tilde = to_double("beta", require("beta"));
    if (!(c.beta_tilde > 0.0)) throw ConfigError("beta", "must be positive");
  } else if (get("beta")) {
    c.beta_tilde = to_double("beta", *get("beta"));
  }

  if (c.command != Command::eq_curve) {
    c.a_list = to_list("a", require("a"));
    for (double a : c.a_list) {
      if (a < 0.0) throw ConfigError("a", "fields must be nonnegative");
    }
  }

  if (get("h-final")) c.h_final_tilde = to_double("h-final", *get("h-final"));
  if (c.h_final_tilde != 0.0 && !c.model.finite())
    throw ConfigError("h-final", "the infinite chain supports h-final = 0 only");
  if (get("t-min")) c.t_min = to_double("t-min", *get("t-min"));
  if (get("t-max")) c.t_max = to_double("t-max", *get("t-max"));
  if (get("samples")) c.num_samples = to_int("samples", *get("samples"));
  if (c.t_min < 0.0) throw ConfigError("t-min", "must be nonnegative");
  if (!(c.t_max > c.t_min)) throw ConfigError("t-max", "must exceed t-min");
  if (c.num_samples < 2) throw ConfigError("samples", "need at least two samples");
  if (get("window-check")) c.window_check = to_bool("window-check", *get("window-check"));

  if (c.command == Command::eq_curve) c.beta_grid = to_beta_grid(require("beta-grid"));
  if (c.command == Command::quench && !c.model.finite())
    throw ConfigError("model", "quench runs need a finite model; use analytic for the infinite chain");

  try {
    c.measures = parse_measure_list(get("measures") ? *get("measures") : "C,EN,Q,WD");
  } catch (const std::invalid_argument& e) {
    throw ConfigError("measures", e.what());
  }
  if (c.measures.empty()) throw ConfigError("measures", "empty list");

  if (get("epsilon") && *get("epsilon") != "auto") {
    c.epsilon = to_double("epsilon", *get("epsilon"));
    if (*c.epsilon < 0.0) throw ConfigError("epsilon", "must be nonnegative");
  }

  if (c.beta_tilde > 0.0) c.scan = default_scan_range(c.beta_tilde);
  if (get("relevant-lo")) c.scan.relevant_lo = to_double("relevant-lo", *get("relevant-lo"));
  if (get("relevant-hi")) c.scan.relevant_hi = to_double("relevant-hi", *get("relevant-hi"));
  if (get("scan-lo")) c.scan.scan_lo = to_double("scan-lo", *get("scan-lo"));
  if (get("scan-points")) c.scan.points = to_int("scan-points", *get("scan-points"));
  c.scan.scan_lo = std::min(c.scan.scan_lo, c.scan.relevant_lo);
  c.scan.scan_hi = std::max(c.scan.scan_hi, c.scan.relevant_hi);
  if (c.command == Command::ergodicity) {
    try {
      c.scan.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError("relevant-lo", e.what());
    }
  }

  if (get("out")) c.output_dir = *get("out");
  if (c.output_dir.empty()) throw ConfigError("out", "empty path");
  if (get("workers")) c.workers = to_int("workers", *get("workers"));
  if (c.workers < 1) throw ConfigError("workers", "must be at least 1");
  if (get("strict")) c.strict = to_bool("strict", *get("strict"));
  return c;
}

}  // namespace xycorr::cli
