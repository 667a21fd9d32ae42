#pragma once

// Run configuration for the xycorr command-line tool. Values come from an
// optional flat key=value file, then the environment (worker count), then
// command-line flags; later sources win.

#include <array>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "xycorr/ergodicity.hpp"
#include "xycorr/measures.hpp"

namespace xycorr::cli {

enum class Command { analytic, eq_curve, quench, ergodicity };

std::string to_string(Command c);
Command parse_command(const std::string& name);

/// Invalid or missing configuration; `key` names the offending entry.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& message)
      : std::runtime_error(key + ": " + message), key_(std::move(key)) {}
  [[nodiscard]] const std::string& key() const { return key_; }

 private:
  std::string key_;
};

struct BetaGridSpec {
  double start = 0.0;
  double stop = 20.0;
  int points = 41;
  bool log = false;

  [[nodiscard]] std::vector<double> grid() const;
};

struct RunConfig {
  Command command = Command::analytic;
  ModelSpec model;
  double gamma = 0.5;
  double beta_tilde = 20.0;
  std::vector<double> a_list;
  double h_final_tilde = 0.0;
  double t_min = 20.0;
  double t_max = 120.0;
  int num_samples = 500;
  bool window_check = true;
  BetaGridSpec beta_grid;
  std::vector<Measure> measures;
  std::optional<double> epsilon;  // empty: auto
  ScanRange scan;
  std::string output_dir = ".";
  int workers = 1;
  bool strict = false;
};

/// Raw key=value pairs; keys match the long flag names without dashes.
using KeyValues = std::map<std::string, std::string>;

/// Parses flat key=value text; '#' starts a comment, blank lines are ignored.
KeyValues parse_key_values(const std::string& text);

/// Builds and validates a RunConfig from merged key/value pairs.
RunConfig build_config(const KeyValues& values);

/// Every key accepted by build_config.
const std::vector<std::string>& known_keys();

}  // namespace xycorr::cli
