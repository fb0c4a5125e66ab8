#pragma once

#include <limits>
#include <string>
#include <vector>

#include "qbus/chain.hpp"
#include "qbus/correlations.hpp"
#include "qbus/initial_states.hpp"
#include "qbus/propagation.hpp"

namespace qbus {

enum class ModelChoice { Exact, Effective, Both };

struct PairSpec {
  std::string label;  // "ac", "bc" or "ab"
  int u = 0;
  int v = 0;
};

PairSpec pair_from_label(const std::string& label);

struct ScenarioConfig {
  std::string name;
  std::string description;
  ChainSpec chain;
  BathSpec bath;
  InitialStateSpec initial;
  ModelChoice model = ModelChoice::Both;
  std::vector<PairSpec> pairs;
  double t_max = 4200.0;  // in units of 1/omega
  int n_points = 2101;
  BellSearch bell;
  ExactMethod exact_method = ExactMethod::RK4;
  /// RK4 step and convergence-probe length; see ExactOptions.
  double exact_step = 0.0;
  double exact_probe_span = std::numeric_limits<double>::infinity();
  std::string output_dir = ".";
};

/// Names of the built-in presets, in display order.
std::vector<std::string> preset_names();
/// Throws ConfigError for an unknown name.
ScenarioConfig preset(const std::string& name);
/// One line per preset with its parameter summary.
std::string list_presets();

/// Applies `key = value` (dotted keys such as chain.N). Throws ConfigError
/// naming the key on unknown keys or unparsable values.
void apply_setting(ScenarioConfig& config, const std::string& key, const std::string& value);
/// Parses "key=value" as given on the command line.
void apply_assignment(ScenarioConfig& config, const std::string& assignment);
/// Applies every `key = value` line of a config file; `#` starts a comment.
void apply_config_text(ScenarioConfig& config, const std::string& text);
void apply_config_file(ScenarioConfig& config, const std::string& path);

/// Throws ConfigError naming the offending key.
void validate(const ScenarioConfig& config);

std::vector<double> omega_time_grid(const ScenarioConfig& config);

struct Series {
  std::string model;  // "exact" or "effective"
  PairSpec pair;
  std::vector<CorrelationRecord> records;
};

struct ScenarioResult {
  std::vector<Series> series;
  std::vector<std::string> files;
};

inline constexpr const char* kCsvHeader = "t_omega,E,S_fwd,S_rev,D_fwd,D_rev,M,B,theta_star";

/// 17 significant digits, '.' separator, independent of the global locale.
std::string format_number(double value);
std::string format_csv(const std::vector<CorrelationRecord>& records);
std::string csv_filename(const ScenarioConfig& config, const std::string& model,
                         const std::string& pair);

/// Runs the configured models and pairs. Files are written only when
/// `write_files` is set. Throws ConfigError or IntegrationFailure.
ScenarioResult run_scenario(const ScenarioConfig& config, bool write_files = true);

/// Critical times, steering windows and thresholds for the configured
/// parameters as `key = value` lines.
std::string run_analysis(const ScenarioConfig& config);

}  // namespace qbus
