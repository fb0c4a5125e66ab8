#include "qbus/scenario.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qbus/analysis.hpp"
#include "qbus/error.hpp"

namespace qbus {

namespace {

[[noreturn]] void config_error(const std::string& key, const std::string& why) {
  throw Error(ErrorCode::ConfigError, key + ": " + why);
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double parse_double(const std::string& key, const std::string& text) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    config_error(key, "expected a number, got '" + text + "'");
  }
  return value;
}

int parse_int(const std::string& key, const std::string& text) {
  int value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) config_error(key, "expected an integer, got '" + text + "'");
  return value;
}

const char* model_name(ModelChoice m) {
  switch (m) {
    case ModelChoice::Exact: return "exact";
    case ModelChoice::Effective: return "effective";
    case ModelChoice::Both: return "both";
  }
  return "both";
}

std::string pairs_text(const std::vector<PairSpec>& pairs) {
  std::string out;
  for (const auto& p : pairs) out += (out.empty() ? "" : ",") + p.label;
  return out;
}

ScenarioConfig base_preset() {
  ScenarioConfig c;
  c.chain = ChainSpec{10, 1.0, 20.0, 10, 1, 0.03, 1};
  c.bath = BathSpec{0.0, 0.0};
  c.initial = InitialStateSpec{InitialStateSpec::Kind::PureEnv, 1.0, 0.0};
  c.pairs = {pair_from_label("bc"), pair_from_label("ac")};
  c.t_max = 4200.0;
  c.n_points = 2101;
  return c;
}

struct PresetEntry {
  const char* name;
  const char* description;
  void (*tweak)(ScenarioConfig&);
};

void mixed_c(ScenarioConfig& c) { c.initial.occupation = 10.0; }
void open_system(ScenarioConfig& c) {
  c.bath = BathSpec{1e-4, 0.1};
  c.t_max = 10.0 / c.bath.zeta;
  c.n_points = 2001;
  c.exact_method = ExactMethod::VanLoan;
}
void thermal_all(ScenarioConfig& c) {
  c.initial = InitialStateSpec{InitialStateSpec::Kind::ThermalEnv, 1.0, 10.0};
}
void thermal_separable(ScenarioConfig& c) {
  c.initial = InitialStateSpec{InitialStateSpec::Kind::ThermalEnv, 0.5, 10.0};
}
void unchanged(ScenarioConfig&) {}

const PresetEntry kPresets[] = {
    {"fig2", "entanglement, pure initial state (r=1, n_c=0)", unchanged},
    {"fig3", "direct steering, pure initial state (r=1, n_c=0)", unchanged},
    {"fig4", "reverse steering, pure initial state (r=1, n_c=0)", unchanged},
    {"fig5", "entanglement, thermal oscillator c (r=1, n_c=10)", mixed_c},
    {"fig6", "reverse steering, thermal oscillator c (r=1, n_c=10)", mixed_c},
    {"fig7", "entanglement with thermal baths (zeta=1e-4, n_th=0.1)", open_system},
    {"fig8", "steering with thermal baths (zeta=1e-4, n_th=0.1)", open_system},
    {"fig9", "mutual information and discord, pure initial state", unchanged},
    {"fig10", "mutual information and discord, thermal oscillator c (n_c=10)", mixed_c},
    {"fig11", "mutual information and discord, all oscillators thermal (r=1, n=10)", thermal_all},
    {"fig12", "mutual information and discord, separable thermal pair (r=1/2, n=10)",
     thermal_separable},
    {"fig13_left", "Bell correlations, pure initial state", unchanged},
    {"fig13_right", "Bell correlations, thermal oscillator c (n_c=10)", mixed_c},
};

std::string summary(const ScenarioConfig& c) {
  std::ostringstream out;
  out << "N=" << c.chain.N << " kappa/omega=" << format_number(c.chain.kappa / c.chain.omega)
      << " alpha=" << c.chain.alpha << " beta=" << c.chain.beta
      << " epsilon/omega=" << format_number(c.chain.epsilon / c.chain.omega) << " m=" << c.chain.m
      << " r=" << format_number(c.initial.r)
      << (c.initial.kind == InitialStateSpec::Kind::PureEnv ? " n_c=" : " n=")
      << format_number(c.initial.occupation)
      << (c.initial.kind == InitialStateSpec::Kind::PureEnv ? " (pure_env)" : " (thermal_env)")
      << " zeta/omega=" << format_number(c.bath.zeta / c.chain.omega)
      << " n_th=" << format_number(c.bath.n_th) << " t_max=" << format_number(c.t_max)
      << " n_points=" << c.n_points;
  return out.str();
}

}  // namespace

PairSpec pair_from_label(const std::string& label) {
  if (label == "ac") return {"ac", kModeA, kModeC};
  if (label == "bc") return {"bc", kModeB, kModeC};
  if (label == "ab") return {"ab", kModeA, kModeB};
  config_error("pairs", "unknown pair '" + label + "' (expected ac, bc or ab)");
}

std::vector<std::string> preset_names() {
  std::vector<std::string> out;
  for (const auto& p : kPresets) out.emplace_back(p.name);
  return out;
}

ScenarioConfig preset(const std::string& name) {
  for (const auto& p : kPresets) {
    if (name == p.name) {
      ScenarioConfig c = base_preset();
      p.tweak(c);
      c.name = p.name;
      c.description = p.description;
      return c;
    }
  }
  config_error("preset", "unknown preset '" + name + "'");
}

std::string list_presets() {
  std::ostringstream out;
  for (const auto& p : kPresets) {
    const ScenarioConfig c = preset(p.name);
    out << c.name << ": " << c.description << "\n    " << summary(c) << "\n";
  }
  return out.str();
}

void apply_setting(ScenarioConfig& c, const std::string& raw_key, const std::string& raw_value) {
  const std::string key = trim(raw_key);
  const std::string value = trim(raw_value);
  if (key == "chain.N") c.chain.N = parse_int(key, value);
  else if (key == "chain.omega") c.chain.omega = parse_double(key, value);
  else if (key == "chain.kappa") c.chain.kappa = parse_double(key, value);
  else if (key == "chain.alpha") c.chain.alpha = parse_int(key, value);
  else if (key == "chain.beta") c.chain.beta = parse_int(key, value);
  else if (key == "chain.epsilon") c.chain.epsilon = parse_double(key, value);
  else if (key == "chain.m") c.chain.m = parse_int(key, value);
  else if (key == "bath.zeta") c.bath.zeta = parse_double(key, value);
  else if (key == "bath.n_th") c.bath.n_th = parse_double(key, value);
  else if (key == "initial.r") c.initial.r = parse_double(key, value);
  else if (key == "initial.n" || key == "initial.n_c") c.initial.occupation = parse_double(key, value);
  else if (key == "initial.variant") {
    if (value == "pure_env") c.initial.kind = InitialStateSpec::Kind::PureEnv;
    else if (value == "thermal_env") c.initial.kind = InitialStateSpec::Kind::ThermalEnv;
    else config_error(key, "expected pure_env or thermal_env, got '" + value + "'");
  } else if (key == "model") {
    if (value == "exact") c.model = ModelChoice::Exact;
    else if (value == "effective") c.model = ModelChoice::Effective;
    else if (value == "both") c.model = ModelChoice::Both;
    else config_error(key, "expected exact, effective or both, got '" + value + "'");
  } else if (key == "pairs") {
    std::vector<PairSpec> pairs;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) pairs.push_back(pair_from_label(trim(item)));
    if (pairs.empty()) config_error(key, "at least one pair is required");
    c.pairs = pairs;
  } else if (key == "time.t_max") c.t_max = parse_double(key, value);
  else if (key == "time.n_points") c.n_points = parse_int(key, value);
  else if (key == "bell.theta_max") c.bell.theta_max = parse_double(key, value);
  else if (key == "bell.grid_points") c.bell.grid_points = parse_int(key, value);
  else if (key == "exact.method") {
    if (value == "rk4") c.exact_method = ExactMethod::RK4;
    else if (value == "vanloan") c.exact_method = ExactMethod::VanLoan;
    else config_error(key, "expected rk4 or vanloan, got '" + value + "'");
  } else if (key == "exact.step") c.exact_step = parse_double(key, value);
  else if (key == "exact.probe_span") c.exact_probe_span = parse_double(key, value);
  else if (key == "output.dir") c.output_dir = value;
  else config_error(key, "unknown key");
}

void apply_assignment(ScenarioConfig& config, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) config_error(assignment, "expected key=value");
  apply_setting(config, assignment.substr(0, eq), assignment.substr(eq + 1));
}

void apply_config_text(ScenarioConfig& config, const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      config_error("line " + std::to_string(line_no), "expected 'key = value'");
    }
    apply_setting(config, line.substr(0, eq), line.substr(eq + 1));
  }
}

void apply_config_file(ScenarioConfig& config, const std::string& path) {
  std::ifstream in(path);
  if (!in) config_error("config", "cannot read '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  apply_config_text(config, buffer.str());
}

void validate(const ScenarioConfig& c) {
  if (!(c.t_max > 0.0)) config_error("time.t_max", "must be > 0");
  if (c.n_points < 2) config_error("time.n_points", "must be >= 2");
  if (c.pairs.empty()) config_error("pairs", "at least one pair is required");
  if (c.bell.grid_points < 2) config_error("bell.grid_points", "must be >= 2");
  if (!(c.bell.theta_max > 0.0)) config_error("bell.theta_max", "must be > 0");
  if (c.initial.r < 0.0) config_error("initial.r", "must be >= 0");
  if (c.initial.occupation < 0.0) config_error("initial.n", "must be >= 0");
  if (c.chain.N < 2) config_error("chain.N", "must be >= 2");
  if (!(c.chain.omega > 0.0)) config_error("chain.omega", "must be > 0");
  if (c.chain.kappa < 0.0) config_error("chain.kappa", "must be >= 0");
  if (c.chain.epsilon <= 0.0) config_error("chain.epsilon", "must be > 0");
  if (c.chain.alpha < 1 || c.chain.alpha > c.chain.N) config_error("chain.alpha", "must lie in 1..N");
  if (c.chain.beta < 1 || c.chain.beta > c.chain.N) config_error("chain.beta", "must lie in 1..N");
  if (c.chain.alpha == c.chain.beta) config_error("chain.beta", "must differ from chain.alpha");
  if (c.chain.m < 1 || c.chain.m > c.chain.N) config_error("chain.m", "must lie in 1..N");
  if (c.bath.zeta < 0.0) config_error("bath.zeta", "must be >= 0");
  if (c.bath.n_th < 0.0) config_error("bath.n_th", "must be >= 0");
  if (!(c.exact_step >= 0.0)) config_error("exact.step", "must be >= 0 (0 selects the default)");
  if (!(c.exact_probe_span > 0.0)) config_error("exact.probe_span", "must be > 0");
}

std::vector<double> omega_time_grid(const ScenarioConfig& c) {
  std::vector<double> grid(c.n_points);
  for (int i = 0; i < c.n_points; ++i) grid[i] = c.t_max * i / (c.n_points - 1);
  grid.back() = c.t_max;
  return grid;
}

std::string format_number(double value) {
  char buf[64];
  if (value == 0.0) value = 0.0;  // no "-0" in the output
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
  return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

std::string format_csv(const std::vector<CorrelationRecord>& records) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const auto& r : records) {
    for (double x : {r.t, r.E, r.S_fwd, r.S_rev, r.D_fwd, r.D_rev, r.M, r.B}) {
      out += format_number(x);
      out += ',';
    }
    out += format_number(r.theta_star);
    out += '\n';
  }
  return out;
}

std::string csv_filename(const ScenarioConfig& config, const std::string& model,
                         const std::string& pair) {
  return (config.name.empty() ? std::string("custom") : config.name) + "_" + model + "_" + pair +
         ".csv";
}

ScenarioResult run_scenario(const ScenarioConfig& config, bool write_files) {
  validate(config);
  const std::vector<double> omega_t = omega_time_grid(config);
  std::vector<double> t(omega_t.size());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = omega_t[i] / config.chain.omega;

  ScenarioResult result;
  const bool exact = config.model != ModelChoice::Effective;
  const bool effective = config.model != ModelChoice::Exact;

  if (effective) {
    const EffectiveParams params = build_effective_params(config.chain, config.bath);
    const CovarianceMatrix V0 = initial_cm(config.initial);
    std::vector<CovarianceMatrix> states;
    states.reserve(t.size());
    for (double when : t) states.push_back(propagate_effective(params, config.bath, V0, when));
    for (const auto& pair : config.pairs) {
      Series s{"effective", pair, {}};
      s.records.reserve(t.size());
      for (std::size_t i = 0; i < t.size(); ++i) {
        s.records.push_back(correlation_record(states[i], pair.u, pair.v, omega_t[i], config.bell));
      }
      result.series.push_back(std::move(s));
    }
  }

  if (exact) {
    const FullModel model = build_full_model(config.chain, config.bath);
    const CovarianceMatrix V0 = initial_full_cm(config.initial, config.chain);
    ExactOptions options;
    options.method = config.exact_method;
    options.step = config.exact_step;
    options.probe_span = config.exact_probe_span;
    std::vector<CovarianceMatrix> states = propagate_exact(model, V0, t, options);
    const double varsigma = eigenfrequencies(config.chain)[config.chain.m - 1];
    for (std::size_t i = 0; i < t.size(); ++i) states[i] = to_rotating_frame(states[i], varsigma, t[i]);
    for (const auto& pair : config.pairs) {
      Series s{"exact", pair, {}};
      s.records.reserve(t.size());
      for (std::size_t i = 0; i < t.size(); ++i) {
        s.records.push_back(correlation_record(states[i], pair.u, pair.v, omega_t[i], config.bell));
      }
      result.series.push_back(std::move(s));
    }
  }

  if (write_files) {
    std::filesystem::create_directories(config.output_dir);
    for (const auto& s : result.series) {
      const auto path =
          std::filesystem::path(config.output_dir) / csv_filename(config, s.model, s.pair.label);
      std::ofstream out(path, std::ios::binary);
      if (!out) config_error("output.dir", "cannot write '" + path.string() + "'");
      out << format_csv(s.records);
      result.files.push_back(path.string());
    }
  }
  return result;
}

std::string run_analysis(const ScenarioConfig& config) {
  validate(config);
  const EffectiveParams params = build_effective_params(config.chain, config.bath);
  const double t_max = config.t_max / config.chain.omega;
  std::ostringstream out;
  const auto list = [](const std::vector<double>& xs) {
    std::string s;
    for (double x : xs) s += (s.empty() ? "" : " ") + format_number(x);
    return s;
  };
  const auto intervals = [](const std::vector<Interval>& xs) {
    std::string s;
    for (const auto& i : xs) {
      s += (s.empty() ? "" : " ") + std::string("[") + format_number(i.t_on) + ", " +
           format_number(i.t_off) + "]";
    }
    return s.empty() ? std::string("none") : s;
  };

  out << "preset = " << (config.name.empty() ? "custom" : config.name) << "\n";
  out << "model = " << model_name(config.model) << "\n";
  out << "pairs = " << pairs_text(config.pairs) << "\n";
  out << "varsigma_m = " << format_number(params.varsigma_m) << "\n";
  out << "O_m_alpha = " << format_number(params.O_ma) << "\n";
  out << "O_m_beta = " << format_number(params.O_mb) << "\n";
  out << "chi = " << format_number(params.chi) << "\n";
  out << "weak_coupling = " << (outside_weak_coupling(config.chain) ? "violated" : "ok") << "\n";

  const CriticalTimes cpt = solve_cpt(params, 0.0, t_max);
  const CriticalTimes cpt2 = solve_cpt2(params, 0.0, t_max);
  out << "critical_times_ac = " << list(cpt.omega_t) << "\n";
  out << "critical_times_bc = " << list(cpt2.omega_t) << "\n";
  const double t_star = transfer_time(params, 0.0, t_max);
  out << "transfer_time = " << format_number(t_star) << "\n";

  const double r = config.initial.r;
  const double n = config.initial.occupation;
  if (config.initial.kind == InitialStateSpec::Kind::PureEnv) {
    const InitialCorrelations initial = initial_correlations(config.initial);
    out << "E_bc_initial = " << format_number(initial.E) << "\n";
    out << "E_ac_at_transfer = "
        << format_number(entanglement_at_critical(params, r, n, t_star).value) << "\n";
    out << "direct_steering_ac_nonzero = "
        << intervals(direct_steering_window(params, r, n, 0.0, config.t_max)) << "\n";
    out << "direct_steering_bc_null = " << intervals(bc_steering_window(params, r, n, 0.0, config.t_max))
        << "\n";
    out << "threshold.direct_steering_rc = "
        << format_number(threshold(ThresholdKind::DirectSteering, n)) << "\n";
  } else {
    const InitialCorrelations initial = initial_correlations(config.initial);
    out << "E_bc_initial = " << format_number(initial.E) << "\n";
    out << "threshold.separability = " << format_number(threshold(ThresholdKind::Separability, n))
        << "\n";
    out << "threshold.steerability = " << format_number(threshold(ThresholdKind::Steerability, n))
        << "\n";
  }
  return out.str();
}

}  // namespace qbus
