#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "qbus/error.hpp"
#include "qbus/scenario.hpp"

using namespace qbus;

namespace {

ScenarioConfig small_run(const std::string& name) {
  ScenarioConfig c = preset(name);
  c.t_max = 60.0;
  c.n_points = 7;
  c.bell.grid_points = 201;
  c.exact_probe_span = 10.0;
  return c;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::ConfigError;
}

std::string message_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_SUITE("scenario") {
  TEST_CASE("every preset is valid and listed") {
    const auto names = preset_names();
    CHECK(names.size() == 13);
    const std::string listing = list_presets();
    for (const auto& name : names) {
      const ScenarioConfig c = preset(name);
      CHECK(c.name == name);
      CHECK_NOTHROW(validate(c));
      CHECK(listing.find(name + ":") != std::string::npos);
    }
    CHECK(code_of([] { preset("fig99"); }) == ErrorCode::ConfigError);
  }

  TEST_CASE("preset parameters") {
    const ScenarioConfig base = preset("fig2");
    CHECK(base.chain.N == 10);
    CHECK(base.chain.kappa == 20.0);
    CHECK(base.chain.epsilon == 0.03);
    CHECK(base.initial.r == 1.0);
    CHECK(base.initial.occupation == 0.0);
    CHECK(base.bath.zeta == 0.0);
    CHECK(base.t_max == 4200.0);

    CHECK(preset("fig5").initial.occupation == 10.0);
    CHECK(preset("fig13_right").initial.occupation == 10.0);

    const ScenarioConfig open = preset("fig7");
    CHECK(open.bath.zeta == 1e-4);
    CHECK(open.bath.n_th == 0.1);
    CHECK(open.t_max == doctest::Approx(1e5));

    const ScenarioConfig thermal = preset("fig11");
    CHECK(thermal.initial.kind == InitialStateSpec::Kind::ThermalEnv);
    CHECK(thermal.initial.occupation == 10.0);
    CHECK(preset("fig12").initial.r == 0.5);
  }

  TEST_CASE("settings") {
    ScenarioConfig c = preset("fig2");
    apply_setting(c, "chain.N", "6");
    apply_setting(c, "chain.alpha", "1");
    apply_setting(c, "chain.beta", "6");
    apply_setting(c, "bath.zeta", "2e-3");
    apply_setting(c, "initial.n_c", "3.5");
    apply_setting(c, "pairs", "ac,ab");
    apply_setting(c, "model", "effective");
    apply_setting(c, "exact.method", "vanloan");
    apply_assignment(c, "time.n_points=11");
    apply_setting(c, "exact.step", "1e-4");
    apply_setting(c, "exact.probe_span", "50");
    CHECK(c.chain.N == 6);
    CHECK(c.chain.beta == 6);
    CHECK(c.bath.zeta == 2e-3);
    CHECK(c.initial.occupation == 3.5);
    REQUIRE(c.pairs.size() == 2);
    CHECK(c.pairs[1].label == "ab");
    CHECK(c.model == ModelChoice::Effective);
    CHECK(c.exact_method == ExactMethod::VanLoan);
    CHECK(c.n_points == 11);
    CHECK(c.exact_step == 1e-4);
    CHECK(c.exact_probe_span == 50.0);
    CHECK_NOTHROW(validate(c));
  }

  TEST_CASE("bad settings name the key") {
    ScenarioConfig c = preset("fig2");
    CHECK(message_of([&] { apply_setting(c, "time.t_max", "soon"); }).find("ConfigError: time.t_max") == 0);
    CHECK(message_of([&] { apply_setting(c, "chain.N", "2.5"); }).find("ConfigError: chain.N") == 0);
    CHECK(message_of([&] { apply_setting(c, "chain.colour", "1"); }).find("ConfigError: chain.colour") == 0);
    CHECK(code_of([&] { apply_setting(c, "pairs", "ad"); }) == ErrorCode::ConfigError);
    CHECK(code_of([&] { apply_assignment(c, "chain.N"); }) == ErrorCode::ConfigError);

    c.t_max = -1.0;
    CHECK(message_of([&] { validate(c); }).find("ConfigError: time.t_max") == 0);
    c = preset("fig2");
    c.chain.beta = c.chain.alpha;
    CHECK(message_of([&] { validate(c); }).find("ConfigError: chain.beta") == 0);
    c = preset("fig2");
    c.exact_probe_span = 0.0;
    CHECK(message_of([&] { validate(c); }).find("ConfigError: exact.probe_span") == 0);
    c = preset("fig2");
    c.n_points = 1;
    CHECK(code_of([&] { run_scenario(c, false); }) == ErrorCode::ConfigError);
  }

  TEST_CASE("config text") {
    ScenarioConfig c = preset("fig2");
    apply_config_text(c,
                      "# a comment\n"
                      "\n"
                      "initial.r = 0.75   # trailing comment\n"
                      "  time.t_max=100\n");
    CHECK(c.initial.r == 0.75);
    CHECK(c.t_max == 100.0);
    CHECK(message_of([&] { apply_config_text(c, "initial.r = 1\nnonsense\n"); }).find("ConfigError: line 2") == 0);
    CHECK(code_of([&] { apply_config_file(c, "/nonexistent/qbus.cfg"); }) == ErrorCode::ConfigError);
  }

  TEST_CASE("time grid") {
    ScenarioConfig c = preset("fig2");
    const auto grid = omega_time_grid(c);
    CHECK(grid.size() == 2101);
    CHECK(grid.front() == 0.0);
    CHECK(grid[1] == doctest::Approx(2.0));
    CHECK(grid.back() == 4200.0);
  }

  TEST_CASE("number formatting") {
    CHECK(format_number(0.0) == "0");
    CHECK(format_number(-0.0) == "0");
    CHECK(format_number(1.5) == "1.5");
    CHECK(std::stod(format_number(0.1)) == 0.1);
    CHECK(std::stod(format_number(2094.3951023931954)) == 2094.3951023931954);
  }

  TEST_CASE("csv layout") {
    const ScenarioResult result = run_scenario(small_run("fig2"), false);
    REQUIRE(result.series.size() == 4);
    CHECK(result.files.empty());
    const std::string csv = format_csv(result.series.front().records);
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    CHECK(line == kCsvHeader);
    int rows = 0;
    while (std::getline(in, line)) {
      ++rows;
      CHECK(std::count(line.begin(), line.end(), ',') == 8);
    }
    CHECK(rows == 7);
  }

  TEST_CASE("series order and file names") {
    ScenarioConfig c = small_run("fig5");
    CHECK(csv_filename(c, "exact", "ac") == "fig5_exact_ac.csv");
    c.name.clear();
    CHECK(csv_filename(c, "effective", "bc") == "custom_effective_bc.csv");

    const ScenarioResult result = run_scenario(small_run("fig5"), false);
    REQUIRE(result.series.size() == 4);
    CHECK(result.series[0].model == "effective");
    CHECK(result.series[0].pair.label == "bc");
    CHECK(result.series[1].pair.label == "ac");
    CHECK(result.series[2].model == "exact");
    for (const auto& s : result.series) {
      CHECK(s.records.front().t == 0.0);
      CHECK(s.records.back().t == 60.0);
    }
    // Both models start from the same pair state.
    CHECK(result.series[0].records[0].E == doctest::Approx(result.series[2].records[0].E));
  }

  TEST_CASE("output files are deterministic") {
    const auto dir = std::filesystem::temp_directory_path() / "qbus_scenario_test";
    std::filesystem::remove_all(dir);
    ScenarioConfig c = small_run("fig13_right");
    c.output_dir = (dir / "one").string();
    const ScenarioResult first = run_scenario(c);
    c.output_dir = (dir / "two").string();
    const ScenarioResult second = run_scenario(c);
    REQUIRE(first.files.size() == 4);
    REQUIRE(second.files.size() == 4);
    for (std::size_t i = 0; i < first.files.size(); ++i) {
      CHECK(std::filesystem::path(first.files[i]).filename() ==
            std::filesystem::path(second.files[i]).filename());
      CHECK(slurp(first.files[i]) == slurp(second.files[i]));
      CHECK(slurp(first.files[i]) == format_csv(first.series[i].records));
    }
    std::filesystem::remove_all(dir);
  }

  TEST_CASE("single model runs") {
    ScenarioConfig c = small_run("fig9");
    c.model = ModelChoice::Effective;
    c.pairs = {pair_from_label("ab")};
    const ScenarioResult result = run_scenario(c, false);
    REQUIRE(result.series.size() == 1);
    CHECK(result.series[0].records[0].E == 0.0);
    CHECK(result.series[0].records[0].M == 0.0);
  }

  TEST_CASE("analysis report") {
    const std::string pure = run_analysis(preset("fig3"));
    for (const char* key :
         {"chi = ", "critical_times_ac = 0 ", "transfer_time = 2094.", "E_ac_at_transfer = ",
          "direct_steering_ac_nonzero = [1143.", "direct_steering_bc_null = [951.",
          "threshold.direct_steering_rc = 0\n", "weak_coupling = ok"}) {
      CHECK_MESSAGE(pure.find(key) != std::string::npos, key);
    }
    const std::string thermal = run_analysis(preset("fig11"));
    CHECK(thermal.find("threshold.separability = ") != std::string::npos);
    CHECK(thermal.find("direct_steering") == std::string::npos);
  }
}
