#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qbus/analysis.hpp"
#include "qbus/chain.hpp"
#include "qbus/correlations.hpp"
#include "qbus/error.hpp"
#include "qbus/initial_states.hpp"
#include "qbus/propagation.hpp"
#include "qbus/scenario.hpp"

namespace py = pybind11;
using namespace qbus;

namespace {

TwoModeCM two_mode(const Matrix4& V) { return TwoModeCM(V); }

Direction direction(bool forward) { return forward ? Direction::Forward : Direction::Reverse; }

py::list intervals(const std::vector<Interval>& xs) {
  py::list out;
  for (const auto& i : xs) out.append(py::make_tuple(i.t_on, i.t_off));
  return out;
}

ScenarioConfig configure(const std::string& preset_name, const py::dict& settings) {
  ScenarioConfig config = preset(preset_name);
  for (const auto& [key, value] : settings) {
    apply_setting(config, py::str(key), py::str(value));
  }
  validate(config);
  return config;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Gaussian correlation transfer through a harmonic chain";

  // Messages start with the error code, e.g. "ConfigError: time.t_max: must be > 0".
  py::register_exception<Error>(m, "QbusError", PyExc_ValueError);

  py::class_<ChainSpec>(m, "ChainSpec")
      .def(py::init<>())
      .def_readwrite("N", &ChainSpec::N)
      .def_readwrite("omega", &ChainSpec::omega)
      .def_readwrite("kappa", &ChainSpec::kappa)
      .def_readwrite("alpha", &ChainSpec::alpha)
      .def_readwrite("beta", &ChainSpec::beta)
      .def_readwrite("epsilon", &ChainSpec::epsilon)
      .def_readwrite("m", &ChainSpec::m);

  py::class_<BathSpec>(m, "BathSpec")
      .def(py::init<>())
      .def(py::init<double, double>(), py::arg("zeta"), py::arg("n_th"))
      .def_readwrite("zeta", &BathSpec::zeta)
      .def_readwrite("n_th", &BathSpec::n_th);

  py::class_<EffectiveParams>(m, "EffectiveParams")
      .def_readonly("omega", &EffectiveParams::omega)
      .def_readonly("epsilon", &EffectiveParams::epsilon)
      .def_readonly("varsigma_m", &EffectiveParams::varsigma_m)
      .def_readonly("O_ma", &EffectiveParams::O_ma)
      .def_readonly("O_mb", &EffectiveParams::O_mb)
      .def_readonly("chi", &EffectiveParams::chi);

  m.def("eigenfrequencies", &eigenfrequencies, py::arg("chain"));
  m.def("build_effective_params", &build_effective_params, py::arg("chain"),
        py::arg("bath") = BathSpec{});

  m.def(
      "tmtss_cm", [](double r, double n_c) { return tmtss_cm(r, n_c).data(); }, py::arg("r"),
      py::arg("n_c") = 0.0, "8x8 QQPP matrix of (a, b, c, mode m), vacuum = identity / 2.");
  m.def(
      "thermal_tmtss_cm", [](double r, double n) { return thermal_tmtss_cm(r, n).data(); },
      py::arg("r"), py::arg("n"));
  m.def(
      "extract_two_mode",
      [](const Matrix& V, int u, int v) {
        return extract_two_mode(CovarianceMatrix(V, Ordering::QQPP), u, v).data();
      },
      py::arg("V"), py::arg("u"), py::arg("v"),
      "Dimensionless QPQP block of modes (u, v) from a QQPP matrix.");
  m.def(
      "symplectic_eigenvalues",
      [](const Matrix4& V, bool transposed) {
        const SymplecticSpectrum s = symplectic_eigenvalues(two_mode(V), transposed);
        return py::make_tuple(s.minus, s.plus);
      },
      py::arg("V"), py::arg("transposed") = false);

  m.def("log_negativity", [](const Matrix4& V) { return log_negativity(two_mode(V)); });
  m.def(
      "steering", [](const Matrix4& V, bool forward) { return steering(two_mode(V), direction(forward)); },
      py::arg("V"), py::arg("forward") = true);
  m.def(
      "gaussian_discord",
      [](const Matrix4& V, bool forward) { return gaussian_discord(two_mode(V), direction(forward)); },
      py::arg("V"), py::arg("forward") = true);
  m.def("mutual_information", [](const Matrix4& V) { return mutual_information(two_mode(V)); });
  m.def(
      "bell_max",
      [](const Matrix4& V, double theta_max, int grid_points) {
        const BellResult b = bell_max(two_mode(V), {theta_max, grid_points, 1e-10});
        return py::make_tuple(b.value, b.theta_star);
      },
      py::arg("V"), py::arg("theta_max") = 5.0, py::arg("grid_points") = 2001);

  m.def(
      "propagate_effective",
      [](const EffectiveParams& p, const BathSpec& bath, const Matrix& V0, double t) {
        return propagate_effective(p, bath, CovarianceMatrix(V0, Ordering::QQPP), t).data();
      },
      py::arg("params"), py::arg("bath"), py::arg("V0"), py::arg("t"));

  m.def(
      "critical_times",
      [](const EffectiveParams& p, double t_min, double t_max) { return solve_cpt(p, t_min, t_max).omega_t; },
      py::arg("params"), py::arg("t_min"), py::arg("t_max"));
  m.def(
      "critical_times_bc",
      [](const EffectiveParams& p, double t_min, double t_max) { return solve_cpt2(p, t_min, t_max).omega_t; },
      py::arg("params"), py::arg("t_min"), py::arg("t_max"));
  m.def("transfer_time", &transfer_time, py::arg("params"), py::arg("t_min"), py::arg("t_max"));
  m.def(
      "direct_steering_window",
      [](const EffectiveParams& p, double r, double n_c, double t_min, double t_max) {
        return intervals(direct_steering_window(p, r, n_c, t_min, t_max));
      },
      py::arg("params"), py::arg("r"), py::arg("n_c"), py::arg("t_min"), py::arg("t_max"));
  m.def(
      "bc_steering_window",
      [](const EffectiveParams& p, double r, double n_c, double t_min, double t_max) {
        return intervals(bc_steering_window(p, r, n_c, t_min, t_max));
      },
      py::arg("params"), py::arg("r"), py::arg("n_c"), py::arg("t_min"), py::arg("t_max"));
  m.def(
      "threshold",
      [](const std::string& kind, double n) {
        if (kind == "direct_steering") return threshold(ThresholdKind::DirectSteering, n);
        if (kind == "separability") return threshold(ThresholdKind::Separability, n);
        if (kind == "steerability") return threshold(ThresholdKind::Steerability, n);
        throw Error(ErrorCode::ConfigError, "unknown threshold '" + kind + "'");
      },
      py::arg("kind"), py::arg("n"));

  m.def("preset_names", &preset_names);
  m.def(
      "run_scenario",
      [](const std::string& name, const py::dict& settings, bool write_files) {
        const ScenarioConfig config = configure(name, settings);
        ScenarioResult result;
        {
          py::gil_scoped_release release;
          result = run_scenario(config, write_files);
        }
        py::dict out;
        for (const auto& s : result.series) {
          Matrix table(static_cast<Eigen::Index>(s.records.size()), 9);
          for (std::size_t i = 0; i < s.records.size(); ++i) {
            const auto& r = s.records[i];
            table.row(static_cast<Eigen::Index>(i)) << r.t, r.E, r.S_fwd, r.S_rev, r.D_fwd,
                r.D_rev, r.M, r.B, r.theta_star;
          }
          out[py::make_tuple(s.model, s.pair.label)] = table;
        }
        return out;
      },
      py::arg("preset"), py::arg("settings") = py::dict(), py::arg("write_files") = false,
      "Returns {(model, pair): array} with the CSV columns.");
  m.def(
      "run_analysis",
      [](const std::string& name, const py::dict& settings) {
        return run_analysis(configure(name, settings));
      },
      py::arg("preset"), py::arg("settings") = py::dict());
  m.attr("CSV_HEADER") = kCsvHeader;
}
