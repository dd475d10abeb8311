#include "memfuzz/cli/commands.hpp"
#include "memfuzz/cli/config.hpp"
#include "memfuzz/device.hpp"
#include "memfuzz/errors.hpp"
#include "memfuzz/sim.hpp"
#include "memfuzz/window.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace memfuzz;

namespace {

// Opaque record list; columns are copied out on demand.
struct Trace {
    std::vector<SimRecord> records;
};

py::array_t<double> column(const Trace& t, double SimRecord::*field) {
    py::array_t<double> out(static_cast<py::ssize_t>(t.records.size()));
    auto view = out.mutable_unchecked<1>();
    for (std::size_t n = 0; n < t.records.size(); ++n) {
        view(static_cast<py::ssize_t>(n)) = t.records[n].*field;
    }
    return out;
}

const std::pair<const char*, double SimRecord::*> kColumns[] = {
    {"t", &SimRecord::t},       {"v_src", &SimRecord::v_src}, {"i", &SimRecord::i},
    {"v_mem", &SimRecord::v_mem}, {"x", &SimRecord::x},         {"r", &SimRecord::r},
    {"f", &SimRecord::f},
};

cli::json parse_text(const std::string& text) { return cli::parse_json_text(text, "<python>"); }

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Memristor simulation with closed-form and fuzzy window functions";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    // --- fuzzy ---------------------------------------------------------------
    py::class_<fuzzy::FuzzySystem>(m, "FuzzySystem")
        .def_static(
            "from_json",
            [](const std::string& text) { return cli::parse_fuzzy_system(parse_text(text), "system"); },
            py::arg("text"))
        .def("to_json", [](const fuzzy::FuzzySystem& s) { return cli::fuzzy_system_to_json(s).dump(2); })
        .def_property_readonly("resolution", &fuzzy::FuzzySystem::resolution)
        .def("with_resolution", &fuzzy::FuzzySystem::with_resolution, py::arg("resolution"))
        .def(
            "evaluate",
            [](const fuzzy::FuzzySystem& s, const std::vector<double>& inputs) {
                return s.evaluate(std::span<const double>(inputs));
            },
            py::arg("inputs"))
        .def(
            "evaluate_named",
            [](const fuzzy::FuzzySystem& s, const std::map<std::string, double>& inputs) {
                return s.evaluate(inputs);
            },
            py::arg("inputs"))
        .def(
            "infer",
            [](const fuzzy::FuzzySystem& s, const std::vector<double>& inputs) {
                const auto r = s.infer(std::span<const double>(inputs));
                return py::make_tuple(r.value, r.fallback);
            },
            py::arg("inputs"), "Returns (value, fallback).");

    m.def("default_fuzzy_system", &default_fuzzy_system);
    m.def("default_threshold_system", &default_threshold_system);

    // --- windows -------------------------------------------------------------
    py::class_<WindowSpec>(m, "Window")
        .def_static("none", &WindowSpec::none)
        .def_static("strukov", &WindowSpec::strukov)
        .def_static("joglekar", &WindowSpec::joglekar, py::arg("p"))
        .def_static("biolek", &WindowSpec::biolek, py::arg("p"))
        .def_static("prodromakis", &WindowSpec::prodromakis, py::arg("p"), py::arg("j") = 1.0)
        .def_static("fuzzy", &WindowSpec::fuzzy, py::arg("system") = default_fuzzy_system(),
                    py::arg("gain") = 1.0)
        .def_static("fuzzy_threshold", &WindowSpec::fuzzy_threshold,
                    py::arg("system") = default_threshold_system(), py::arg("gain") = 1.0)
        .def_static(
            "from_json",
            [](const std::string& text) { return cli::parse_window(parse_text(text), "window", {}); },
            py::arg("text"))
        .def("to_json", [](const WindowSpec& w) { return cli::window_to_json(w).dump(); })
        .def_property_readonly("name", &WindowSpec::name)
        .def("__call__", &WindowSpec::operator(), py::arg("x"), py::arg("i") = 0.0, py::arg("v") = 0.0)
        .def("__repr__", [](const WindowSpec& w) { return "Window(" + cli::window_to_json(w).dump() + ")"; });

    m.def(
        "window_surface",
        [](const WindowSpec& w, std::size_t n1, std::size_t n2) {
            const auto rows = cli::window_surface(w, n1, n2);
            py::array_t<double> out({static_cast<py::ssize_t>(rows.size()), py::ssize_t{3}});
            auto view = out.mutable_unchecked<2>();
            for (std::size_t r = 0; r < rows.size(); ++r) {
                for (py::ssize_t c = 0; c < 3; ++c) view(static_cast<py::ssize_t>(r), c) = rows[r][c];
            }
            return out;
        },
        py::arg("window"), py::arg("n1") = 41, py::arg("n2") = 41,
        "Rows of (u1, x, f) as an (N, 3) array.");

    // --- device --------------------------------------------------------------
    py::class_<DeviceParams>(m, "DeviceParams")
        .def(py::init([](double r_on, double r_off, double k, double x_init) {
                 return DeviceParams{r_on, r_off, k, x_init};
             }),
             py::arg("r_on") = 100.0, py::arg("r_off") = 16000.0, py::arg("k") = 1e4,
             py::arg("x_init") = 0.0)
        .def_readwrite("r_on", &DeviceParams::r_on)
        .def_readwrite("r_off", &DeviceParams::r_off)
        .def_readwrite("k", &DeviceParams::k)
        .def_readwrite("x_init", &DeviceParams::x_init)
        .def("validate", &DeviceParams::validate);

    m.def("memristance", &memristance, py::arg("params"), py::arg("x"));
    m.def("x_from_resistance", &x_from_resistance, py::arg("params"), py::arg("r"));
    m.def("state_derivative", &state_derivative, py::arg("params"), py::arg("x"), py::arg("i"),
          py::arg("v"), py::arg("window"));
    m.def(
        "step",
        [](const DeviceParams& p, double x, double i, double v, const WindowSpec& w, double dt) {
            return step(p, DeviceState{x}, i, v, w, dt).x;
        },
        py::arg("params"), py::arg("x"), py::arg("i"), py::arg("v"), py::arg("window"), py::arg("dt"),
        "One clamped forward-Euler step; returns the new state.");

    // --- simulation ----------------------------------------------------------
    py::class_<CircuitConfig>(m, "CircuitConfig")
        .def(py::init<>())
        .def_static(
            "from_json",
            [](const std::string& text) { return cli::parse_run_config(parse_text(text)).circuit; },
            py::arg("text"), "Circuit of a full run-config document.")
        .def_static(
            "preset", [](const std::string& name) { return cli::parse_run_config(cli::preset_document(name)).circuit; },
            py::arg("name"))
        .def_readwrite("series_resistance", &CircuitConfig::series_resistance)
        .def_readwrite("device", &CircuitConfig::device)
        .def_readwrite("window", &CircuitConfig::window)
        .def_readwrite("dt", &CircuitConfig::dt)
        .def_readwrite("duration", &CircuitConfig::duration)
        .def(
            "set_sine",
            [](CircuitConfig& c, double amplitude, double frequency, double phase, double offset) {
                c.source = waveform::Sine{amplitude, frequency, phase, offset};
            },
            py::arg("amplitude"), py::arg("frequency") = 1.0, py::arg("phase") = 0.0,
            py::arg("offset") = 0.0)
        .def(
            "set_constant", [](CircuitConfig& c, double level) { c.source = waveform::Constant{level}; },
            py::arg("level"))
        .def(
            "set_piecewise",
            [](CircuitConfig& c, std::vector<std::pair<double, double>> points) {
                c.source = waveform::Piecewise{std::move(points)};
            },
            py::arg("points"))
        .def("source_at", [](const CircuitConfig& c, double t) { return waveform_eval(c.source, t); },
             py::arg("t"))
        .def("steps", &CircuitConfig::steps)
        .def("validate", &CircuitConfig::validate)
        .def("with_sweep_value", &cli::apply_sweep_value, py::arg("axis"), py::arg("value"));

    py::class_<RunSummary>(m, "RunSummary")
        .def_readonly("x_min", &RunSummary::x_min)
        .def_readonly("x_max", &RunSummary::x_max)
        .def_readonly("x_final", &RunSummary::x_final)
        .def_readonly("r_first", &RunSummary::r_first)
        .def_readonly("r_at_zero_crossings", &RunSummary::r_at_zero_crossings)
        .def_readonly("max_abs_dR", &RunSummary::max_abs_dR)
        .def_readonly("saturated", &RunSummary::saturated)
        .def("__repr__", [](const RunSummary& s) { return "RunSummary(" + cli::summary_line(s) + ")"; });

    py::class_<Trace>(m, "Trace")
        .def("__len__", [](const Trace& t) { return t.records.size(); })
        .def(
            "__getitem__",
            [](const Trace& t, const std::string& name) {
                for (const auto& [key, field] : kColumns) {
                    if (name == key) return column(t, field);
                }
                throw py::key_error(name);
            },
            py::arg("column"))
        .def("columns", [](const Trace& t) {
            py::dict d;
            for (const auto& [key, field] : kColumns) d[key] = column(t, field);
            return d;
        })
        .def("summary", [](const Trace& t) { return summarize(t.records); })
        .def(
            "pinch_check",
            [](const Trace& t, double v_eps, double r_on) { return pinch_check(t.records, v_eps, r_on); },
            py::arg("v_eps") = 1e-6, py::arg("r_on") = 100.0)
        .def("lobe_areas",
             [](const Trace& t) {
                 const auto a = hysteresis_lobe_area(t.records);
                 return py::make_tuple(a.positive, a.negative);
             })
        .def("to_csv", [](const Trace& t) {
            std::ostringstream os;
            cli::write_records_csv(os, t.records);
            return os.str();
        });

    m.def(
        "simulate",
        [](const CircuitConfig& c) {
            std::vector<SimRecord> recs;
            {
                py::gil_scoped_release release;
                recs = simulate(c);
            }
            return Trace{std::move(recs)};
        },
        py::arg("config"));

    m.def(
        "sweep",
        [](const CircuitConfig& base, const std::string& axis, std::vector<double> values) {
            py::gil_scoped_release release;
            return cli::run_sweep(base, cli::SweepSpec{axis, std::move(values)});
        },
        py::arg("config"), py::arg("axis"), py::arg("values"));

    // --- cli -----------------------------------------------------------------
    m.def("preset_names", &cli::preset_names);
    m.def(
        "preset_json", [](const std::string& name) { return cli::preset_document(name).dump(2); },
        py::arg("name"));
    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            const int code = cli::run(args, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Runs the memfuzz command line; returns (exit_code, stdout, stderr).");
}
