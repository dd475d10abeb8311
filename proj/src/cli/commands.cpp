#include "memfuzz/cli/commands.hpp"

#include "memfuzz/errors.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string_view>
#include <thread>

namespace memfuzz::cli {

namespace fs = std::filesystem;

// =============================================================================
// Formatting
// =============================================================================

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_records_csv(std::ostream& os, const std::vector<SimRecord>& records) {
    os << kRecordHeader << '\n';
    for (const auto& r : records) {
        os << format_number(r.t) << ',' << format_number(r.v_src) << ',' << format_number(r.i)
           << ',' << format_number(r.v_mem) << ',' << format_number(r.x) << ','
           << format_number(r.r) << ',' << format_number(r.f) << '\n';
    }
}

namespace {

std::string crossings_text(const RunSummary& s, char sep) {
    std::string out;
    for (std::size_t k = 0; k < s.r_at_zero_crossings.size(); ++k) {
        if (k) out += sep;
        out += format_number(s.r_at_zero_crossings[k]);
    }
    return out;
}

double relative_dR(const RunSummary& s) { return s.max_abs_dR / s.r_first; }

}  // namespace

std::string summary_line(const RunSummary& s) {
    std::ostringstream os;
    os << "x_min=" << format_number(s.x_min) << " x_max=" << format_number(s.x_max)
       << " x_final=" << format_number(s.x_final) << " r_first=" << format_number(s.r_first)
       << " max_abs_dR=" << format_number(s.max_abs_dR)
       << " rel_dR=" << format_number(relative_dR(s))
       << " saturated=" << (s.saturated ? "true" : "false") << " r_at_zero_crossings=["
       << crossings_text(s, ';') << "]";
    return os.str();
}

std::string summary_csv_row(const std::string& label, const RunSummary& s) {
    std::ostringstream os;
    os << label << ',' << format_number(s.x_min) << ',' << format_number(s.x_max) << ','
       << format_number(s.x_final) << ',' << format_number(s.r_first) << ','
       << format_number(s.max_abs_dR) << ',' << format_number(relative_dR(s)) << ','
       << (s.saturated ? "true" : "false") << ',' << crossings_text(s, ';');
    return os.str();
}

// =============================================================================
// Surfaces and sweeps
// =============================================================================

std::vector<std::array<double, 3>> window_surface(const WindowSpec& window, std::size_t n1,
                                                  std::size_t n2) {
    if (n1 < 2 || n2 < 2) throw ConfigError("surface grid sizes must be >= 2");
    auto linspace = [](double lo, double hi, std::size_t n, std::size_t k) {
        if (k + 1 == n) return hi;
        return lo + (hi - lo) * (static_cast<double>(k) / static_cast<double>(n - 1));
    };

    double lo = 0.0, hi = 0.0;
    bool voltage = false;
    if (const auto* fz = std::get_if<window::Fuzzy>(&window.variant())) {
        const auto& var = fz->system->inputs()[fz->excitation];
        lo = var.lo();
        hi = var.hi();
        voltage = fz->threshold;
    } else if (window.kind() == WindowSpec::Kind::Biolek) {
        lo = -3e-3;
        hi = 3e-3;
    } else {
        n1 = 1;
    }

    std::vector<std::array<double, 3>> rows;
    rows.reserve(n1 * n2);
    for (std::size_t a = 0; a < n1; ++a) {
        const double u1 = n1 == 1 ? 0.0 : linspace(lo, hi, n1, a);
        for (std::size_t b = 0; b < n2; ++b) {
            const double x = linspace(0.0, 1.0, n2, b);
            const double f = voltage ? window(x, 0.0, u1) : window(x, u1, 0.0);
            rows.push_back({u1, x, f});
        }
    }
    return rows;
}

CircuitConfig apply_sweep_value(const CircuitConfig& base, const std::string& axis, double value) {
    CircuitConfig cfg = base;
    if (axis == "amplitude") {
        if (auto* s = std::get_if<waveform::Sine>(&cfg.source)) {
            s->amplitude = value;
        } else if (auto* c = std::get_if<waveform::Constant>(&cfg.source)) {
            c->level = value;
        } else {
            throw ConfigError("sweep axis 'amplitude' needs a sine or constant source");
        }
    } else if (axis == "frequency") {
        auto* s = std::get_if<waveform::Sine>(&cfg.source);
        if (!s) throw ConfigError("sweep axis 'frequency' needs a sine source");
        s->frequency = value;
    } else if (axis == "p") {
        const auto& v = cfg.window.variant();
        auto as_int = [&](const char* kind) {
            if (std::floor(value) != value) {
                throw ConfigError(std::string("sweep axis 'p' needs integers for ") + kind);
            }
            return static_cast<int>(value);
        };
        if (std::holds_alternative<window::Joglekar>(v)) {
            cfg.window = WindowSpec::joglekar(as_int("joglekar"));
        } else if (std::holds_alternative<window::Biolek>(v)) {
            cfg.window = WindowSpec::biolek(as_int("biolek"));
        } else if (const auto* w = std::get_if<window::Prodromakis>(&v)) {
            cfg.window = WindowSpec::prodromakis(value, w->j);
        } else {
            throw ConfigError("sweep axis 'p' does not apply to window '" + cfg.window.name() + "'");
        }
    } else {
        throw ConfigError("unknown sweep axis '" + axis + "' (amplitude|frequency|p)");
    }
    cfg.validate();
    return cfg;
}

std::vector<RunSummary> run_sweep(const CircuitConfig& base, const SweepSpec& sweep) {
    if (sweep.values.empty()) throw ConfigError("sweep needs at least one value");
    std::vector<CircuitConfig> configs;
    configs.reserve(sweep.values.size());
    for (double v : sweep.values) configs.push_back(apply_sweep_value(base, sweep.axis, v));

    std::vector<RunSummary> out(configs.size());
    std::vector<std::exception_ptr> errors(configs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next++; k < configs.size(); k = next++) {
            try {
                out[k] = summarize(simulate(configs[k]));
            } catch (...) {
                errors[k] = std::current_exception();
            }
        }
    };
    const std::size_t n_threads =
        std::min<std::size_t>(configs.size(), std::max(1u, std::thread::hardware_concurrency()));
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < n_threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return out;
}

// =============================================================================
// Commands
// =============================================================================

namespace {

class RuntimeFailure : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CommonOptions {
    std::string config;
    std::string preset;
    std::string out;
};

std::optional<RunConfig> load_config(const CommonOptions& o) {
    if (o.config.empty() && o.preset.empty()) return std::nullopt;
    json doc;
    fs::path base_dir;
    if (!o.preset.empty()) doc = preset_document(o.preset);
    if (!o.config.empty()) {
        json file = load_json_file(o.config);
        base_dir = fs::path(o.config).parent_path();
        doc = doc.is_null() ? file : merge_config(doc, file);
    }
    return parse_run_config(doc, base_dir);
}

RunConfig require_config(const CommonOptions& o) {
    auto cfg = load_config(o);
    if (!cfg) throw ConfigError("give --config FILE or --preset NAME");
    return *cfg;
}

std::ofstream open_output(const fs::path& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw RuntimeFailure("cannot write '" + path.string() + "'");
    return os;
}

void close_output(std::ofstream& os, const fs::path& path) {
    os.flush();
    if (!os) throw RuntimeFailure("write failed for '" + path.string() + "'");
}

int cmd_simulate(const CommonOptions& o, std::ostream& out) {
    const RunConfig cfg = require_config(o);
    const fs::path path = !o.out.empty() ? o.out : cfg.output_path;
    if (path.empty()) throw ConfigError("output.path: no output file (set it or pass --out)");
    const auto records = simulate(cfg.circuit);
    auto os = open_output(path);
    write_records_csv(os, records);
    close_output(os, path);
    out << "wrote " << records.size() << " records to " << path.string() << '\n';
    out << summary_line(summarize(records)) << '\n';
    return kOk;
}

int cmd_surface(const CommonOptions& o, const std::string& window_json, std::size_t n1,
                std::size_t n2, std::ostream& out) {
    WindowSpec window;
    if (!window_json.empty()) {
        window = parse_window(parse_json_text(window_json, "--window"), "window");
    } else {
        window = require_config(o).circuit.window;
    }
    const auto rows = window_surface(window, n1, n2);
    std::ostringstream text;
    text << kSurfaceHeader << '\n';
    for (const auto& r : rows) {
        text << format_number(r[0]) << ',' << format_number(r[1]) << ',' << format_number(r[2])
             << '\n';
    }
    if (o.out.empty()) {
        out << text.str();
    } else {
        auto os = open_output(o.out);
        os << text.str();
        close_output(os, o.out);
    }
    return kOk;
}

int cmd_compare(const CommonOptions& o, const std::vector<std::string>& window_jsons,
                std::ostream& out) {
    const RunConfig cfg = require_config(o);
    std::vector<WindowSpec> windows;
    for (std::size_t k = 0; k < window_jsons.size(); ++k) {
        windows.push_back(parse_window(parse_json_text(window_jsons[k], "--window"),
                                       "window[" + std::to_string(k) + "]"));
    }
    if (windows.empty()) windows = cfg.compare_windows;
    if (windows.size() < 2) throw ConfigError("compare needs at least two windows");

    std::string prefix = o.out;
    if (prefix.empty()) {
        prefix = cfg.output_path.empty() ? "compare"
                                         : fs::path(cfg.output_path).replace_extension().string();
    }

    std::vector<std::pair<std::string, RunSummary>> rows;
    for (std::size_t k = 0; k < windows.size(); ++k) {
        CircuitConfig c = cfg.circuit;
        c.window = windows[k];
        const auto records = simulate(c);
        const std::string label = std::to_string(k) + "_" + windows[k].name();
        const fs::path path = prefix + "_" + label + ".csv";
        auto os = open_output(path);
        write_records_csv(os, records);
        close_output(os, path);
        rows.emplace_back(label, summarize(records));
    }

    const fs::path summary_path = prefix + "_summary.csv";
    auto os = open_output(summary_path);
    os << kSummaryHeader << '\n';
    for (const auto& [label, s] : rows) os << summary_csv_row(label, s) << '\n';
    close_output(os, summary_path);

    out << std::left << std::setw(22) << "window" << std::setw(12) << "x_min" << std::setw(12)
        << "x_max" << std::setw(12) << "x_final" << std::setw(14) << "max_abs_dR" << "saturated\n";
    for (const auto& [label, s] : rows) {
        out << std::left << std::setw(22) << label << std::setw(12) << std::setprecision(6)
            << s.x_min << std::setw(12) << s.x_max << std::setw(12) << s.x_final << std::setw(14)
            << s.max_abs_dR << (s.saturated ? "true" : "false") << '\n';
    }
    return kOk;
}

int cmd_sweep(const CommonOptions& o, const std::string& axis, const std::vector<double>& values,
              std::ostream& out) {
    const RunConfig cfg = require_config(o);
    SweepSpec sweep = cfg.sweep.value_or(SweepSpec{});
    if (!axis.empty()) sweep.axis = axis;
    if (!values.empty()) sweep.values = values;
    if (sweep.axis.empty()) throw ConfigError("sweep: no axis (pass --axis or sweep.axis)");
    if (sweep.values.empty()) throw ConfigError("sweep: no values (pass --values or sweep.values)");

    const auto summaries = run_sweep(cfg.circuit, sweep);
    std::ostringstream text;
    // Same columns as the summary table, with the swept value as the label.
    text << sweep.axis << ',' << std::string_view(kSummaryHeader).substr(6) << '\n';
    for (std::size_t k = 0; k < summaries.size(); ++k) {
        const std::string row = summary_csv_row(format_number(sweep.values[k]), summaries[k]);
        text << row << '\n';
    }
    if (o.out.empty()) {
        out << text.str();
    } else {
        auto os = open_output(o.out);
        os << text.str();
        close_output(os, o.out);
    }
    return kOk;
}

int cmd_presets(const std::string& name, std::ostream& out) {
    json doc;
    if (!name.empty()) {
        doc = preset_document(name);
    } else {
        for (const auto& n : preset_names()) doc["presets"][n] = preset_document(n);
        doc["fuzzy_systems"]["fuzzy"] = fuzzy_system_to_json(default_fuzzy_system());
        doc["fuzzy_systems"]["fuzzy_threshold"] = fuzzy_system_to_json(default_threshold_system());
    }
    out << doc.dump(2) << '\n';
    return kOk;
}

void add_common(CLI::App* sub, CommonOptions& o) {
    sub->add_option("--config", o.config, "JSON run configuration");
    sub->add_option("--preset", o.preset, "Named scenario: fig3, fig5, fig6, joglekar_vs_fuzzy");
    sub->add_option("--out", o.out, "Output path (compare: file prefix)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Memristor simulation with closed-form and fuzzy window functions", "memfuzz"};
    app.require_subcommand(1);

    CommonOptions opts;
    std::string window_json;
    std::vector<std::string> window_list;
    std::size_t n1 = 41, n2 = 41;
    std::string axis;
    std::vector<double> values;
    std::string preset_name;

    auto* simulate_cmd = app.add_subcommand("simulate", "Run one transient and write a CSV");
    add_common(simulate_cmd, opts);

    auto* surface_cmd = app.add_subcommand("surface", "Tabulate a window over excitation x state");
    add_common(surface_cmd, opts);
    surface_cmd->add_option("--window", window_json, "Window spec as JSON text");
    surface_cmd->add_option("--n1", n1, "Grid points along the current/voltage axis");
    surface_cmd->add_option("--n2", n2, "Grid points along the state axis");

    auto* compare_cmd = app.add_subcommand("compare", "Run one circuit under several windows");
    add_common(compare_cmd, opts);
    compare_cmd->add_option("--window", window_list, "Window spec as JSON text (repeatable)");

    auto* sweep_cmd = app.add_subcommand("sweep", "Summaries over a parameter axis");
    add_common(sweep_cmd, opts);
    sweep_cmd->add_option("--axis", axis, "amplitude | frequency | p");
    sweep_cmd->add_option("--values", values, "Comma-separated values")->delimiter(',');

    auto* presets_cmd = app.add_subcommand("presets", "Print the built-in scenario documents");
    presets_cmd->add_option("--preset", preset_name, "Print only this preset");

    std::vector<std::string> argv_storage;
    argv_storage.reserve(args.size() + 1);
    argv_storage.emplace_back("memfuzz");
    argv_storage.insert(argv_storage.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : argv_storage) argv.push_back(a.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return e.get_exit_code() == 0 ? kOk : kUsage;
    }

    try {
        if (*simulate_cmd) return cmd_simulate(opts, out);
        if (*surface_cmd) return cmd_surface(opts, window_json, n1, n2, out);
        if (*compare_cmd) return cmd_compare(opts, window_list, out);
        if (*sweep_cmd) return cmd_sweep(opts, axis, values, out);
        if (*presets_cmd) return cmd_presets(preset_name, out);
    } catch (const ConfigError& e) {
        err << "memfuzz: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        err << "memfuzz: " << e.what() << '\n';
        return kRuntime;
    }
    return kUsage;
}

}  // namespace memfuzz::cli
