#include "memfuzz/cli/config.hpp"

#include "memfuzz/errors.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace memfuzz::cli {

namespace fs = std::filesystem;

namespace {

// Typed access to one JSON object that remembers its dotted path for error
// messages and rejects keys nobody asked for.
class Fields {
public:
    Fields(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError(where() + ": expected an object");
    }

    [[nodiscard]] bool has(const std::string& key) const { return j_.contains(key); }

    [[nodiscard]] std::string field(const std::string& key) const {
        return path_.empty() ? key : path_ + "." + key;
    }

    const json& at(const std::string& key) {
        used_.insert(key);
        if (!j_.contains(key)) throw ConfigError(field(key) + ": missing required field");
        return j_.at(key);
    }

    double number(const std::string& key) {
        const json& v = at(key);
        if (!v.is_number()) throw ConfigError(field(key) + ": expected a number");
        const double d = v.get<double>();
        if (!std::isfinite(d)) throw ConfigError(field(key) + ": must be finite");
        return d;
    }

    double number_or(const std::string& key, double fallback) {
        return has(key) ? number(key) : (used_.insert(key), fallback);
    }

    long long integer(const std::string& key) {
        const json& v = at(key);
        if (v.is_number_integer()) return v.get<long long>();
        if (v.is_number_float()) {
            const double d = v.get<double>();
            if (std::isfinite(d) && std::floor(d) == d) return static_cast<long long>(d);
        }
        throw ConfigError(field(key) + ": expected an integer");
    }

    std::string string(const std::string& key) {
        const json& v = at(key);
        if (!v.is_string()) throw ConfigError(field(key) + ": expected a string");
        return v.get<std::string>();
    }

    void finish() const {
        for (const auto& [key, _] : j_.items()) {
            if (!used_.count(key)) throw ConfigError(field(key) + ": unknown field");
        }
    }

    [[nodiscard]] std::string where() const { return path_.empty() ? "config" : path_; }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> used_;
};

// Wrap a ConfigError raised by a model constructor with the field it came from.
template <typename F>
auto annotate(const std::string& where, F&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        if (msg.rfind(where, 0) == 0) throw;
        throw ConfigError(where + ": " + msg);
    }
}

fuzzy::MembershipFunction parse_mf(const json& doc, const std::string& where) {
    Fields f(doc, where);
    const std::string type = f.string("type");
    const json& pts = f.at("points");
    if (!pts.is_array()) throw ConfigError(f.field("points") + ": expected an array");
    std::vector<double> p;
    for (const auto& v : pts) {
        if (!v.is_number()) throw ConfigError(f.field("points") + ": expected numbers");
        p.push_back(v.get<double>());
    }
    f.finish();
    return annotate(where, [&] {
        if (type == "triangular") {
            if (p.size() != 3) throw ConfigError("triangular needs 3 points");
            return fuzzy::MembershipFunction::triangular(p[0], p[1], p[2]);
        }
        if (type == "trapezoidal") {
            if (p.size() != 4) throw ConfigError("trapezoidal needs 4 points");
            return fuzzy::MembershipFunction::trapezoidal(p[0], p[1], p[2], p[3]);
        }
        throw ConfigError("type must be 'triangular' or 'trapezoidal'");
    });
}

fuzzy::LinguisticVariable parse_variable(const json& doc, const std::string& where) {
    Fields f(doc, where);
    const std::string name = f.string("name");
    const json& uni = f.at("universe");
    if (!uni.is_array() || uni.size() != 2 || !uni[0].is_number() || !uni[1].is_number()) {
        throw ConfigError(f.field("universe") + ": expected [lo, hi]");
    }
    const json& terms = f.at("terms");
    if (!terms.is_array()) throw ConfigError(f.field("terms") + ": expected an array");
    std::vector<fuzzy::Term> parsed;
    for (std::size_t k = 0; k < terms.size(); ++k) {
        const std::string tw = f.field("terms") + "[" + std::to_string(k) + "]";
        Fields tf(terms[k], tw);
        std::string label = tf.string("label");
        const json& shape = tf.at("mf");
        tf.finish();
        parsed.push_back({std::move(label), parse_mf(shape, tw + ".mf")});
    }
    f.finish();
    return annotate(where, [&] {
        return fuzzy::LinguisticVariable(name, uni[0].get<double>(), uni[1].get<double>(),
                                         std::move(parsed));
    });
}

json mf_to_json(const fuzzy::MembershipFunction& mf) {
    const bool tri = mf.kind() == fuzzy::MembershipFunction::Kind::Triangular;
    return {{"type", tri ? "triangular" : "trapezoidal"}, {"points", mf.breakpoints()}};
}

json variable_to_json(const fuzzy::LinguisticVariable& v) {
    json terms = json::array();
    for (const auto& t : v.terms()) terms.push_back({{"label", t.label}, {"mf", mf_to_json(t.mf)}});
    return {{"name", v.name()}, {"universe", {v.lo(), v.hi()}}, {"terms", terms}};
}

Waveform parse_source(const json& doc, const std::string& where) {
    Fields f(doc, where);
    const std::string kind = f.string("kind");
    Waveform w;
    if (kind == "sine") {
        waveform::Sine s;
        s.amplitude = f.number("amplitude");
        s.frequency = f.number("frequency");
        s.phase = f.number_or("phase", 0.0);
        s.offset = f.number_or("offset", 0.0);
        w = s;
    } else if (kind == "constant") {
        w = waveform::Constant{f.number("level")};
    } else if (kind == "piecewise") {
        const json& pts = f.at("points");
        if (!pts.is_array()) throw ConfigError(f.field("points") + ": expected an array");
        waveform::Piecewise p;
        for (const auto& pt : pts) {
            if (!pt.is_array() || pt.size() != 2 || !pt[0].is_number() || !pt[1].is_number()) {
                throw ConfigError(f.field("points") + ": expected [t, V] pairs");
            }
            p.points.emplace_back(pt[0].get<double>(), pt[1].get<double>());
        }
        w = std::move(p);
    } else {
        throw ConfigError(f.field("kind") + ": unknown source kind '" + kind + "'");
    }
    f.finish();
    annotate(where, [&] { validate(w); });
    return w;
}

DeviceParams parse_device(const json& doc, const std::string& where) {
    Fields f(doc, where);
    DeviceParams p;
    p.r_on = f.number("r_on");
    p.r_off = f.number("r_off");
    p.k = f.number("k");
    const bool has_x = f.has("x_init");
    const bool has_r = f.has("r_init");
    if (has_x == has_r) {
        throw ConfigError(where + ": give exactly one of x_init or r_init");
    }
    double r_init = 0.0;
    if (has_x) p.x_init = f.number("x_init");
    if (has_r) r_init = f.number("r_init");
    f.finish();
    if (has_r) {
        if (!(r_init >= p.r_on && r_init <= p.r_off)) {
            throw ConfigError(f.field("r_init") + ": must lie in [r_on, r_off]");
        }
        p.x_init = x_from_resistance(p, r_init);
    }
    annotate(where, [&] { p.validate(); });
    return p;
}

const json& preset_table() {
    static const json table = [] {
        const json base_circuit = {
            {"source", {{"kind", "sine"}, {"amplitude", 5.0}, {"frequency", 1.0}}},
            {"series_resistance", 2000.0},
            {"device", {{"r_on", 100.0}, {"r_off", 16000.0}, {"k", 10000.0}, {"r_init", 11000.0}}},
            {"dt", 1e-4},
            {"duration", 1.0}};
        auto make = [&](const std::string& name, double amplitude, const json& window,
                        const json& compare) {
            json c = base_circuit;
            c["source"]["amplitude"] = amplitude;
            c["window"] = window;
            return json{{"schema_version", kSchemaVersion},
                        {"circuit", c},
                        {"output", {{"path", name + ".csv"}}},
                        {"compare", {{"windows", compare}}}};
        };
        const json fz = {{"kind", "fuzzy"}};
        const json th = {{"kind", "fuzzy_threshold"}};
        const json jg = {{"kind", "joglekar"}, {"p", 10}};
        json t;
        t["fig3"] = make("fig3", 5.0, fz, json::array({jg, fz}));
        t["fig5"] = make("fig5", 0.2, th, json::array({th, fz}));
        t["fig6"] = make("fig6", 5.0, th, json::array({th, fz}));
        t["joglekar_vs_fuzzy"] = make("joglekar_vs_fuzzy", 5.0, jg, json::array({jg, fz}));
        return t;
    }();
    return table;
}

}  // namespace

// =============================================================================
// Presets and merging
// =============================================================================

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names = {"fig3", "fig5", "fig6", "joglekar_vs_fuzzy"};
    return names;
}

json preset_document(const std::string& name) {
    const json& t = preset_table();
    if (!t.contains(name)) {
        std::string known;
        for (const auto& n : preset_names()) known += (known.empty() ? "" : ", ") + n;
        throw ConfigError("unknown preset '" + name + "' (known: " + known + ")");
    }
    return t.at(name);
}

json merge_config(json base, const json& patch) {
    if (!base.is_object() || !patch.is_object()) return patch;
    for (const auto& [key, value] : patch.items()) {
        const bool replace_whole = (key == "source" || key == "window") && value.is_object() &&
                                   value.contains("kind");
        if (replace_whole || !base.contains(key)) {
            base[key] = value;
        } else {
            base[key] = merge_config(base[key], value);
        }
    }
    return base;
}

json parse_json_text(const std::string& text, const std::string& origin) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("malformed JSON in " + origin + " at byte " + std::to_string(e.byte) +
                          ": " + e.what());
    }
}

json load_json_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_json_text(ss.str(), "'" + path.string() + "'");
}

// =============================================================================
// Fuzzy systems and windows
// =============================================================================

fuzzy::FuzzySystem parse_fuzzy_system(const json& doc, const std::string& where) {
    Fields f(doc, where);
    const json& inputs = f.at("inputs");
    if (!inputs.is_array()) throw ConfigError(f.field("inputs") + ": expected an array");
    std::vector<fuzzy::LinguisticVariable> in;
    for (std::size_t k = 0; k < inputs.size(); ++k) {
        in.push_back(parse_variable(inputs[k], f.field("inputs") + "[" + std::to_string(k) + "]"));
    }
    fuzzy::LinguisticVariable out = parse_variable(f.at("output"), f.field("output"));

    const json& rules = f.at("rules");
    if (!rules.is_array()) throw ConfigError(f.field("rules") + ": expected an array");
    std::vector<fuzzy::Rule> parsed;
    for (std::size_t k = 0; k < rules.size(); ++k) {
        const std::string rw = f.field("rules") + "[" + std::to_string(k) + "]";
        Fields rf(rules[k], rw);
        fuzzy::Rule r;
        const json& ants = rf.at("if");
        if (!ants.is_array()) throw ConfigError(rf.field("if") + ": expected [[var, term], ...]");
        for (const auto& a : ants) {
            if (!a.is_array() || a.size() != 2 || !a[0].is_string() || !a[1].is_string()) {
                throw ConfigError(rf.field("if") + ": expected [[var, term], ...]");
            }
            r.antecedents.push_back({a[0].get<std::string>(), a[1].get<std::string>()});
        }
        r.consequent = rf.string("then");
        r.weight = rf.number_or("weight", 1.0);
        rf.finish();
        parsed.push_back(std::move(r));
    }
    const long long res = f.has("resolution")
                              ? f.integer("resolution")
                              : static_cast<long long>(fuzzy::FuzzySystem::kDefaultResolution);
    f.finish();
    if (res < static_cast<long long>(fuzzy::FuzzySystem::kMinResolution)) {
        throw ConfigError(f.field("resolution") + ": must be >= " +
                          std::to_string(fuzzy::FuzzySystem::kMinResolution));
    }
    return annotate(where, [&] {
        return fuzzy::FuzzySystem(std::move(in), std::move(out), std::move(parsed),
                                  static_cast<std::size_t>(res));
    });
}

json fuzzy_system_to_json(const fuzzy::FuzzySystem& system) {
    json inputs = json::array();
    for (const auto& v : system.inputs()) inputs.push_back(variable_to_json(v));
    json rules = json::array();
    for (const auto& r : system.rules()) {
        json ants = json::array();
        for (const auto& a : r.antecedents) ants.push_back({a.variable, a.term});
        rules.push_back({{"if", ants}, {"then", r.consequent}, {"weight", r.weight}});
    }
    return {{"inputs", inputs},
            {"output", variable_to_json(system.output())},
            {"rules", rules},
            {"resolution", system.resolution()}};
}

WindowSpec parse_window(const json& doc, const std::string& where, const fs::path& base_dir) {
    Fields f(doc, where);
    const std::string kind = f.string("kind");
    auto finish = [&](WindowSpec w) {
        f.finish();
        return w;
    };
    auto positive_int = [&](const std::string& key) {
        const long long p = f.integer(key);
        if (p < 1 || p > 1000000) throw ConfigError(f.field(key) + ": must be a positive integer");
        return static_cast<int>(p);
    };

    return annotate(where, [&]() -> WindowSpec {
        if (kind == "none") return finish(WindowSpec::none());
        if (kind == "strukov") return finish(WindowSpec::strukov());
        if (kind == "joglekar") return finish(WindowSpec::joglekar(positive_int("p")));
        if (kind == "biolek") return finish(WindowSpec::biolek(positive_int("p")));
        if (kind == "prodromakis") {
            const double p = f.number("p");
            const double j = f.number("j");
            return finish(WindowSpec::prodromakis(p, j));
        }
        if (kind == "fuzzy" || kind == "fuzzy_threshold") {
            const bool threshold = kind == "fuzzy_threshold";
            const double gain = f.number_or("gain", 1.0);
            if (f.has("system") && f.has("system_file")) {
                throw ConfigError(where + ": give at most one of system or system_file");
            }
            std::optional<fuzzy::FuzzySystem> system;
            if (f.has("system")) {
                system = parse_fuzzy_system(f.at("system"), f.field("system"));
            } else if (f.has("system_file")) {
                fs::path p = f.string("system_file");
                if (p.is_relative()) p = base_dir / p;
                system = parse_fuzzy_system(load_json_file(p), f.field("system_file"));
            } else {
                system = threshold ? default_threshold_system() : default_fuzzy_system();
            }
            return finish(threshold ? WindowSpec::fuzzy_threshold(std::move(*system), gain)
                                    : WindowSpec::fuzzy(std::move(*system), gain));
        }
        throw ConfigError(f.field("kind") + ": unknown window kind '" + kind + "'");
    });
}

json window_to_json(const WindowSpec& window) {
    json j = {{"kind", window.name()}};
    const auto& v = window.variant();
    if (const auto* w = std::get_if<window::Joglekar>(&v)) j["p"] = w->p;
    if (const auto* w = std::get_if<window::Biolek>(&v)) j["p"] = w->p;
    if (const auto* w = std::get_if<window::Prodromakis>(&v)) {
        j["p"] = w->p;
        j["j"] = w->j;
    }
    if (const auto* w = std::get_if<window::Fuzzy>(&v)) {
        j["gain"] = w->gain;
        j["system"] = fuzzy_system_to_json(*w->system);
    }
    return j;
}

// =============================================================================
// Run config
// =============================================================================

RunConfig parse_run_config(const json& raw, const fs::path& base_dir) {
    if (!raw.is_object()) throw ConfigError("config: expected an object");
    json doc = raw;
    if (raw.contains("scenario")) {
        if (!raw["scenario"].is_string()) throw ConfigError("scenario: expected a string");
        doc = merge_config(preset_document(raw["scenario"].get<std::string>()), raw);
    }

    Fields f(doc, "");
    RunConfig cfg;
    const long long version = f.integer("schema_version");
    if (version != kSchemaVersion) {
        throw ConfigError("schema_version: unsupported version " + std::to_string(version));
    }
    cfg.schema_version = static_cast<int>(version);
    if (f.has("scenario")) cfg.scenario = f.string("scenario");

    Fields c(f.at("circuit"), "circuit");
    cfg.circuit.source = parse_source(c.at("source"), "circuit.source");
    cfg.circuit.series_resistance = c.number("series_resistance");
    cfg.circuit.device = parse_device(c.at("device"), "circuit.device");
    cfg.circuit.window = parse_window(c.at("window"), "circuit.window", base_dir);
    cfg.circuit.dt = c.number("dt");
    cfg.circuit.duration = c.number("duration");
    c.finish();
    annotate("circuit", [&] { cfg.circuit.validate(); });

    if (f.has("output")) {
        Fields o(f.at("output"), "output");
        cfg.output_path = o.string("path");
        if (o.has("format") && o.string("format") != "csv") {
            throw ConfigError("output.format: only 'csv' is supported");
        }
        o.finish();
    }

    if (f.has("compare")) {
        Fields cmp(f.at("compare"), "compare");
        const json& ws = cmp.at("windows");
        if (!ws.is_array()) throw ConfigError("compare.windows: expected an array");
        for (std::size_t k = 0; k < ws.size(); ++k) {
            cfg.compare_windows.push_back(
                parse_window(ws[k], "compare.windows[" + std::to_string(k) + "]", base_dir));
        }
        cmp.finish();
    }

    if (f.has("sweep")) {
        Fields s(f.at("sweep"), "sweep");
        SweepSpec sweep;
        sweep.axis = s.string("axis");
        const json& vals = s.at("values");
        if (!vals.is_array()) throw ConfigError("sweep.values: expected an array");
        for (const auto& v : vals) {
            if (!v.is_number()) throw ConfigError("sweep.values: expected numbers");
            sweep.values.push_back(v.get<double>());
        }
        s.finish();
        cfg.sweep = std::move(sweep);
    }
    f.finish();
    return cfg;
}

}  // namespace memfuzz::cli
