#include "memfuzz/cli/commands.hpp"
#include "memfuzz/cli/config.hpp"
#include "memfuzz/errors.hpp"

#include <doctest.h>

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace memfuzz;
using namespace memfuzz::cli;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("memfuzz_test_" + std::to_string(std::rand()) + "_" +
                std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    fs::path operator/(const std::string& name) const { return path / name; }
};

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result invoke(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream(p, std::ios::binary) << text;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::vector<double>> read_csv(const fs::path& p, std::string* header = nullptr) {
    std::ifstream in(p);
    std::string line;
    std::getline(in, line);
    if (header) *header = line;
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

TEST_CASE("presets embed the reference parameter block") {
    for (const auto& name : preset_names()) {
        const RunConfig cfg = parse_run_config(preset_document(name));
        const auto& d = cfg.circuit.device;
        CHECK(d.r_on == 100.0);
        CHECK(d.r_off == 16000.0);
        CHECK(d.k == 10000.0);
        CHECK(memristance(d, d.x_init) == doctest::Approx(11000.0).epsilon(1e-14));
        CHECK(cfg.circuit.series_resistance == 2000.0);
        CHECK(cfg.compare_windows.size() == 2);
    }
    const RunConfig fig3 = parse_run_config(preset_document("fig3"));
    CHECK(std::get<waveform::Sine>(fig3.circuit.source).amplitude == 5.0);
    CHECK(fig3.circuit.window.kind() == WindowSpec::Kind::Fuzzy);
    const RunConfig fig5 = parse_run_config(preset_document("fig5"));
    CHECK(std::get<waveform::Sine>(fig5.circuit.source).amplitude == 0.2);
    CHECK(fig5.circuit.window.kind() == WindowSpec::Kind::FuzzyThreshold);
    CHECK_THROWS_AS((void)preset_document("fig9"), ConfigError);
}

TEST_CASE("explicit fields override the scenario") {
    json doc = {{"schema_version", 1},
                {"scenario", "fig3"},
                {"circuit", {{"window", {{"kind", "joglekar"}, {"p", 4}}}, {"dt", 2e-4}}}};
    const RunConfig cfg = parse_run_config(doc);
    CHECK(cfg.circuit.window.kind() == WindowSpec::Kind::Joglekar);
    CHECK(std::get<window::Joglekar>(cfg.circuit.window.variant()).p == 4);
    CHECK(cfg.circuit.dt == 2e-4);
    CHECK(std::get<waveform::Sine>(cfg.circuit.source).amplitude == 5.0);

    doc["circuit"]["source"] = {{"amplitude", 1.5}};
    CHECK(std::get<waveform::Sine>(parse_run_config(doc).circuit.source).amplitude == 1.5);
}

TEST_CASE("validation errors name the offending field") {
    json doc = preset_document("fig3");
    doc["circuit"]["device"]["r_off"] = 50.0;
    try {
        (void)parse_run_config(doc);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("circuit.device") != std::string::npos);
    }

    doc = preset_document("fig3");
    doc["circuit"]["window"] = {{"kind", "joglekar"}, {"p", 0}};
    CHECK_THROWS_WITH_AS((void)parse_run_config(doc), doctest::Contains("circuit.window.p"),
                         ConfigError);

    doc = preset_document("fig3");
    doc["circuit"]["dtt"] = 1.0;
    CHECK_THROWS_WITH_AS((void)parse_run_config(doc), doctest::Contains("circuit.dtt"), ConfigError);

    doc = preset_document("fig3");
    doc["schema_version"] = 2;
    CHECK_THROWS_WITH_AS((void)parse_run_config(doc), doctest::Contains("schema_version"),
                         ConfigError);

    doc = preset_document("fig3");
    doc["circuit"]["device"]["x_init"] = 0.5;  // alongside r_init
    CHECK_THROWS_AS((void)parse_run_config(doc), ConfigError);

    CHECK_THROWS_WITH_AS((void)parse_json_text("{\"a\": [1, 2,}", "inline"),
                         doctest::Contains("at byte"), ConfigError);
}

TEST_CASE("fuzzy system documents round-trip") {
    for (const auto& sys : {default_fuzzy_system(), default_threshold_system()}) {
        const json doc = fuzzy_system_to_json(sys);
        const fuzzy::FuzzySystem back = parse_fuzzy_system(doc, "system");
        CHECK(fuzzy_system_to_json(back) == doc);
        for (int a = 0; a <= 10; ++a) {
            for (int b = 0; b <= 10; ++b) {
                const double lo = sys.inputs()[0].lo(), hi = sys.inputs()[0].hi();
                const double in[] = {lo + (hi - lo) * a / 10.0, b / 10.0};
                CHECK(back.evaluate(in) == sys.evaluate(in));
            }
        }
    }

    json bad = fuzzy_system_to_json(default_fuzzy_system());
    bad["rules"][0]["then"] = "Q";
    CHECK_THROWS_WITH_AS((void)parse_fuzzy_system(bad, "system"), doctest::Contains("system"),
                         ConfigError);
    bad = fuzzy_system_to_json(default_fuzzy_system());
    bad["inputs"][0]["terms"][0]["mf"]["points"] = {1.0, 0.0, 0.5, 2.0};
    CHECK_THROWS_WITH_AS((void)parse_fuzzy_system(bad, "system"),
                         doctest::Contains("system.inputs[0].terms[0].mf"), ConfigError);
}

TEST_CASE("window documents") {
    CHECK(parse_window({{"kind", "prodromakis"}, {"p", 2}, {"j", 1.5}}, "w").kind() ==
          WindowSpec::Kind::Prodromakis);
    CHECK_THROWS_AS((void)parse_window({{"kind", "bcm"}}, "w"), ConfigError);
    CHECK_THROWS_AS((void)parse_window({{"kind", "joglekar"}, {"p", 2.5}}, "w"), ConfigError);

    TempDir dir;
    const json sys = fuzzy_system_to_json(default_threshold_system());
    write_file(dir / "th.json", sys.dump());
    const WindowSpec w = parse_window({{"kind", "fuzzy_threshold"}, {"system_file", "th.json"}},
                                      "w", dir.path);
    CHECK(w.kind() == WindowSpec::Kind::FuzzyThreshold);
    CHECK(w(0.5, 0.0, 0.5) == WindowSpec::fuzzy_threshold(default_threshold_system())(0.5, 0.0, 0.5));

    // A fuzzy window given the wrong system is rejected.
    CHECK_THROWS_AS((void)parse_window({{"kind", "fuzzy"}, {"system_file", "th.json"}}, "w", dir.path),
                    ConfigError);
    const json round = window_to_json(w);
    CHECK(parse_window(round, "w").kind() == WindowSpec::Kind::FuzzyThreshold);
}

TEST_CASE("simulate command") {
    TempDir dir;
    const fs::path csv = dir / "fig3.csv";
    const Result r = invoke({"simulate", "--preset", "fig3", "--out", csv.string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("saturated=true") != std::string::npos);

    std::string header;
    const auto rows = read_csv(csv, &header);
    CHECK(header == "t,v_src,i,v_mem,x,r,f");
    REQUIRE(rows.size() == 10001);
    double x_max = 0.0;
    for (const auto& row : rows) {
        REQUIRE(row.size() == 7);
        x_max = std::max(x_max, row[4]);
        // Kirchhoff identity survives the text round trip.
        CHECK(std::abs(row[1] - row[2] * 2000.0 - row[3]) < 1e-12 * std::max(1.0, std::abs(row[1])));
    }
    CHECK(x_max >= 0.99);

    // Byte-identical reruns.
    const fs::path again = dir / "again.csv";
    REQUIRE(invoke({"simulate", "--preset", "fig3", "--out", again.string()}).code == 0);
    CHECK(read_file(csv) == read_file(again));
}

TEST_CASE("simulate fig5 stays inside the dead band") {
    TempDir dir;
    const Result r = invoke({"simulate", "--preset", "fig5", "--out", (dir / "f5.csv").string()});
    REQUIRE(r.code == 0);
    const auto pos = r.out.find("rel_dR=");
    REQUIRE(pos != std::string::npos);
    CHECK(std::stod(r.out.substr(pos + 7)) < 0.01);
}

TEST_CASE("config files and error exits") {
    TempDir dir;
    write_file(dir / "bad.json", "{\"schema_version\": 1,, }");
    Result r = invoke({"simulate", "--config", (dir / "bad.json").string()});
    CHECK(r.code == 2);
    CHECK(r.err.find("byte") != std::string::npos);

    json doc = preset_document("fig3");
    doc["circuit"]["duration"] = 0.05;
    doc["output"]["path"] = (dir / "short.csv").string();
    write_file(dir / "ok.json", doc.dump());
    r = invoke({"simulate", "--config", (dir / "ok.json").string()});
    CHECK(r.code == 0);
    CHECK(fs::exists(dir / "short.csv"));

    doc["circuit"]["device"]["k"] = -1;
    write_file(dir / "neg.json", doc.dump());
    r = invoke({"simulate", "--config", (dir / "neg.json").string()});
    CHECK(r.code == 2);
    CHECK(r.err.find("circuit.device") != std::string::npos);

    CHECK(invoke({"simulate"}).code == 2);
    CHECK(invoke({"frobnicate"}).code == 2);
    CHECK(invoke({}).code == 2);
    CHECK(invoke({"simulate", "--config", (dir / "missing.json").string()}).code == 2);

    // Unwritable output is a runtime failure.
    r = invoke({"simulate", "--preset", "fig3", "--out", (dir / "no" / "such" / "x.csv").string()});
    CHECK(r.code == 3);
}

TEST_CASE("surface command") {
    Result r = invoke({"surface", "--window", R"({"kind":"joglekar","p":10})", "--n2", "3"});
    REQUIRE(r.code == 0);
    CHECK(r.out == "u1,u2,f\n0,0,0\n0,0.5,1\n0,1,0\n");

    r = invoke({"surface", "--window", R"({"kind":"fuzzy"})", "--n1", "5", "--n2", "5"});
    REQUIRE(r.code == 0);
    const auto rows = window_surface(WindowSpec::fuzzy(default_fuzzy_system()), 5, 5);
    REQUIRE(rows.size() == 25);
    // Last block is i = +3 mA; x = 0 beats x = 1 (rule 4 vs rule 6).
    CHECK(rows[20][0] == 3e-3);
    CHECK(rows[20][2] > rows[24][2]);

    const auto th = window_surface(WindowSpec::fuzzy_threshold(default_threshold_system()), 41, 11);
    std::vector<double> zero_row;
    for (const auto& row : th) {
        if (row[0] == 0.0) zero_row.push_back(row[2]);
    }
    REQUIRE(zero_row.size() == 11);
    for (std::size_t k = 0; k < th.size(); ++k) {
        if (std::abs(th[k][0]) <= 0.15) CHECK(std::abs(th[k][2] - zero_row[k % 11]) < 1e-9);
    }

    CHECK(invoke({"surface", "--window", R"({"kind":"joglekar","p":-1})"}).code == 2);
    CHECK(invoke({"surface", "--window", R"({"kind":"strukov"})", "--n2", "1"}).code == 2);
    CHECK(invoke({"surface", "--preset", "fig6", "--n1", "3", "--n2", "2"}).code == 0);
}

TEST_CASE("compare command") {
    TempDir dir;
    const std::string prefix = (dir / "cmp").string();
    Result r = invoke({"compare", "--preset", "joglekar_vs_fuzzy", "--out", prefix});
    REQUIRE(r.code == 0);
    CHECK(fs::exists(prefix + "_0_joglekar.csv"));
    CHECK(fs::exists(prefix + "_1_fuzzy.csv"));
    std::string header;
    const auto summary = [&] {
        std::ifstream in(prefix + "_summary.csv");
        std::vector<std::string> lines;
        for (std::string l; std::getline(in, l);) lines.push_back(l);
        return lines;
    }();
    REQUIRE(summary.size() == 3);
    CHECK(summary[1].rfind("0_joglekar,", 0) == 0);
    CHECK(summary[2].rfind("1_fuzzy,", 0) == 0);

    const auto jog = read_csv(prefix + "_0_joglekar.csv");
    const auto fz = read_csv(prefix + "_1_fuzzy.csv");
    CHECK(1.0 - jog.back()[4] <= 1e-12);
    CHECK(fz.back()[4] < 0.5);

    r = invoke({"compare", "--preset", "fig3", "--out", prefix + "_eq", "--window",
                R"({"kind":"strukov"})", "--window", R"({"kind":"prodromakis","p":1,"j":1})"});
    REQUIRE(r.code == 0);
    const auto a = read_csv(prefix + "_eq_0_strukov.csv");
    const auto b = read_csv(prefix + "_eq_1_prodromakis.csv");
    REQUIRE(a.size() == b.size());
    double worst = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) worst = std::max(worst, std::abs(a[k][4] - b[k][4]));
    CHECK(worst < 1e-9);

    r = invoke({"compare", "--preset", "fig3", "--window", R"({"kind":"strukov"})"});
    CHECK(r.code == 2);
}

TEST_CASE("sweep command") {
    Result r = invoke({"sweep", "--preset", "fig5", "--axis", "amplitude", "--values", "0.1,0.2"});
    REQUIRE(r.code == 0);
    std::stringstream ss(r.out);
    std::string line;
    std::getline(ss, line);
    CHECK(line.rfind("amplitude,x_min,", 0) == 0);
    int rows = 0;
    while (std::getline(ss, line)) {
        ++rows;
        std::vector<std::string> cells;
        std::stringstream ls(line);
        for (std::string c; std::getline(ls, c, ',');) cells.push_back(c);
        REQUIRE(cells.size() >= 7);
        CHECK(std::stod(cells[6]) < 0.01);  // rel_dR
    }
    CHECK(rows == 2);

    const RunConfig fig3 = parse_run_config(preset_document("fig3"));
    const auto s = run_sweep(fig3.circuit, SweepSpec{"amplitude", {5.0}});
    REQUIRE(s.size() == 1);
    CHECK(s[0].saturated);

    CHECK(invoke({"sweep", "--preset", "fig3", "--axis", "amplitude"}).code == 2);
    CHECK(invoke({"sweep", "--preset", "fig3", "--axis", "p", "--values", "2"}).code == 2);
    CHECK(invoke({"sweep", "--preset", "joglekar_vs_fuzzy", "--axis", "p", "--values", "1,2"}).code ==
          0);
    CHECK_THROWS_AS((void)apply_sweep_value(fig3.circuit, "duty", 1.0), ConfigError);
}

TEST_CASE("sweep rows match independent runs in input order") {
    const RunConfig cfg = parse_run_config(preset_document("fig6"));
    const std::vector<double> values = {5.0, 0.3, 1.0};
    const auto rows = run_sweep(cfg.circuit, SweepSpec{"amplitude", values});
    for (std::size_t k = 0; k < values.size(); ++k) {
        const auto solo = summarize(simulate(apply_sweep_value(cfg.circuit, "amplitude", values[k])));
        CHECK(rows[k].x_final == solo.x_final);
        CHECK(rows[k].max_abs_dR == solo.max_abs_dR);
    }
}

TEST_CASE("presets command prints parseable documents") {
    const Result r = invoke({"presets"});
    REQUIRE(r.code == 0);
    const json doc = json::parse(r.out);
    CHECK(doc["presets"].size() == preset_names().size());
    CHECK(doc["presets"]["fig3"]["circuit"]["device"]["r_init"] == 11000.0);
    CHECK_NOTHROW((void)parse_fuzzy_system(doc["fuzzy_systems"]["fuzzy_threshold"], "x"));
    CHECK(invoke({"presets", "--preset", "nope"}).code == 2);
}
