#pragma once

// =============================================================================
// JSON run configuration
// =============================================================================
// Layout (schema_version 1):
//
//   {
//     "schema_version": 1,
//     "scenario": "fig3",                       // optional preset base
//     "circuit": {
//       "source": {"kind": "sine", "amplitude": 5, "frequency": 1},
//       "series_resistance": 2000,
//       "device": {"r_on": 100, "r_off": 16000, "k": 10000, "r_init": 11000},
//       "window": {"kind": "joglekar", "p": 10},
//       "dt": 1e-4, "duration": 1
//     },
//     "output": {"path": "run.csv"},
//     "compare": {"windows": [ ... ]},          // used by `compare`
//     "sweep": {"axis": "amplitude", "values": [0.1, 0.2]}   // used by `sweep`
//   }
//
// Fuzzy windows take either an inline "system" document or a "system_file"
// path relative to the config file; without either the default system for
// the kind is used.
// =============================================================================

#include "memfuzz/fuzzy.hpp"
#include "memfuzz/sim.hpp"
#include "memfuzz/window.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace memfuzz::cli {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

struct SweepSpec {
    std::string axis;  // amplitude | frequency | p
    std::vector<double> values;
};

struct RunConfig {
    int schema_version = kSchemaVersion;
    std::optional<std::string> scenario;
    CircuitConfig circuit;
    std::string output_path;
    std::vector<WindowSpec> compare_windows;
    std::optional<SweepSpec> sweep;
};

[[nodiscard]] const std::vector<std::string>& preset_names();
/// Full config document of a named preset; throws ConfigError if unknown.
[[nodiscard]] json preset_document(const std::string& name);

/// Overlay `patch` onto `base`. Objects merge key by key, except that a
/// "source" or "window" object carrying "kind" replaces the base object.
[[nodiscard]] json merge_config(json base, const json& patch);

/// Parse a JSON file. Syntax errors become ConfigError naming the byte offset.
[[nodiscard]] json load_json_file(const std::filesystem::path& path);
[[nodiscard]] json parse_json_text(const std::string& text, const std::string& origin);

/// Resolve `scenario` (if any), overlay the document and validate everything.
[[nodiscard]] RunConfig parse_run_config(const json& doc,
                                         const std::filesystem::path& base_dir = {});

[[nodiscard]] fuzzy::FuzzySystem parse_fuzzy_system(const json& doc, const std::string& where);
[[nodiscard]] json fuzzy_system_to_json(const fuzzy::FuzzySystem& system);

[[nodiscard]] WindowSpec parse_window(const json& doc, const std::string& where,
                                      const std::filesystem::path& base_dir = {});
[[nodiscard]] json window_to_json(const WindowSpec& window);

}  // namespace memfuzz::cli
