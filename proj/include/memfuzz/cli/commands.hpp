#pragma once

#include "memfuzz/cli/config.hpp"
#include "memfuzz/sim.hpp"

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

namespace memfuzz::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kRuntime = 3 };

/// Entry point of the `memfuzz` tool. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// -----------------------------------------------------------------------------
// Output formatting
// -----------------------------------------------------------------------------

/// Decimal text with 17 significant digits (printf "%.17g").
[[nodiscard]] std::string format_number(double v);

inline constexpr const char* kRecordHeader = "t,v_src,i,v_mem,x,r,f";
inline constexpr const char* kSurfaceHeader = "u1,u2,f";
inline constexpr const char* kSummaryHeader =
    "label,x_min,x_max,x_final,r_first,max_abs_dR,rel_dR,saturated,r_at_zero_crossings";

void write_records_csv(std::ostream& os, const std::vector<SimRecord>& records);
[[nodiscard]] std::string summary_line(const RunSummary& s);
[[nodiscard]] std::string summary_csv_row(const std::string& label, const RunSummary& s);

// -----------------------------------------------------------------------------
// Surfaces and sweeps
// -----------------------------------------------------------------------------

/// Rows (u1, u2 = x, f), row-major over u1 then x. u1 spans the excitation
/// universe (I or V of a fuzzy system, +-3 mA for Biolek); windows that ignore
/// the excitation emit a single u1 = 0 line per x. Grid sizes must be >= 2.
[[nodiscard]] std::vector<std::array<double, 3>> window_surface(const WindowSpec& window,
                                                                std::size_t n1, std::size_t n2);

/// Copy of `base` with one parameter replaced. Throws ConfigError when the
/// axis does not apply to the source or window.
[[nodiscard]] CircuitConfig apply_sweep_value(const CircuitConfig& base, const std::string& axis,
                                              double value);

/// One summary per value, in input order. Rows run on worker threads.
[[nodiscard]] std::vector<RunSummary> run_sweep(const CircuitConfig& base, const SweepSpec& sweep);

}  // namespace memfuzz::cli
