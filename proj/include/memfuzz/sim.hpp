#pragma once

// =============================================================================
// Series test circuit: voltage source -> series resistor -> memristor
// =============================================================================

#include "memfuzz/device.hpp"
#include "memfuzz/window.hpp"

#include <cstddef>
#include <utility>
#include <variant>
#include <vector>

namespace memfuzz {

namespace waveform {

struct Sine {
    double amplitude = 1.0;  // V
    double frequency = 1.0;  // Hz
    double phase = 0.0;      // rad
    double offset = 0.0;     // V
};

struct Constant {
    double level = 0.0;
};

/// Linear interpolation through (t, V) breakpoints; held flat outside them.
struct Piecewise {
    std::vector<std::pair<double, double>> points;
};

}  // namespace waveform

using Waveform = std::variant<waveform::Sine, waveform::Constant, waveform::Piecewise>;

/// Throws ConfigError on a non-positive sine frequency or unordered breakpoints.
void validate(const Waveform& w);

[[nodiscard]] double waveform_eval(const Waveform& w, double t);

struct CircuitConfig {
    Waveform source = waveform::Sine{};
    double series_resistance = 2000.0;
    DeviceParams device;
    WindowSpec window;
    double dt = 1e-4;
    double duration = 1.0;

    static constexpr double kMaxSteps = 1e8;

    void validate() const;
    /// Number of integration steps; the run stores steps() + 1 records.
    [[nodiscard]] std::size_t steps() const;
};

/// One integrator sample. State fields hold the value before the update.
struct SimRecord {
    double t;
    double v_src;
    double i;
    double v_mem;
    double x;
    double r;
    double f;
};

/// Records at t = n dt for n = 0 .. steps(), inclusive. Deterministic.
[[nodiscard]] std::vector<SimRecord> simulate(const CircuitConfig& cfg);

struct RunSummary {
    double x_min = 0.0;
    double x_max = 0.0;
    double x_final = 0.0;
    double r_first = 0.0;
    std::vector<double> r_at_zero_crossings;
    double max_abs_dR = 0.0;
    bool saturated = false;
};

/// Throws std::domain_error on an empty record list.
[[nodiscard]] RunSummary summarize(const std::vector<SimRecord>& records);

/// True when every record with |v_mem| <= v_eps also has |i| <= v_eps / r_on.
[[nodiscard]] bool pinch_check(const std::vector<SimRecord>& records, double v_eps, double r_on);

struct LobeAreas {
    double positive = 0.0;  // V*A
    double negative = 0.0;
    [[nodiscard]] double total() const noexcept { return positive + negative; }
};

/// Shoelace area of the (v_mem, i) trace, split into runs of constant sign of
/// v_mem, each closed through the origin. Throws std::domain_error below 3
/// records.
[[nodiscard]] LobeAreas hysteresis_lobe_area(const std::vector<SimRecord>& records);

}  // namespace memfuzz
