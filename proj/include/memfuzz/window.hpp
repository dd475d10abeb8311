#pragma once

// =============================================================================
// Window functions
// =============================================================================
// Every window maps (state x, device current i, device voltage v) to the
// factor that scales the linear drift rate. Closed-form windows ignore the
// excitation (Biolek uses only the sign of i); the fuzzy windows read either
// the current or the memristor voltage.
// =============================================================================

#include "memfuzz/fuzzy.hpp"

#include <memory>
#include <string>
#include <variant>

namespace memfuzz {

/// Six-rule current-driven system: inputs I [A] and X, output F on [0,1].
[[nodiscard]] fuzzy::FuzzySystem default_fuzzy_system();

/// Seven-rule voltage-driven system with a dead band of about 0.2 V:
/// inputs V [V] and X, output F on [0,1].
[[nodiscard]] fuzzy::FuzzySystem default_threshold_system();

namespace window {

struct None {};
struct Strukov {};
struct Joglekar {
    int p = 1;
};
struct Biolek {
    int p = 1;
};
struct Prodromakis {
    double p = 1.0;
    double j = 1.0;
};

/// Fuzzy window. `excitation` indexes the I (or V) input of the system and
/// `state` the X input, both resolved at construction.
struct Fuzzy {
    std::shared_ptr<const fuzzy::FuzzySystem> system;
    double gain = 1.0;
    bool threshold = false;  // keyed on V instead of I
    std::size_t excitation = 0;
    std::size_t state = 1;
};

}  // namespace window

/// Tagged window choice. Immutable; copies share the fuzzy system.
class WindowSpec {
public:
    enum class Kind { None, Strukov, Joglekar, Biolek, Prodromakis, Fuzzy, FuzzyThreshold };

    WindowSpec() = default;

    static WindowSpec none();
    static WindowSpec strukov();
    static WindowSpec joglekar(int p);
    static WindowSpec biolek(int p);
    static WindowSpec prodromakis(double p, double j);
    /// System must declare inputs "I" and "X" and an output universe of [0,1].
    static WindowSpec fuzzy(fuzzy::FuzzySystem system, double gain = 1.0);
    /// System must declare inputs "V" and "X" and an output universe of [0,1].
    static WindowSpec fuzzy_threshold(fuzzy::FuzzySystem system, double gain = 1.0);

    [[nodiscard]] Kind kind() const noexcept;
    [[nodiscard]] std::string name() const;
    /// True for windows whose value depends on i or v.
    [[nodiscard]] bool uses_excitation() const noexcept;

    /// Window value at state x in [0,1], current i, memristor voltage v.
    [[nodiscard]] double operator()(double x, double i, double v) const;

    using Variant = std::variant<window::None, window::Strukov, window::Joglekar,
                                 window::Biolek, window::Prodromakis, window::Fuzzy>;
    [[nodiscard]] const Variant& variant() const noexcept { return spec_; }

private:
    explicit WindowSpec(Variant v) : spec_(std::move(v)) {}
    Variant spec_ = window::None{};
};

/// Unit step as used by the Biolek window: 1 for u >= 0, else 0.
[[nodiscard]] inline double biolek_step(double u) noexcept { return u >= 0.0 ? 1.0 : 0.0; }

}  // namespace memfuzz
