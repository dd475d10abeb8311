#include "memfuzz/window.hpp"

#include "memfuzz/errors.hpp"

#include <cmath>

namespace memfuzz {

using fuzzy::FuzzySystem;
using fuzzy::LinguisticVariable;
using fuzzy::MembershipFunction;
using fuzzy::Rule;

namespace {

// Ruspini partition shared by the state input and the output.
LinguisticVariable unit_partition(const std::string& name) {
    return LinguisticVariable(name, 0.0, 1.0,
                              {{"Z", MembershipFunction::triangular(0.0, 0.0, 0.5)},
                               {"M", MembershipFunction::triangular(0.0, 0.5, 1.0)},
                               {"L", MembershipFunction::triangular(0.5, 1.0, 1.0)}});
}

std::vector<Rule> six_rules(const std::string& excitation) {
    auto rule = [&](const char* e, const char* x, const char* f) {
        return Rule{{{excitation, e}, {"X", x}}, f, 1.0};
    };
    return {rule("N", "Z", "Z"), rule("N", "M", "M"), rule("N", "L", "L"),
            rule("P", "Z", "L"), rule("P", "M", "M"), rule("P", "L", "Z")};
}

WindowSpec::Variant make_fuzzy(FuzzySystem system, double gain, bool threshold) {
    const std::string excitation = threshold ? "V" : "I";
    const std::string kind = threshold ? "fuzzy_threshold" : "fuzzy";
    if (!(gain > 0.0) || !std::isfinite(gain)) {
        throw ConfigError(kind + " window: gain must be > 0");
    }
    const int ei = system.find_input(excitation);
    const int xi = system.find_input("X");
    if (ei < 0 || xi < 0 || system.inputs().size() != 2) {
        throw ConfigError(kind + " window: system must have exactly the inputs '" + excitation +
                          "' and 'X'");
    }
    if (system.output().lo() != 0.0 || system.output().hi() != 1.0) {
        throw ConfigError(kind + " window: output universe must be [0, 1]");
    }
    window::Fuzzy w;
    w.system = std::make_shared<const FuzzySystem>(std::move(system));
    w.gain = gain;
    w.threshold = threshold;
    w.excitation = static_cast<std::size_t>(ei);
    w.state = static_cast<std::size_t>(xi);
    return w;
}

}  // namespace

FuzzySystem default_fuzzy_system() {
    // N and P are complementary ramps over +-1 mA, each 0.5 at i = 0.
    LinguisticVariable current(
        "I", -3e-3, 3e-3,
        {{"N", MembershipFunction::trapezoidal(-3e-3, -3e-3, -1e-3, 1e-3)},
         {"P", MembershipFunction::trapezoidal(-1e-3, 1e-3, 3e-3, 3e-3)}});
    return FuzzySystem({std::move(current), unit_partition("X")}, unit_partition("F"),
                       six_rules("I"));
}

FuzzySystem default_threshold_system() {
    // N and P only start at |v| = 0.2 V, so inside the band the seventh rule
    // fires alone. Its consequent Z is a singleton at 0, which makes the
    // centroid exactly zero there.
    LinguisticVariable voltage(
        "V", -1.0, 1.0,
        {{"N", MembershipFunction::trapezoidal(-1.0, -1.0, -0.25, -0.2)},
         {"Z", MembershipFunction::trapezoidal(-0.25, -0.15, 0.15, 0.25)},
         {"P", MembershipFunction::trapezoidal(0.2, 0.25, 1.0, 1.0)}});
    LinguisticVariable out("F", 0.0, 1.0,
                           {{"Z", MembershipFunction::triangular(0.0, 0.0, 0.0)},
                            {"M", MembershipFunction::triangular(0.0, 0.5, 1.0)},
                            {"L", MembershipFunction::triangular(0.5, 1.0, 1.0)}});
    auto rules = six_rules("V");
    rules.push_back(Rule{{{"V", "Z"}}, "Z", 1.0});
    return FuzzySystem({std::move(voltage), unit_partition("X")}, std::move(out),
                       std::move(rules));
}

// =============================================================================
// WindowSpec
// =============================================================================

WindowSpec WindowSpec::none() { return WindowSpec(window::None{}); }
WindowSpec WindowSpec::strukov() { return WindowSpec(window::Strukov{}); }

WindowSpec WindowSpec::joglekar(int p) {
    if (p < 1) throw ConfigError("joglekar window: p must be a positive integer");
    return WindowSpec(window::Joglekar{p});
}

WindowSpec WindowSpec::biolek(int p) {
    if (p < 1) throw ConfigError("biolek window: p must be a positive integer");
    return WindowSpec(window::Biolek{p});
}

WindowSpec WindowSpec::prodromakis(double p, double j) {
    if (!(p >= 1.0) || !std::isfinite(p)) throw ConfigError("prodromakis window: p must be >= 1");
    if (!(j > 0.0) || !std::isfinite(j)) throw ConfigError("prodromakis window: j must be > 0");
    return WindowSpec(window::Prodromakis{p, j});
}

WindowSpec WindowSpec::fuzzy(FuzzySystem system, double gain) {
    return WindowSpec(make_fuzzy(std::move(system), gain, false));
}

WindowSpec WindowSpec::fuzzy_threshold(FuzzySystem system, double gain) {
    return WindowSpec(make_fuzzy(std::move(system), gain, true));
}

WindowSpec::Kind WindowSpec::kind() const noexcept {
    switch (spec_.index()) {
        case 0: return Kind::None;
        case 1: return Kind::Strukov;
        case 2: return Kind::Joglekar;
        case 3: return Kind::Biolek;
        case 4: return Kind::Prodromakis;
        default:
            return std::get<window::Fuzzy>(spec_).threshold ? Kind::FuzzyThreshold : Kind::Fuzzy;
    }
}

std::string WindowSpec::name() const {
    switch (kind()) {
        case Kind::None: return "none";
        case Kind::Strukov: return "strukov";
        case Kind::Joglekar: return "joglekar";
        case Kind::Biolek: return "biolek";
        case Kind::Prodromakis: return "prodromakis";
        case Kind::Fuzzy: return "fuzzy";
        case Kind::FuzzyThreshold: return "fuzzy_threshold";
    }
    return "unknown";
}

bool WindowSpec::uses_excitation() const noexcept {
    const Kind k = kind();
    return k == Kind::Biolek || k == Kind::Fuzzy || k == Kind::FuzzyThreshold;
}

double WindowSpec::operator()(double x, double i, double v) const {
    struct Visitor {
        double x, i, v;
        double operator()(const window::None&) const { return 1.0; }
        double operator()(const window::Strukov&) const { return x - x * x; }
        double operator()(const window::Joglekar& w) const {
            return 1.0 - std::pow(2.0 * x - 1.0, 2 * w.p);
        }
        double operator()(const window::Biolek& w) const {
            return 1.0 - std::pow(x - biolek_step(-i), 2 * w.p);
        }
        double operator()(const window::Prodromakis& w) const {
            const double d = x - 0.5;
            return w.j * (1.0 - std::pow(d * d + 0.75, w.p));
        }
        double operator()(const window::Fuzzy& w) const {
            double in[2];
            in[w.excitation] = w.threshold ? v : i;
            in[w.state] = x;
            return w.gain * w.system->evaluate(in);
        }
    };
    return std::visit(Visitor{x, i, v}, spec_);
}

}  // namespace memfuzz
