#pragma once

// =============================================================================
// Minimal Mamdani fuzzy inference engine
// =============================================================================
// Piecewise-linear membership functions, linguistic variables, AND-only rules,
// min implication, max aggregation and discrete centroid defuzzification over
// a uniform grid spanning the output universe.
//
// A FuzzySystem is immutable once built; evaluate() is pure and may be called
// concurrently from any number of threads.
// =============================================================================

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace memfuzz::fuzzy {

/// Trapezoidal membership shape a <= b <= c <= d. Triangles are stored with
/// b == c, shoulders with a == b or c == d at the universe edge.
class MembershipFunction {
public:
    enum class Kind { Triangular, Trapezoidal };

    static MembershipFunction triangular(double a, double b, double c);
    static MembershipFunction trapezoidal(double a, double b, double c, double d);

    /// Piecewise-linear degree in [0,1]. On a vertical edge (equal
    /// breakpoints) the shared point takes the upper value.
    [[nodiscard]] double operator()(double u) const noexcept {
        if (u < a_ || u > d_) return 0.0;
        if (u >= b_ && u <= c_) return 1.0;
        if (u < b_) return (u - a_) / (b_ - a_);
        return (d_ - u) / (d_ - c_);
    }

    [[nodiscard]] Kind kind() const noexcept { return kind_; }
    /// Breakpoints as declared: 3 for triangular, 4 for trapezoidal.
    [[nodiscard]] std::vector<double> breakpoints() const;
    [[nodiscard]] double support_lo() const noexcept { return a_; }
    [[nodiscard]] double support_hi() const noexcept { return d_; }

private:
    MembershipFunction(Kind kind, double a, double b, double c, double d)
        : kind_(kind), a_(a), b_(b), c_(c), d_(d) {}

    Kind kind_;
    double a_, b_, c_, d_;
};

struct Term {
    std::string label;
    MembershipFunction mf;
};

class LinguisticVariable {
public:
    LinguisticVariable(std::string name, double lo, double hi, std::vector<Term> terms);

    [[nodiscard]] const std::string& name() const noexcept { return name_; }
    [[nodiscard]] double lo() const noexcept { return lo_; }
    [[nodiscard]] double hi() const noexcept { return hi_; }
    [[nodiscard]] const std::vector<Term>& terms() const noexcept { return terms_; }

    /// Index of the term with this label, or -1.
    [[nodiscard]] int find_term(const std::string& label) const noexcept;
    [[nodiscard]] double clamp(double u) const noexcept;

private:
    std::string name_;
    double lo_, hi_;
    std::vector<Term> terms_;
};

struct Antecedent {
    std::string variable;
    std::string term;
};

struct Rule {
    std::vector<Antecedent> antecedents;  // joined by AND (min)
    std::string consequent;               // output term label
    double weight = 1.0;
};

/// Result of one inference. `fallback` is set when no rule fired and the
/// value is the output-universe midpoint.
struct Inference {
    double value = 0.0;
    bool fallback = false;
};

class FuzzySystem {
public:
    static constexpr std::size_t kDefaultResolution = 1001;
    static constexpr std::size_t kMinResolution = 101;

    FuzzySystem(std::vector<LinguisticVariable> inputs, LinguisticVariable output,
                std::vector<Rule> rules, std::size_t defuzz_resolution = kDefaultResolution);

    [[nodiscard]] const std::vector<LinguisticVariable>& inputs() const noexcept { return inputs_; }
    [[nodiscard]] const LinguisticVariable& output() const noexcept { return output_; }
    [[nodiscard]] const std::vector<Rule>& rules() const noexcept { return rules_; }
    [[nodiscard]] std::size_t resolution() const noexcept { return resolution_; }

    /// Index of the named input variable, or -1.
    [[nodiscard]] int find_input(const std::string& name) const noexcept;

    /// Same system with a different defuzzification grid.
    [[nodiscard]] FuzzySystem with_resolution(std::size_t defuzz_resolution) const;

    /// Crisp inputs given in declaration order of inputs().
    [[nodiscard]] Inference infer(std::span<const double> inputs) const;
    [[nodiscard]] double evaluate(std::span<const double> inputs) const {
        return infer(inputs).value;
    }

    /// Crisp inputs keyed by variable name. Throws ConfigError when an input
    /// variable is missing.
    [[nodiscard]] double evaluate(const std::map<std::string, double>& inputs) const;

    /// weight * min over antecedent degrees, inputs clamped to their universes.
    [[nodiscard]] double fire_strength(const Rule& rule,
                                       const std::map<std::string, double>& inputs) const;

private:
    struct CompiledRule {
        std::vector<std::pair<std::size_t, std::size_t>> antecedents;  // (input, term)
        std::size_t consequent;
        double weight;
    };

    [[nodiscard]] CompiledRule compile(const Rule& rule) const;

    std::vector<LinguisticVariable> inputs_;
    LinguisticVariable output_;
    std::vector<Rule> rules_;
    std::size_t resolution_;

    std::vector<CompiledRule> compiled_;
    std::vector<double> grid_;
    // Output term memberships sampled on grid_, one row per output term.
    std::vector<std::vector<double>> consequent_samples_;
};

}  // namespace memfuzz::fuzzy
