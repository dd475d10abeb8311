#include "memfuzz/fuzzy.hpp"

#include "memfuzz/errors.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace memfuzz::fuzzy {

namespace {

bool finite(double v) { return std::isfinite(v); }

}  // namespace

// =============================================================================
// MembershipFunction
// =============================================================================

MembershipFunction MembershipFunction::triangular(double a, double b, double c) {
    if (!finite(a) || !finite(b) || !finite(c) || !(a <= b && b <= c)) {
        throw ConfigError("triangular membership requires finite a <= b <= c");
    }
    return {Kind::Triangular, a, b, b, c};
}

MembershipFunction MembershipFunction::trapezoidal(double a, double b, double c, double d) {
    if (!finite(a) || !finite(b) || !finite(c) || !finite(d) || !(a <= b && b <= c && c <= d)) {
        throw ConfigError("trapezoidal membership requires finite a <= b <= c <= d");
    }
    return {Kind::Trapezoidal, a, b, c, d};
}

std::vector<double> MembershipFunction::breakpoints() const {
    if (kind_ == Kind::Triangular) return {a_, b_, d_};
    return {a_, b_, c_, d_};
}

// =============================================================================
// LinguisticVariable
// =============================================================================

LinguisticVariable::LinguisticVariable(std::string name, double lo, double hi,
                                       std::vector<Term> terms)
    : name_(std::move(name)), lo_(lo), hi_(hi), terms_(std::move(terms)) {
    if (name_.empty()) throw ConfigError("linguistic variable needs a name");
    if (!finite(lo_) || !finite(hi_) || !(lo_ < hi_)) {
        throw ConfigError("variable '" + name_ + "': universe requires lo < hi");
    }
    if (terms_.empty()) throw ConfigError("variable '" + name_ + "' has no terms");
    std::set<std::string> seen;
    for (const auto& t : terms_) {
        if (t.label.empty()) throw ConfigError("variable '" + name_ + "' has an unlabeled term");
        if (!seen.insert(t.label).second) {
            throw ConfigError("variable '" + name_ + "': duplicate term '" + t.label + "'");
        }
        if (t.mf.support_lo() < lo_ || t.mf.support_hi() > hi_) {
            throw ConfigError("variable '" + name_ + "': term '" + t.label +
                              "' extends outside the universe");
        }
    }
}

int LinguisticVariable::find_term(const std::string& label) const noexcept {
    for (std::size_t k = 0; k < terms_.size(); ++k) {
        if (terms_[k].label == label) return static_cast<int>(k);
    }
    return -1;
}

double LinguisticVariable::clamp(double u) const noexcept { return std::clamp(u, lo_, hi_); }

// =============================================================================
// FuzzySystem
// =============================================================================

FuzzySystem::FuzzySystem(std::vector<LinguisticVariable> inputs, LinguisticVariable output,
                         std::vector<Rule> rules, std::size_t defuzz_resolution)
    : inputs_(std::move(inputs)),
      output_(std::move(output)),
      rules_(std::move(rules)),
      resolution_(defuzz_resolution) {
    if (inputs_.empty()) throw ConfigError("fuzzy system needs at least one input");
    std::set<std::string> names;
    for (const auto& v : inputs_) {
        if (!names.insert(v.name()).second) {
            throw ConfigError("duplicate input variable '" + v.name() + "'");
        }
    }
    if (rules_.empty()) throw ConfigError("fuzzy system needs at least one rule");
    if (resolution_ < kMinResolution) {
        throw ConfigError("defuzzification resolution must be >= " +
                          std::to_string(kMinResolution));
    }

    compiled_.reserve(rules_.size());
    for (const auto& r : rules_) compiled_.push_back(compile(r));

    grid_.resize(resolution_);
    const double span = output_.hi() - output_.lo();
    const double last = static_cast<double>(resolution_ - 1);
    for (std::size_t k = 0; k < resolution_; ++k) {
        grid_[k] = output_.lo() + span * (static_cast<double>(k) / last);
    }
    grid_.back() = output_.hi();

    consequent_samples_.reserve(output_.terms().size());
    for (const auto& term : output_.terms()) {
        std::vector<double> row(resolution_);
        for (std::size_t k = 0; k < resolution_; ++k) row[k] = term.mf(grid_[k]);
        consequent_samples_.push_back(std::move(row));
    }
}

FuzzySystem::CompiledRule FuzzySystem::compile(const Rule& rule) const {
    if (rule.antecedents.empty()) throw ConfigError("rule without antecedents");
    if (!(rule.weight > 0.0 && rule.weight <= 1.0)) {
        throw ConfigError("rule weight must lie in (0, 1]");
    }
    CompiledRule c;
    for (const auto& a : rule.antecedents) {
        const int vi = find_input(a.variable);
        if (vi < 0) throw ConfigError("rule references unknown input '" + a.variable + "'");
        const int ti = inputs_[vi].find_term(a.term);
        if (ti < 0) {
            throw ConfigError("rule references unknown term '" + a.term + "' of input '" +
                              a.variable + "'");
        }
        c.antecedents.emplace_back(static_cast<std::size_t>(vi), static_cast<std::size_t>(ti));
    }
    const int oi = output_.find_term(rule.consequent);
    if (oi < 0) {
        throw ConfigError("rule references unknown output term '" + rule.consequent + "'");
    }
    c.consequent = static_cast<std::size_t>(oi);
    c.weight = rule.weight;
    return c;
}

int FuzzySystem::find_input(const std::string& name) const noexcept {
    for (std::size_t k = 0; k < inputs_.size(); ++k) {
        if (inputs_[k].name() == name) return static_cast<int>(k);
    }
    return -1;
}

FuzzySystem FuzzySystem::with_resolution(std::size_t defuzz_resolution) const {
    return FuzzySystem(inputs_, output_, rules_, defuzz_resolution);
}

Inference FuzzySystem::infer(std::span<const double> inputs) const {
    if (inputs.size() != inputs_.size()) {
        throw ConfigError("expected " + std::to_string(inputs_.size()) + " crisp inputs");
    }

    // Clipping each consequent at the max strength of the rules that share it
    // is pointwise identical to max-aggregating every clipped rule shape.
    std::vector<double> clip(output_.terms().size(), 0.0);
    for (const auto& r : compiled_) {
        double s = 1.0;
        for (const auto& [vi, ti] : r.antecedents) {
            const auto& var = inputs_[vi];
            s = std::min(s, var.terms()[ti].mf(var.clamp(inputs[vi])));
        }
        s *= r.weight;
        clip[r.consequent] = std::max(clip[r.consequent], s);
    }

    double num = 0.0;
    double den = 0.0;
    for (std::size_t k = 0; k < resolution_; ++k) {
        double mu = 0.0;
        for (std::size_t t = 0; t < clip.size(); ++t) {
            mu = std::max(mu, std::min(clip[t], consequent_samples_[t][k]));
        }
        num += grid_[k] * mu;
        den += mu;
    }
    if (den <= 0.0) return {0.5 * (output_.lo() + output_.hi()), true};
    return {std::clamp(num / den, output_.lo(), output_.hi()), false};
}

double FuzzySystem::evaluate(const std::map<std::string, double>& inputs) const {
    std::vector<double> ordered(inputs_.size());
    for (std::size_t k = 0; k < inputs_.size(); ++k) {
        auto it = inputs.find(inputs_[k].name());
        if (it == inputs.end()) {
            throw ConfigError("missing crisp input '" + inputs_[k].name() + "'");
        }
        ordered[k] = it->second;
    }
    return infer(ordered).value;
}

double FuzzySystem::fire_strength(const Rule& rule,
                                  const std::map<std::string, double>& inputs) const {
    const CompiledRule c = compile(rule);
    double s = 1.0;
    for (const auto& [vi, ti] : c.antecedents) {
        const auto& var = inputs_[vi];
        auto it = inputs.find(var.name());
        if (it == inputs.end()) throw ConfigError("missing crisp input '" + var.name() + "'");
        s = std::min(s, var.terms()[ti].mf(var.clamp(it->second)));
    }
    return s * c.weight;
}

}  // namespace memfuzz::fuzzy
