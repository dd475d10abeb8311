#include "memfuzz/sim.hpp"

#include "memfuzz/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace memfuzz {

// =============================================================================
// Waveforms
// =============================================================================

void validate(const Waveform& w) {
    if (const auto* s = std::get_if<waveform::Sine>(&w)) {
        if (!(s->frequency > 0.0) || !std::isfinite(s->frequency)) {
            throw ConfigError("source.frequency must be > 0");
        }
        if (!std::isfinite(s->amplitude) || !std::isfinite(s->phase) ||
            !std::isfinite(s->offset)) {
            throw ConfigError("source: sine parameters must be finite");
        }
    } else if (const auto* c = std::get_if<waveform::Constant>(&w)) {
        if (!std::isfinite(c->level)) throw ConfigError("source.level must be finite");
    } else {
        const auto& pts = std::get<waveform::Piecewise>(w).points;
        if (pts.empty()) throw ConfigError("source.points must not be empty");
        for (std::size_t k = 1; k < pts.size(); ++k) {
            if (!(pts[k].first > pts[k - 1].first)) {
                throw ConfigError("source.points must be strictly increasing in t");
            }
        }
    }
}

double waveform_eval(const Waveform& w, double t) {
    struct Visitor {
        double t;
        double operator()(const waveform::Sine& s) const {
            return s.offset + s.amplitude * std::sin(2.0 * std::numbers::pi * s.frequency * t + s.phase);
        }
        double operator()(const waveform::Constant& c) const { return c.level; }
        double operator()(const waveform::Piecewise& p) const {
            const auto& pts = p.points;
            if (t <= pts.front().first) return pts.front().second;
            if (t >= pts.back().first) return pts.back().second;
            auto hi = std::upper_bound(pts.begin(), pts.end(), t,
                                       [](double v, const auto& pt) { return v < pt.first; });
            auto lo = hi - 1;
            const double a = (t - lo->first) / (hi->first - lo->first);
            return lo->second + a * (hi->second - lo->second);
        }
    };
    return std::visit(Visitor{t}, w);
}

// =============================================================================
// Circuit
// =============================================================================

void CircuitConfig::validate() const {
    memfuzz::validate(source);
    device.validate();
    if (!(series_resistance >= 0.0) || !std::isfinite(series_resistance)) {
        throw ConfigError("series_resistance must be >= 0");
    }
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("dt must be > 0");
    if (!(duration >= dt) || !std::isfinite(duration)) throw ConfigError("duration must be >= dt");
    if (duration / dt > kMaxSteps) throw ConfigError("duration/dt exceeds 1e8 steps");
}

std::size_t CircuitConfig::steps() const {
    return static_cast<std::size_t>(std::llround(duration / dt));
}

std::vector<SimRecord> simulate(const CircuitConfig& cfg) {
    cfg.validate();
    const std::size_t n_steps = cfg.steps();
    std::vector<SimRecord> out;
    out.reserve(n_steps + 1);

    DeviceState state{cfg.device.x_init};
    for (std::size_t n = 0; n <= n_steps; ++n) {
        const double t = static_cast<double>(n) * cfg.dt;
        const double v_src = waveform_eval(cfg.source, t);
        const double r = memristance(cfg.device, state.x);
        const double i = v_src / (r + cfg.series_resistance);
        const double v_mem = i * r;
        const double f = cfg.window(state.x, i, v_mem);
        out.push_back({t, v_src, i, v_mem, state.x, r, f});
        state.x = std::clamp(state.x + cfg.dt * cfg.device.k * i * f, 0.0, 1.0);
    }
    return out;
}

// =============================================================================
// Analysis
// =============================================================================

RunSummary summarize(const std::vector<SimRecord>& records) {
    if (records.empty()) throw std::domain_error("summarize: empty record list");
    RunSummary s;
    s.x_min = s.x_max = records.front().x;
    s.r_first = records.front().r;
    s.x_final = records.back().x;

    const SimRecord* last_nonzero = nullptr;
    for (const auto& rec : records) {
        s.x_min = std::min(s.x_min, rec.x);
        s.x_max = std::max(s.x_max, rec.x);
        s.max_abs_dR = std::max(s.max_abs_dR, std::abs(rec.r - s.r_first));
        if (rec.v_src == 0.0) continue;
        if (last_nonzero && (last_nonzero->v_src > 0.0) != (rec.v_src > 0.0)) {
            const double a = -last_nonzero->v_src / (rec.v_src - last_nonzero->v_src);
            s.r_at_zero_crossings.push_back(last_nonzero->r + a * (rec.r - last_nonzero->r));
        }
        last_nonzero = &rec;
    }
    s.saturated = s.x_max >= 0.99 || s.x_min <= 0.01;
    return s;
}

bool pinch_check(const std::vector<SimRecord>& records, double v_eps, double r_on) {
    const double i_bound = v_eps / r_on;
    return std::all_of(records.begin(), records.end(), [&](const SimRecord& r) {
        return std::abs(r.v_mem) > v_eps || std::abs(r.i) <= i_bound;
    });
}

LobeAreas hysteresis_lobe_area(const std::vector<SimRecord>& records) {
    if (records.size() < 3) throw std::domain_error("hysteresis_lobe_area: fewer than 3 records");
    LobeAreas areas;
    double acc = 0.0;
    int sign = 0;
    const SimRecord* prev = nullptr;

    auto close_run = [&] {
        if (sign > 0) areas.positive += 0.5 * std::abs(acc);
        if (sign < 0) areas.negative += 0.5 * std::abs(acc);
        acc = 0.0;
        sign = 0;
        prev = nullptr;
    };

    for (const auto& rec : records) {
        const int s = rec.v_mem > 0.0 ? 1 : (rec.v_mem < 0.0 ? -1 : 0);
        if (s != sign) close_run();
        if (s == 0) continue;
        // The closing edges through the origin contribute nothing to the sum.
        if (prev) acc += prev->v_mem * rec.i - rec.v_mem * prev->i;
        sign = s;
        prev = &rec;
    }
    close_run();
    return areas;
}

}  // namespace memfuzz
