#include "memfuzz/device.hpp"

#include "memfuzz/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace memfuzz {

void DeviceParams::validate() const {
    if (!(r_on > 0.0) || !std::isfinite(r_on)) throw ConfigError("device.r_on must be > 0");
    if (!(r_off > r_on) || !std::isfinite(r_off)) throw ConfigError("device.r_off must exceed r_on");
    if (!(k > 0.0) || !std::isfinite(k)) throw ConfigError("device.k must be > 0");
    if (!(x_init >= 0.0 && x_init <= 1.0)) throw ConfigError("device.x_init must lie in [0, 1]");
}

double x_from_resistance(const DeviceParams& p, double r) {
    if (!(r >= p.r_on && r <= p.r_off)) {
        throw std::domain_error("resistance outside [r_on, r_off]");
    }
    return (p.r_off - r) / (p.r_off - p.r_on);
}

DeviceState step(const DeviceParams& p, DeviceState s, double i, double v,
                 const WindowSpec& window, double dt) {
    const double dx = dt * state_derivative(p, s.x, i, v, window);
    return {std::clamp(s.x + dx, 0.0, 1.0)};
}

}  // namespace memfuzz
