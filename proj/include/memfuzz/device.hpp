#pragma once

#include "memfuzz/window.hpp"

namespace memfuzz {

/// Memristor constants. `k` is the aggregate drift gain mu_v * R_on / D^2
/// in 1/(A s); the state x = w/D is dimensionless.
struct DeviceParams {
    double r_on = 100.0;
    double r_off = 16000.0;
    double k = 1.0e4;
    double x_init = 0.0;

    /// Throws ConfigError unless 0 < r_on < r_off, k > 0 and x_init in [0,1].
    void validate() const;
};

struct DeviceState {
    double x = 0.0;
};

/// R(x) = r_on x + r_off (1 - x).
[[nodiscard]] inline double memristance(const DeviceParams& p, double x) noexcept {
    return p.r_on * x + p.r_off * (1.0 - x);
}

/// Inverse of memristance(); throws std::domain_error outside [r_on, r_off].
[[nodiscard]] double x_from_resistance(const DeviceParams& p, double r);

/// dx/dt = k i f(x, i, v).
[[nodiscard]] inline double state_derivative(const DeviceParams& p, double x, double i, double v,
                                             const WindowSpec& window) {
    return p.k * i * window(x, i, v);
}

/// One forward-Euler step, clamped to [0,1].
[[nodiscard]] DeviceState step(const DeviceParams& p, DeviceState s, double i, double v,
                               const WindowSpec& window, double dt);

}  // namespace memfuzz
