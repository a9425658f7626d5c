#pragma once

#include <cmath>

#include "nanocool/params.hpp"

namespace nanocool::testutil {

// Nanosphere-in-coupled-cavities example set used throughout the tests.
inline SystemParams base_params() {
    SystemParams p;
    p.mass = 9.2e-18;
    p.kappa1 = 6e5;
    p.kappa2 = 1e3;
    p.kappa_ex1_fraction = 0.5;
    p.omega_trap = 2e6;
    p.shift_amplitude = 1e5;
    p.k1 = 3e6;
    p.gamma_m = 1e-3;
    p.mu = 0.0;
    p.delta_tilde1 = -2e6;
    p.d = 0.0;
    p.power = 5e-3;
    p.omega_laser = 0.0;  // filled by validate()
    p.temperature = 300.0;
    p.position_mode = PositionMode::kDirect;
    p.cos_2k1x0 = 0.0;
    return validate(p);
}

// Coupled configuration at the joint-optimum detunings for mu = 0.25 w_t.
inline SystemParams coupled_optimum_params() {
    SystemParams p = base_params();
    p.mu = 0.25 * p.omega_trap;
    const double wm = p.omega_trap;
    const double d_star = std::sqrt(wm * wm - 4.0 * p.mu * p.mu);
    p.d = d_star;
    p.delta_tilde1 = -(wm + d_star) / 2.0;
    return validate(p);
}

inline double rel_diff(double a, double b) {
    return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}

}  // namespace nanocool::testutil
