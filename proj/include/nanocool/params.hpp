#pragma once

#include "nanocool/constants.hpp"

namespace nanocool {

// How the equilibrium position of the sphere is fixed.
//   kDirect:         cos(2 k1 x0) is prescribed; the trap position that
//                    realizes it is implied.
//   kSelfConsistent: the trap position x_trap is prescribed; x0 follows from
//                    the force balance against radiation pressure.
enum class PositionMode { kDirect, kSelfConsistent };

// Physical constants and drive settings of the coupled-cavity system.
// All rates and frequencies are angular (rad/s); one unit convention is used
// everywhere (see README). Immutable after validate(); safe to copy across
// threads.
struct SystemParams {
    double mass = 9.2e-18;             // kg
    double kappa1 = 6e5;               // rad/s, total decay rate of cavity 1
    double kappa2 = 1e3;               // rad/s, total decay rate of cavity 2
    double kappa_ex1_fraction = 0.5;   // kappa_ex1 / kappa1, in (0,1]
    double omega_trap = 2e6;           // rad/s, mechanical trap frequency
    double shift_amplitude = 1e5;      // rad/s, resonance-shift amplitude A
    double k1 = 3e6;                   // 1/m, cavity-1 wavenumber
    double gamma_m = 1e-3;             // rad/s, mechanical damping
    double mu = 0.0;                   // rad/s, intercavity coupling (>= 0)
    double delta_tilde1 = -2e6;        // rad/s, effective detuning of cavity 1
    double d = 0.0;                    // rad/s, detuning offset delta2 - delta_tilde1
    double power = 5e-3;               // W, cooling-laser power
    double omega_laser = 0.0;          // rad/s; 0 means "use c * k1"
    double temperature = 300.0;        // K, bath temperature

    PositionMode position_mode = PositionMode::kDirect;
    double cos_2k1x0 = 0.0;            // Direct mode: prescribed cos(2 k1 x0)
    double x_trap = 0.0;               // SelfConsistent mode: trap position [m]

    double delta2() const { return delta_tilde1 + d; }
    double kappa_ex1() const { return kappa_ex1_fraction * kappa1; }
};

struct DriveStrength {
    double e = 0.0;  // rad/s
};

// Checks every invariant, fills derived defaults (omega_laser), and returns
// the normalized copy. Throws SimError(kInvalidParam) naming the offending
// field.
SystemParams validate(const SystemParams& params);

// E = sqrt(kappa_ex1 * P / (hbar * omega_L)). Expects validated params.
DriveStrength drive_strength(const SystemParams& params);

}  // namespace nanocool
