#include "nanocool/params.hpp"

#include <cmath>
#include <string>

#include "nanocool/errors.hpp"

namespace nanocool {

namespace {

[[noreturn]] void fail(const std::string& name, const std::string& reason) {
    throw SimError(ErrorKind::kInvalidParam, "invalid parameter '" + name + "': " + reason,
                   {{"param", name}, {"reason", reason}});
}

void require_finite(const char* name, double value) {
    if (!std::isfinite(value)) fail(name, "must be finite");
}

}  // namespace

SystemParams validate(const SystemParams& params) {
    SystemParams p = params;

    require_finite("mass_kg", p.mass);
    if (p.mass <= 0) fail("mass_kg", "must be > 0");
    require_finite("kappa1_rad_s", p.kappa1);
    if (p.kappa1 <= 0) fail("kappa1_rad_s", "must be > 0");
    require_finite("kappa2_rad_s", p.kappa2);
    if (p.kappa2 < 0) fail("kappa2_rad_s", "must be >= 0");
    require_finite("kappa_ex1_fraction", p.kappa_ex1_fraction);
    if (!(p.kappa_ex1_fraction > 0 && p.kappa_ex1_fraction <= 1))
        fail("kappa_ex1_fraction", "must be in (0, 1]");
    require_finite("omega_trap_rad_s", p.omega_trap);
    if (p.omega_trap <= 0) fail("omega_trap_rad_s", "must be > 0");
    require_finite("shift_amplitude_rad_s", p.shift_amplitude);
    require_finite("k1_per_m", p.k1);
    if (p.k1 <= 0) fail("k1_per_m", "must be > 0");
    require_finite("gamma_m_rad_s", p.gamma_m);
    if (p.gamma_m <= 0) fail("gamma_m_rad_s", "must be > 0");
    require_finite("mu_rad_s", p.mu);
    if (p.mu < 0) fail("mu_rad_s", "must be >= 0 (a phase on mu is a gauge choice)");
    require_finite("delta_tilde1_rad_s", p.delta_tilde1);
    require_finite("d_rad_s", p.d);
    require_finite("power_w", p.power);
    if (p.power < 0) fail("power_w", "must be >= 0");
    require_finite("temperature_k", p.temperature);
    if (p.temperature <= 0) fail("temperature_k", "must be > 0");

    if (p.omega_laser == 0.0) p.omega_laser = consts::c_light * p.k1;
    require_finite("omega_laser_rad_s", p.omega_laser);
    if (p.omega_laser <= 0) fail("omega_laser_rad_s", "must be > 0");

    if (p.position_mode == PositionMode::kDirect) {
        require_finite("cos2k1x0", p.cos_2k1x0);
        if (std::abs(p.cos_2k1x0) > 1.0) fail("cos2k1x0", "must lie in [-1, 1]");
    } else {
        require_finite("x_trap_m", p.x_trap);
    }

    return p;
}

DriveStrength drive_strength(const SystemParams& params) {
    const double e2 = params.kappa_ex1() * params.power / (consts::hbar * params.omega_laser);
    return DriveStrength{std::sqrt(e2)};
}

}  // namespace nanocool
