#pragma once

#include <string>
#include <vector>

#include "nanocool/cooling.hpp"

namespace nanocool::sweep {

// Red-side detuning search: coarse seed grid, then golden-section refinement
// around the best seed.
struct DetuningSearch {
    double lo = 0.0;     // rad/s; 0 means "-3 * omega_trap"
    double hi = 0.0;     // rad/s; 0 means "-0.01 * omega_trap"
    int n_seed = 64;
    double rel_tol = 1e-6;

    double resolved_lo(const SystemParams& p) const { return lo != 0.0 ? lo : -3.0 * p.omega_trap; }
    double resolved_hi(const SystemParams& p) const { return hi != 0.0 ? hi : -0.01 * p.omega_trap; }
};

struct DetuningOptimum {
    double delta_star = 0.0;   // rad/s
    double gamma_star = 0.0;   // rad/s, net optical rate at the optimum
    double g_star = 0.0;       // rad/s, coupling strength at the optimum
};

// Maximizes the method's net cooling rate over delta_tilde1 in [lo, hi]
// (hi <= 0, n_seed >= 32). Unstable points score -inf; throws
// SimError(kAllUnstable) if no seed is stable.
DetuningOptimum maximize_over_detuning(const SystemParams& params, Method method,
                                       const DetuningSearch& search);

enum class Plane { kMuD, kDeltaMu, kDeltaD };
const char* plane_name(Plane plane);

struct AxisSpec {
    std::string name;  // column label, e.g. "mu_rad_s"
    double lo = 0.0;
    double hi = 0.0;
    int n = 0;
    double value(int i) const {
        return (n <= 1) ? lo : lo + (hi - lo) * static_cast<double>(i) / (n - 1);
    }
};

struct SweepCell {
    double axis1 = 0.0;
    double axis2 = 0.0;
    double gamma_sl = 0.0;
    double gamma_dl = 0.0;
    double gamma_exact = 0.0;
    double gamma_norm = 0.0;
    double delta_star = 0.0;
    bool stable = false;
};

struct SweepGrid {
    Plane plane{};
    AxisSpec axis1, axis2;
    std::vector<SweepCell> cells;  // row-major, axis1 outer
    double reference = 0.0;        // single-cavity optimum the grid is normalized to
    std::vector<Method> methods;
};

// Default axes resolving the optimum-detuning ridge.
AxisSpec default_axis1(Plane plane, const SystemParams& params);
AxisSpec default_axis2(Plane plane, const SystemParams& params);

// Scans the requested plane. In the mu-d plane each cell maximizes over
// delta_tilde1 with the highest-fidelity requested method and reports every
// requested method at that argmax; in the delta planes axis1 is the detuning
// itself. Cells are independent work items distributed over `workers`
// threads; the result is deterministic regardless of worker count.
SweepGrid plane_sweep(const SystemParams& params, Plane plane, const AxisSpec& axis1,
                      const AxisSpec& axis2, const std::vector<Method>& methods,
                      const DetuningSearch& search, int workers);

struct PowerPoint {
    double power = 0.0;          // W
    double mu = 0.0;             // rad/s
    double gamma_max = 0.0;      // rad/s, maximized net cooling rate (exact)
    double g_over_kappa1 = 0.0;  // coupling at the optimum / kappa1
    double delta_star = 0.0;     // rad/s
    double d = 0.0;              // rad/s, offset used for this mu
    bool ok = false;
};

// Maximum cooling rate versus drive power for each coupling value, with d
// held at the joint-optimum value for that mu.
std::vector<PowerPoint> power_sweep(const SystemParams& params,
                                    const std::vector<double>& powers,
                                    const std::vector<double>& mu_values,
                                    const DetuningSearch& search, int workers);

// Net cooling rate of the decoupled (mu = 0) system maximized over detuning;
// the normalization reference for all plane sweeps.
double single_cavity_reference(const SystemParams& params, const DetuningSearch& search);

}  // namespace nanocool::sweep
