#pragma once

#include <array>
#include <complex>
#include <optional>
#include <span>
#include <utility>

#include "nanocool/response.hpp"

namespace nanocool {

// Hybridized optical/mechanical resonances extracted from the quadratic
// expansion of the characteristic polynomial around the bare mechanical root.
struct HybridModes {
    double omega_m1 = 0.0;  // rad/s
    double omega_m2 = 0.0;  // rad/s
    double gamma_1 = 0.0;   // rad/s, energy decay (positive for stable modes)
    double gamma_2 = 0.0;   // rad/s
    std::complex<double> s0;
    std::complex<double> s1;
    std::complex<double> s2;
};

struct Stability {
    bool stable = false;
    double max_re = 0.0;  // rad/s, largest eigenvalue real part
};

struct CoolingResult {
    double gamma_opt_sl = 0.0;        // rad/s
    double gamma_eff_dl = 0.0;        // rad/s (NaN when modes are degenerate)
    double gamma_eff_exact = 0.0;     // rad/s
    double gamma_eff_lyapunov = 0.0;  // rad/s
    double c1 = 0.0;
    double c2 = 0.0;
    bool stable = false;
    bool dl_degenerate = false;
    HybridModes modes;
};

// Weak-coupling optical cooling rate 2 g^2 Re[chi_o(omega_m) - chi_o*(-omega_m)].
double gamma_opt_sl(const Equilibrium& eq, const SystemParams& params);

// Same rate in the closed form valid for negligible cavity-2 decay;
// diagnostic companion to gamma_opt_sl.
double gamma_opt_sl_kappa2_zero(const Equilibrium& eq, const SystemParams& params);

// Detunings optimizing the anti-Stokes rate. Each pair holds the two branches
// -d/2 +- sqrt(d^2/4 + mu^2), with the extra -omega_m shift for the
// denominator condition. joint carries (d*, delta_tilde1*) solving both
// conditions at once, or nothing when 2 mu > omega_m.
struct OptimalDetunings {
    std::array<double, 2> denominator_min{};
    std::array<double, 2> numerator_max{};
    std::optional<std::pair<double, double>> joint;
};
OptimalDetunings optimal_detunings(double mu, double d, double omega_m);

// Coefficients (ascending powers) of the degree-6 characteristic polynomial
// m (s^2 + gamma_m s + omega_m^2) R(s) + T(s) of the linearized dynamics.
std::array<double, 7> char_poly(const Equilibrium& eq, const SystemParams& params);

// Second-order expansion of P around s0 = -i omega_m - gamma_m / 2; returns
// the two estimated natural modes. Throws SimError(kDegenerateModes) when the
// peak frequencies are closer than 1% of the summed linewidths (the
// double-Lorentzian fit matrix becomes singular there).
HybridModes taylor_modes(std::span<const double> poly_p, const Equilibrium& eq,
                         const SystemParams& params);

// Matching constants that make the double-Lorentzian lineshape agree with the
// exact spectral density at both hybrid-mode frequencies.
std::pair<double, double> dl_constants(const HybridModes& modes, const Equilibrium& eq,
                                       const SystemParams& params);

// Effective damping obtained by integrating the double-Lorentzian model of
// the displacement spectrum in closed form.
double gamma_eff_dl(const HybridModes& modes, double c1, double c2, const Equilibrium& eq,
                    const SystemParams& params);

// Effective damping from adaptive quadrature of the exact spectrum,
// 2 pi / (m^2 Int (omega_m^2 + omega^2) |chi|^2 domega), with the smooth
// 1/(m^2 W) tail added analytically. Relative tolerance 1e-9.
double gamma_eff_exact(const Equilibrium& eq, const SystemParams& params);

// Variant reusing precomputed drift eigenvalues (hot path for sweeps).
double gamma_eff_exact_from_modes(
    const Equilibrium& eq, const SystemParams& params,
    const Eigen::Matrix<std::complex<double>, 6, 1>& eigenvalues);

// Stable iff every drift eigenvalue has a negative real part.
Stability stability_check(const DriftMatrix& drift);

// One method selector shared by sweeps and the CLI.
enum class Method { kSingleLorentzian, kDoubleLorentzian, kExact };
const char* method_name(Method method);

// Net optical cooling rate (gamma_eff - gamma_m for DL/exact) for one
// parameter point; not-stable points report stable = false and a NaN rate.
struct MethodEval {
    double gamma_opt = 0.0;
    bool stable = false;
    double g = 0.0;  // coupling strength at that point
};
MethodEval evaluate_gamma_opt(const SystemParams& params, Method method);

// Full per-point record (all three rates plus the Lyapunov cross-check).
CoolingResult compute_cooling(const SystemParams& params);

}  // namespace nanocool
