#pragma once

#include <Eigen/Dense>
#include <complex>
#include <span>
#include <vector>

#include "nanocool/steady_state.hpp"

namespace nanocool {

// Precomputed coefficients of the linearized dynamics; cheap to copy and
// evaluate on frequency grids.
struct LinearResponse {
    double half_kappa1 = 0.0;
    double half_kappa2 = 0.0;
    double delta_tilde1 = 0.0;
    double delta2 = 0.0;
    double mu_sq = 0.0;
    double mass = 0.0;
    double omega_m = 0.0;
    double gamma_m = 0.0;
    double coupling = 0.0;  // 2 m omega_m g^2
    double thermal_force = 0.0;  // 2 m gamma_m k_B T

    static LinearResponse make(const Equilibrium& eq, const SystemParams& params);

    // Cavity response to displacement at fluctuation frequency omega.
    std::complex<double> chi_o(double omega) const;
    // Denominator of the mechanical response.
    std::complex<double> chi_denominator(double omega) const;
    std::complex<double> chi(double omega) const;
    // |chi(omega)|^2 without forming the complex quotient.
    double abs_chi_sq(double omega) const;
};

struct ResponseEval {
    double omega = 0.0;                  // rad/s
    std::complex<double> chi_o;          // s
    std::complex<double> chi;            // s^2/kg
    double s_xx = 0.0;                   // m^2 s
};

std::complex<double> chi_o(const Equilibrium& eq, const SystemParams& params, double omega);
std::complex<double> chi(const Equilibrium& eq, const SystemParams& params, double omega);

// Displacement spectral density 2 m gamma_m k_B T |chi|^2. Requires a stable
// system; throws SimError(kUnstableSystem) otherwise.
double s_xx(const Equilibrium& eq, const SystemParams& params, double omega);

// Grid evaluation with a single stability check.
std::vector<ResponseEval> response_scan(const Equilibrium& eq, const SystemParams& params,
                                        std::span<const double> omegas);

enum class PsdForm { kSingleLorentzian, kDoubleLorentzian };

// Closed-form lineshape approximations of s_xx. The single-Lorentzian form
// uses the weak-coupling optical damping; the double-Lorentzian form uses the
// hybrid-mode frequencies/decays and matching constants. Throws
// SimError(kDegenerateModes) when the two hybrid modes cannot be separated.
double approx_psd(const Equilibrium& eq, const SystemParams& params, double omega, PsdForm form);

// Lineshape kernels with explicit parameters (numerator / ((w^2-wr^2)^2 + (w G)^2)).
double lorentzian_psd(double numerator, double omega, double omega_r, double gamma);

// Real first-order form of the fluctuation dynamics.
// State order: (Re a1, Im a1, Re a2, Im a2, x, p).
//   a      - SI convention (x in m, p in kg m/s)
//   scaled - x, p expressed in zero-point units; same spectrum, entries all
//            of order rad/s, suitable for eigen and Lyapunov computations.
// alpha1_phase rotates the equilibrium field gauge away from the default
// "alpha1 real and >= 0" choice; observables must not depend on it.
struct DriftMatrix {
    Eigen::Matrix<double, 6, 6> a;
    Eigen::Matrix<double, 6, 6> scaled;
    double x_zpf = 0.0;
    double p_zpf = 0.0;
};

DriftMatrix drift_matrix(const Equilibrium& eq, const SystemParams& params,
                         double alpha1_phase = 0.0);

// Eigenvalues of the drift matrix (computed from the scaled form).
Eigen::Matrix<std::complex<double>, 6, 1> drift_eigenvalues(const DriftMatrix& drift);

}  // namespace nanocool
