#pragma once

#include <complex>
#include <span>
#include <vector>

#include "nanocool/params.hpp"

namespace nanocool {

// Steady-state solution of the driven coupled-cavity + sphere system.
struct Equilibrium {
    std::complex<double> alpha1;  // cavity-1 field amplitude
    std::complex<double> alpha2;  // cavity-2 field amplitude
    double x0 = 0.0;              // m, equilibrium position
    double delta_tilde1 = 0.0;    // rad/s, effective cavity-1 detuning at x0
    double delta2 = 0.0;          // rad/s, cavity-2 detuning (= delta_tilde1 + d)
    double omega_m = 0.0;         // rad/s, mechanical resonance frequency
    double g0 = 0.0;              // rad/(s m), bare optomechanical coupling
    double g = 0.0;               // rad/s, field-enhanced coupling strength
    double n1 = 0.0;              // photon number |alpha1|^2
    double n2 = 0.0;              // photon number |alpha2|^2
    double cos_2k1x0 = 0.0;
    double sin_2k1x0 = 0.0;
    double drive = 0.0;           // rad/s, drive amplitude E

    // Zero-point scales of the mechanical mode; used to express the
    // fluctuation dynamics in well-conditioned dimensionless quadratures.
    double x_zpf = 0.0;           // m
    double p_zpf = 0.0;           // kg m/s
};

// Solves the equilibrium field and position equations.
//
// Direct mode: cos(2 k1 x0) is the prescribed value, sin(2 k1 x0) is taken
// with the + sign (g enters all observables only squared), and delta_tilde1
// is used as given.
//
// SelfConsistent mode: damped fixed-point iteration (lambda = 0.5) over
// (x0, alpha1) starting from x0 = x_trap; the bare detuning is held fixed at
// the value that makes delta_tilde1 equal params.delta_tilde1 at x_trap, and
// the effective detuning is recomputed from it each pass. Throws
// SimError(kNoConvergence) after 1000 iterations.
Equilibrium solve_equilibrium(const SystemParams& params);

struct PhotonScanPoint {
    double delta_tilde1;
    double n1;
    double n2;
};

// Evaluates the steady photon numbers on a grid of detunings with fixed
// offset d (delta2 tracks delta_tilde1). Direct mode only.
std::vector<PhotonScanPoint> photon_number_scan(const SystemParams& params,
                                                std::span<const double> deltas);

}  // namespace nanocool
