#include "nanocool/response.hpp"

#include <cmath>

#include "nanocool/constants.hpp"
#include "nanocool/cooling.hpp"
#include "nanocool/errors.hpp"
#include "nanocool/io_util.hpp"

namespace nanocool {

using std::complex;

LinearResponse LinearResponse::make(const Equilibrium& eq, const SystemParams& params) {
    LinearResponse lr;
    lr.half_kappa1 = params.kappa1 / 2.0;
    lr.half_kappa2 = params.kappa2 / 2.0;
    lr.delta_tilde1 = eq.delta_tilde1;
    lr.delta2 = eq.delta2;
    lr.mu_sq = params.mu * params.mu;
    lr.mass = params.mass;
    lr.omega_m = eq.omega_m;
    lr.gamma_m = params.gamma_m;
    lr.coupling = 2.0 * params.mass * eq.omega_m * eq.g * eq.g;
    lr.thermal_force = 2.0 * params.mass * params.gamma_m * consts::k_boltzmann * params.temperature;
    return lr;
}

complex<double> LinearResponse::chi_o(double omega) const {
    complex<double> den(half_kappa1, -(omega + delta_tilde1));
    if (mu_sq != 0.0) {
        const double re2 = half_kappa2;
        const double im2 = -(omega + delta2);
        const double n2 = re2 * re2 + im2 * im2;
        if (n2 == 0.0) return {0.0, 0.0};  // cavity-2 term diverges, response vanishes
        den += complex<double>(mu_sq * re2 / n2, -mu_sq * im2 / n2);
    }
    return 1.0 / den;
}

complex<double> LinearResponse::chi_denominator(double omega) const {
    // (omega_m^2 - omega^2) computed as a product to stay accurate across the
    // narrow mechanical resonance.
    const double detune = (omega_m - omega) * (omega_m + omega);
    const complex<double> bare(mass * detune, -mass * omega * gamma_m);
    const complex<double> sideband = chi_o(omega) - std::conj(chi_o(-omega));
    return bare - complex<double>(0.0, coupling) * sideband;
}

complex<double> LinearResponse::chi(double omega) const {
    return 1.0 / chi_denominator(omega);
}

double LinearResponse::abs_chi_sq(double omega) const {
    return 1.0 / std::norm(chi_denominator(omega));
}

complex<double> chi_o(const Equilibrium& eq, const SystemParams& params, double omega) {
    return LinearResponse::make(eq, params).chi_o(omega);
}

complex<double> chi(const Equilibrium& eq, const SystemParams& params, double omega) {
    return LinearResponse::make(eq, params).chi(omega);
}

double s_xx(const Equilibrium& eq, const SystemParams& params, double omega) {
    const Stability st = stability_check(drift_matrix(eq, params));
    if (!st.stable) {
        throw SimError(ErrorKind::kUnstableSystem,
                       "spectral density is undefined for an unstable system",
                       {{"max_re_rad_s", format_double(st.max_re)}});
    }
    const LinearResponse lr = LinearResponse::make(eq, params);
    return lr.thermal_force * lr.abs_chi_sq(omega);
}

std::vector<ResponseEval> response_scan(const Equilibrium& eq, const SystemParams& params,
                                        std::span<const double> omegas) {
    const Stability st = stability_check(drift_matrix(eq, params));
    if (!st.stable) {
        throw SimError(ErrorKind::kUnstableSystem,
                       "spectral density is undefined for an unstable system",
                       {{"max_re_rad_s", format_double(st.max_re)}});
    }
    const LinearResponse lr = LinearResponse::make(eq, params);
    std::vector<ResponseEval> out;
    out.reserve(omegas.size());
    for (double w : omegas) {
        ResponseEval ev;
        ev.omega = w;
        ev.chi_o = lr.chi_o(w);
        ev.chi = lr.chi(w);
        ev.s_xx = lr.thermal_force * std::norm(ev.chi);
        out.push_back(ev);
    }
    return out;
}

double lorentzian_psd(double numerator, double omega, double omega_r, double gamma) {
    const double detune = (omega_r - omega) * (omega_r + omega);
    return numerator / (detune * detune + omega * gamma * omega * gamma);
}

double approx_psd(const Equilibrium& eq, const SystemParams& params, double omega, PsdForm form) {
    const LinearResponse lr = LinearResponse::make(eq, params);
    if (form == PsdForm::kSingleLorentzian) {
        const double gamma = params.gamma_m + gamma_opt_sl(eq, params);
        const double numerator = 2.0 * params.gamma_m * consts::k_boltzmann * params.temperature / params.mass;
        return lorentzian_psd(numerator, omega, eq.omega_m, gamma);
    }
    const auto p = char_poly(eq, params);
    const HybridModes modes = taylor_modes(p, eq, params);
    const auto [c1, c2] = dl_constants(modes, eq, params);
    return lorentzian_psd(c1, omega, modes.omega_m1, modes.gamma_1) +
           lorentzian_psd(c2, omega, modes.omega_m2, modes.gamma_2);
}

DriftMatrix drift_matrix(const Equilibrium& eq, const SystemParams& params, double alpha1_phase) {
    const double amp = std::abs(eq.alpha1);
    const double cphi = std::cos(alpha1_phase);
    const double sphi = std::sin(alpha1_phase);
    const double g0a = eq.g0 * amp;
    const double m = params.mass;
    const double wm = eq.omega_m;

    DriftMatrix out;
    out.x_zpf = eq.x_zpf;
    out.p_zpf = eq.p_zpf;

    Eigen::Matrix<double, 6, 6>& a = out.a;
    a.setZero();
    // d(Re a1)/dt, d(Im a1)/dt
    a(0, 0) = -params.kappa1 / 2.0;
    a(0, 1) = -eq.delta_tilde1;
    a(0, 3) = params.mu;
    a(0, 4) = g0a * sphi;
    a(1, 0) = eq.delta_tilde1;
    a(1, 1) = -params.kappa1 / 2.0;
    a(1, 2) = -params.mu;
    a(1, 4) = -g0a * cphi;
    // d(Re a2)/dt, d(Im a2)/dt
    a(2, 1) = params.mu;
    a(2, 2) = -params.kappa2 / 2.0;
    a(2, 3) = -eq.delta2;
    a(3, 0) = -params.mu;
    a(3, 2) = eq.delta2;
    a(3, 3) = -params.kappa2 / 2.0;
    // dx/dt, dp/dt
    a(4, 5) = 1.0 / m;
    a(5, 0) = -2.0 * consts::hbar * g0a * cphi;
    a(5, 1) = -2.0 * consts::hbar * g0a * sphi;
    a(5, 4) = -m * wm * wm;
    a(5, 5) = -params.gamma_m;

    // Same matrix in zero-point units: similarity with diag(1,1,1,1,1/xz,1/pz).
    Eigen::Matrix<double, 6, 6>& s = out.scaled;
    s = a;
    const double g = eq.g;
    s(0, 4) = g * sphi;
    s(1, 4) = -g * cphi;
    s(4, 5) = wm;
    s(5, 0) = -4.0 * g * cphi;
    s(5, 1) = -4.0 * g * sphi;
    s(5, 4) = -wm;
    return out;
}

Eigen::Matrix<std::complex<double>, 6, 1> drift_eigenvalues(const DriftMatrix& drift) {
    Eigen::EigenSolver<Eigen::Matrix<double, 6, 6>> solver(drift.scaled, false);
    return solver.eigenvalues();
}

}  // namespace nanocool
