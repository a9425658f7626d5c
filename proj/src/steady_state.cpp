#include "nanocool/steady_state.hpp"

#include <cmath>
#include <complex>

#include "nanocool/errors.hpp"
#include "nanocool/io_util.hpp"

namespace nanocool {

using std::complex;

namespace {

// alpha1 for given effective detunings. Handles the kappa2 = delta2 = 0
// corner where the cavity-2 term formally diverges (alpha1 -> 0).
complex<double> alpha1_of(double e, double kappa1, double kappa2, double mu,
                          double delta_tilde1, double delta2) {
    const complex<double> z2(kappa2 / 2.0, -delta2);
    complex<double> den(kappa1 / 2.0, -delta_tilde1);
    if (mu != 0.0) {
        if (z2 == complex<double>(0.0, 0.0)) {
            return {0.0, 0.0};  // mu^2 / z2 -> infinity
        }
        den += mu * mu / z2;
    }
    return e / den;
}

complex<double> alpha2_of(const complex<double>& alpha1, double e, double kappa2,
                          double mu, double delta2) {
    const complex<double> z2(kappa2 / 2.0, -delta2);
    if (mu == 0.0) return {0.0, 0.0};
    if (z2 == complex<double>(0.0, 0.0)) {
        // Undamped resonant second cavity: the field equation of cavity 1
        // forces alpha1 = 0 and alpha2 = E/(i mu).
        return complex<double>(0.0, -e / mu);
    }
    return complex<double>(0.0, mu) * alpha1 / z2;
}

double omega_m_squared(const SystemParams& p, double n1, double cos2) {
    return p.omega_trap * p.omega_trap +
           (2.0 * consts::hbar * p.k1 * p.k1 * p.shift_amplitude / p.mass) * n1 * cos2;
}

Equilibrium assemble(const SystemParams& p, double e, double x0, double cos2,
                     double sin2, double delta_tilde1) {
    const double delta2 = delta_tilde1 + p.d;
    Equilibrium eq;
    eq.alpha1 = alpha1_of(e, p.kappa1, p.kappa2, p.mu, delta_tilde1, delta2);
    eq.alpha2 = alpha2_of(eq.alpha1, e, p.kappa2, p.mu, delta2);
    eq.x0 = x0;
    eq.delta_tilde1 = delta_tilde1;
    eq.delta2 = delta2;
    eq.n1 = std::norm(eq.alpha1);
    eq.n2 = std::norm(eq.alpha2);
    eq.cos_2k1x0 = cos2;
    eq.sin_2k1x0 = sin2;
    eq.drive = e;

    const double wm2 = omega_m_squared(p, eq.n1, cos2);
    if (wm2 <= 0.0) {
        throw SimError(ErrorKind::kUnstableSystem,
                       "effective trap frequency squared is non-positive",
                       {{"omega_m_squared", format_double(wm2)}});
    }
    eq.omega_m = std::sqrt(wm2);
    eq.g0 = p.k1 * p.shift_amplitude * sin2;
    eq.x_zpf = std::sqrt(consts::hbar / (2.0 * p.mass * eq.omega_m));
    eq.p_zpf = std::sqrt(consts::hbar * p.mass * eq.omega_m / 2.0);
    eq.g = eq.g0 * std::abs(eq.alpha1) * eq.x_zpf;
    return eq;
}

}  // namespace

Equilibrium solve_equilibrium(const SystemParams& params) {
    const double e = drive_strength(params).e;

    if (params.position_mode == PositionMode::kDirect) {
        const double cos2 = params.cos_2k1x0;
        const double sin2 = std::sqrt(std::max(0.0, 1.0 - cos2 * cos2));
        const double x0 = std::acos(cos2) / (2.0 * params.k1);  // consistent branch
        return assemble(params, e, x0, cos2, sin2, params.delta_tilde1);
    }

    // Self-consistent position. The bare detuning is pinned so that the
    // requested delta_tilde1 is the effective detuning at x_trap.
    const double xt = params.x_trap;
    const double cos_sq_at = [&](double x) {
        const double c = std::cos(params.k1 * x);
        return c * c;
    }(xt);
    const double delta1_bare = params.delta_tilde1 - params.shift_amplitude * cos_sq_at;
    const double pull = consts::hbar * params.k1 * params.shift_amplitude /
                        (params.mass * params.omega_trap * params.omega_trap);

    const double lambda = 0.5;
    const double tol = 1e-12 * std::abs(xt) + 1e-18;
    double x0 = xt;
    double last_residual = 0.0;
    for (int iter = 0; iter < 1000; ++iter) {
        const double c = std::cos(params.k1 * x0);
        const double cos2 = 2.0 * c * c - 1.0;
        const double sin2 = std::sin(2.0 * params.k1 * x0);
        const double dt1 = delta1_bare + params.shift_amplitude * c * c;
        const complex<double> a1 =
            alpha1_of(e, params.kappa1, params.kappa2, params.mu, dt1, dt1 + params.d);
        const double target = xt - pull * std::norm(a1) * sin2;
        const double x_next = (1.0 - lambda) * x0 + lambda * target;
        last_residual = std::abs(x_next - x0);
        if (last_residual < tol) {
            const double cn = std::cos(params.k1 * x_next);
            const double dt1n = delta1_bare + params.shift_amplitude * cn * cn;
            return assemble(params, e, x_next, 2.0 * cn * cn - 1.0,
                            std::sin(2.0 * params.k1 * x_next), dt1n);
        }
        x0 = x_next;
    }
    throw SimError(ErrorKind::kNoConvergence,
                   "equilibrium position iteration did not converge "
                   "(possible bistability or too-strong drive; retry with smaller drive)",
                   {{"iterations", "1000"},
                    {"last_residual_m", format_double(last_residual)}});
}

std::vector<PhotonScanPoint> photon_number_scan(const SystemParams& params,
                                                std::span<const double> deltas) {
    const double e = drive_strength(params).e;
    std::vector<PhotonScanPoint> out;
    out.reserve(deltas.size());
    for (double dt1 : deltas) {
        const double d2 = dt1 + params.d;
        const complex<double> a1 = alpha1_of(e, params.kappa1, params.kappa2, params.mu, dt1, d2);
        const complex<double> a2 = alpha2_of(a1, e, params.kappa2, params.mu, d2);
        out.push_back({dt1, std::norm(a1), std::norm(a2)});
    }
    return out;
}

}  // namespace nanocool
