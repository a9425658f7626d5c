#include "nanocool/cooling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "nanocool/constants.hpp"
#include "nanocool/errors.hpp"
#include "nanocool/io_util.hpp"
#include "nanocool/oracle.hpp"
#include "nanocool/poly.hpp"
#include "nanocool/quadrature.hpp"

namespace nanocool {

using std::complex;

const char* method_name(Method method) {
    switch (method) {
        case Method::kSingleLorentzian: return "sl";
        case Method::kDoubleLorentzian: return "dl";
        case Method::kExact: return "exact";
    }
    return "?";
}

double gamma_opt_sl(const Equilibrium& eq, const SystemParams& params) {
    const LinearResponse lr = LinearResponse::make(eq, params);
    const complex<double> diff = lr.chi_o(eq.omega_m) - std::conj(lr.chi_o(-eq.omega_m));
    return 2.0 * eq.g * eq.g * diff.real();
}

double gamma_opt_sl_kappa2_zero(const Equilibrium& eq, const SystemParams& params) {
    const double g2k = eq.g * eq.g * params.kappa1;
    const double hk = params.kappa1 / 2.0;
    auto term = [&](double detune_1, double detune_2) {
        double shift = detune_1;
        if (detune_2 != 0.0) {
            shift -= params.mu * params.mu / detune_2;
        } else if (params.mu != 0.0) {
            return 0.0;  // pole in the shift pushes the Lorentzian to zero
        }
        return g2k / (hk * hk + shift * shift);
    };
    const double anti_stokes = term(eq.omega_m + eq.delta_tilde1, eq.omega_m + eq.delta2);
    const double stokes = term(eq.omega_m - eq.delta_tilde1, eq.omega_m - eq.delta2);
    return anti_stokes - stokes;
}

OptimalDetunings optimal_detunings(double mu, double d, double omega_m) {
    OptimalDetunings out;
    const double r = std::sqrt(d * d / 4.0 + mu * mu);
    out.denominator_min = {-omega_m - d / 2.0 + r, -omega_m - d / 2.0 - r};
    out.numerator_max = {-d / 2.0 + r, -d / 2.0 - r};
    if (2.0 * mu <= omega_m) {
        const double d_star = std::sqrt((omega_m - 2.0 * mu) * (omega_m + 2.0 * mu));
        out.joint = std::make_pair(d_star, -(omega_m + d_star) / 2.0);
    }
    return out;
}

std::array<double, 7> char_poly(const Equilibrium& eq, const SystemParams& params) {
    const double dt1 = eq.delta_tilde1;
    const double d2 = eq.delta2;
    const double mu2 = params.mu * params.mu;
    const std::vector<double> x_poly = {params.kappa1 / 2.0, 1.0};
    const std::vector<double> y_poly = {params.kappa2 / 2.0, 1.0};

    std::vector<double> g_poly = poly::multiply(x_poly, y_poly);
    g_poly[0] += -dt1 * d2 + mu2;
    const std::vector<double> h_poly = poly::add(poly::scale(y_poly, dt1), poly::scale(x_poly, d2));
    const std::vector<double> r_poly =
        poly::add(poly::multiply(g_poly, g_poly), poly::multiply(h_poly, h_poly));

    const std::vector<double> mech = {params.mass * eq.omega_m * eq.omega_m,
                                      params.mass * params.gamma_m, params.mass};

    std::vector<double> t_poly = poly::multiply(y_poly, y_poly);  // degree 2
    t_poly = poly::scale(t_poly, dt1);
    t_poly[0] += dt1 * d2 * d2 - d2 * mu2;
    t_poly = poly::scale(t_poly, 4.0 * params.mass * eq.omega_m * eq.g * eq.g);

    const std::vector<double> p = poly::add(poly::multiply(mech, r_poly), t_poly);
    std::array<double, 7> out{};
    for (size_t i = 0; i < 7 && i < p.size(); ++i) out[i] = p[i];
    return out;
}

HybridModes taylor_modes(std::span<const double> poly_p, const Equilibrium& eq,
                         const SystemParams& params) {
    HybridModes modes;
    modes.s0 = complex<double>(-params.gamma_m / 2.0, -eq.omega_m);

    const std::vector<double> p(poly_p.begin(), poly_p.end());
    const std::vector<double> p1 = poly::derivative(p);
    const std::vector<double> p2 = poly::derivative(p1);
    const complex<double> v0 = poly::eval(p, modes.s0);
    const complex<double> v1 = poly::eval(p1, modes.s0);
    const complex<double> v2 = poly::eval(p2, modes.s0);
    if (v2 == complex<double>(0.0, 0.0)) {
        throw SimError(ErrorKind::kDegenerateModes,
                       "second derivative of the characteristic polynomial vanishes");
    }
    const complex<double> disc = std::sqrt(v1 * v1 - 2.0 * v2 * v0);
    const complex<double> sa = modes.s0 + (-v1 + disc) / v2;
    const complex<double> sb = modes.s0 + (-v1 - disc) / v2;

    // Mode 1 is the root closer to the expansion point.
    const bool a_first = std::abs(sa - modes.s0) <= std::abs(sb - modes.s0);
    modes.s1 = a_first ? sa : sb;
    modes.s2 = a_first ? sb : sa;
    modes.omega_m1 = std::abs(modes.s1.imag());
    modes.omega_m2 = std::abs(modes.s2.imag());
    modes.gamma_1 = -2.0 * modes.s1.real();
    modes.gamma_2 = -2.0 * modes.s2.real();

    if (std::abs(modes.omega_m1 - modes.omega_m2) <
        0.01 * (std::abs(modes.gamma_1) + std::abs(modes.gamma_2))) {
        throw SimError(ErrorKind::kDegenerateModes,
                       "hybrid modes are too close to separate",
                       {{"omega_m1", format_double(modes.omega_m1)},
                        {"omega_m2", format_double(modes.omega_m2)}});
    }
    return modes;
}

std::pair<double, double> dl_constants(const HybridModes& modes, const Equilibrium& eq,
                                       const SystemParams& params) {
    const LinearResponse lr = LinearResponse::make(eq, params);
    const double s1 = lr.thermal_force * lr.abs_chi_sq(modes.omega_m1);
    const double s2 = lr.thermal_force * lr.abs_chi_sq(modes.omega_m2);

    const double w1 = modes.omega_m1;
    const double w2 = modes.omega_m2;
    const double split = (w1 - w2) * (w1 + w2);
    const double split_sq = split * split;
    const double a = 1.0 / ((w1 * modes.gamma_1) * (w1 * modes.gamma_1));
    const double b = 1.0 / (split_sq + (w1 * modes.gamma_2) * (w1 * modes.gamma_2));
    const double c = 1.0 / (split_sq + (w2 * modes.gamma_1) * (w2 * modes.gamma_1));
    const double dd = 1.0 / ((w2 * modes.gamma_2) * (w2 * modes.gamma_2));
    const double det = a * dd - b * c;
    if (!(det > 0.0) || !std::isfinite(det)) {
        throw SimError(ErrorKind::kDegenerateModes,
                       "double-Lorentzian fit matrix is singular",
                       {{"determinant", format_double(det)}});
    }
    return {(s1 * dd - s2 * b) / det, (s2 * a - s1 * c) / det};
}

double gamma_eff_dl(const HybridModes& modes, double c1, double c2, const Equilibrium& eq,
                    const SystemParams& params) {
    if (modes.gamma_1 <= 0.0 || modes.gamma_2 <= 0.0) {
        throw SimError(ErrorKind::kDegenerateModes,
                       "hybrid-mode decay rates are not both positive",
                       {{"gamma_1", format_double(modes.gamma_1)},
                        {"gamma_2", format_double(modes.gamma_2)}});
    }
    const double wm2 = eq.omega_m * eq.omega_m;
    const double w1_sq = modes.omega_m1 * modes.omega_m1;
    const double w2_sq = modes.omega_m2 * modes.omega_m2;
    // Mechanical energy of the two-peak model, integrated in closed form.
    const double energy = params.mass / 4.0 *
                          (c1 * (wm2 + w1_sq) / (modes.gamma_1 * w1_sq) +
                           c2 * (wm2 + w2_sq) / (modes.gamma_2 * w2_sq));
    if (!(energy > 0.0)) {
        throw SimError(ErrorKind::kDegenerateModes,
                       "two-peak model energy is not positive",
                       {{"energy_j", format_double(energy)}});
    }
    return params.gamma_m * consts::k_boltzmann * params.temperature / energy;
}

Stability stability_check(const DriftMatrix& drift) {
    const auto eigs = drift_eigenvalues(drift);
    double max_re = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < 6; ++i) max_re = std::max(max_re, eigs(i).real());
    return {max_re < 0.0, max_re};
}

namespace {

// Breakpoints that resolve every resonance of the integrand on [0, omega_hi].
std::vector<double> peak_breakpoints(
    const Eigen::Matrix<std::complex<double>, 6, 1>& eigenvalues, double omega_hi) {
    std::vector<double> pts;
    pts.push_back(0.0);
    pts.push_back(omega_hi);
    for (int i = 0; i < 6; ++i) {
        const double center = std::abs(eigenvalues(i).imag());
        const double hw = std::max(std::abs(eigenvalues(i).real()), 1e-12 * omega_hi);
        for (double f : {1.0, 8.0, 64.0, 512.0, 4096.0}) {
            const double lo = center - f * hw;
            const double hi = center + f * hw;
            if (lo > 0.0 && lo < omega_hi) pts.push_back(lo);
            if (hi > 0.0 && hi < omega_hi) pts.push_back(hi);
        }
        if (center > 0.0 && center < omega_hi) pts.push_back(center);
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

}  // namespace

double gamma_eff_exact_from_modes(
    const Equilibrium& eq, const SystemParams& params,
    const Eigen::Matrix<std::complex<double>, 6, 1>& eigenvalues) {
    double max_re = -std::numeric_limits<double>::infinity();
    double feature = eq.omega_m;
    for (int i = 0; i < 6; ++i) {
        max_re = std::max(max_re, eigenvalues(i).real());
        feature = std::max(feature, std::abs(eigenvalues(i).imag()) + 6.0 * std::abs(eigenvalues(i).real()));
    }
    if (max_re >= 0.0) {
        throw SimError(ErrorKind::kUnstableSystem,
                       "effective damping is undefined for an unstable system",
                       {{"max_re_rad_s", format_double(max_re)}});
    }

    const LinearResponse lr = LinearResponse::make(eq, params);
    const double wm2 = eq.omega_m * eq.omega_m;
    auto integrand = [&](double w) { return (wm2 + w * w) * lr.abs_chi_sq(w); };

    const double omega_core = 4.0 * std::max({feature, params.kappa1, std::abs(eq.delta_tilde1),
                                              std::abs(eq.delta2), params.mu});
    const auto core =
        quad::integrate(integrand, peak_breakpoints(eigenvalues, omega_core), 1e-9);

    // Truncation point where the analytic 1/(m^2 w^2) tail is below 1e-10 of
    // the full integral, then a log-spaced strip out to it.
    const double m2 = params.mass * params.mass;
    const double full_estimate = 2.0 * core.value;
    double w_max = 2e10 / (m2 * full_estimate);
    w_max = std::max(w_max, 4.0 * omega_core);

    std::vector<double> strip_pts;
    for (double w = omega_core; w < w_max; w *= 1.77827941003892) {  // 4 panels per decade
        strip_pts.push_back(w);
    }
    strip_pts.push_back(w_max);
    const auto strip = quad::integrate(integrand, strip_pts, 1e-7, 1e-10 * core.value);

    const double half_line = core.value + strip.value + 1.0 / (m2 * w_max);
    return M_PI / (m2 * half_line);
}

double gamma_eff_exact(const Equilibrium& eq, const SystemParams& params) {
    const DriftMatrix drift = drift_matrix(eq, params);
    return gamma_eff_exact_from_modes(eq, params, drift_eigenvalues(drift));
}

MethodEval evaluate_gamma_opt(const SystemParams& params, Method method) {
    MethodEval out;
    out.gamma_opt = std::numeric_limits<double>::quiet_NaN();
    Equilibrium eq;
    try {
        eq = solve_equilibrium(params);
    } catch (const SimError& e) {
        if (e.kind() == ErrorKind::kUnstableSystem) return out;  // inverted trap
        throw;
    }
    out.g = eq.g;
    const DriftMatrix drift = drift_matrix(eq, params);
    const auto eigs = drift_eigenvalues(drift);
    double max_re = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < 6; ++i) max_re = std::max(max_re, eigs(i).real());
    if (max_re >= 0.0) return out;
    out.stable = true;

    switch (method) {
        case Method::kSingleLorentzian:
            out.gamma_opt = gamma_opt_sl(eq, params);
            break;
        case Method::kDoubleLorentzian:
            try {
                const auto p = char_poly(eq, params);
                const HybridModes modes = taylor_modes(p, eq, params);
                const auto [c1, c2] = dl_constants(modes, eq, params);
                out.gamma_opt = gamma_eff_dl(modes, c1, c2, eq, params) - params.gamma_m;
            } catch (const SimError& e) {
                if (e.kind() != ErrorKind::kDegenerateModes) throw;
                out.gamma_opt = gamma_opt_sl(eq, params);  // fallback
            }
            break;
        case Method::kExact:
            out.gamma_opt = gamma_eff_exact_from_modes(eq, params, eigs) - params.gamma_m;
            break;
    }
    return out;
}

CoolingResult compute_cooling(const SystemParams& params) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    CoolingResult res;
    res.gamma_opt_sl = nan;
    res.gamma_eff_dl = nan;
    res.gamma_eff_exact = nan;
    res.gamma_eff_lyapunov = nan;
    res.c1 = nan;
    res.c2 = nan;

    const Equilibrium eq = solve_equilibrium(params);
    const DriftMatrix drift = drift_matrix(eq, params);
    const Stability st = stability_check(drift);
    res.stable = st.stable;
    if (!st.stable) return res;

    res.gamma_opt_sl = gamma_opt_sl(eq, params);
    const auto p = char_poly(eq, params);
    try {
        res.modes = taylor_modes(p, eq, params);
        const auto [c1, c2] = dl_constants(res.modes, eq, params);
        res.c1 = c1;
        res.c2 = c2;
        res.gamma_eff_dl = gamma_eff_dl(res.modes, c1, c2, eq, params);
    } catch (const SimError& e) {
        if (e.kind() != ErrorKind::kDegenerateModes) throw;
        res.dl_degenerate = true;
    }
    res.gamma_eff_exact = gamma_eff_exact_from_modes(eq, params, drift_eigenvalues(drift));
    const Covariance cov = lyapunov_covariance(drift, eq, params);
    res.gamma_eff_lyapunov = gamma_eff_lyapunov(cov, eq, params);
    return res;
}

}  // namespace nanocool
