#include "nanocool/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <mutex>
#include <thread>

#include "nanocool/errors.hpp"
#include "nanocool/io_util.hpp"

namespace nanocool::sweep {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double score(const SystemParams& base, double delta, Method method) {
    SystemParams p = base;
    p.delta_tilde1 = delta;
    const MethodEval ev = evaluate_gamma_opt(p, method);
    return ev.stable ? ev.gamma_opt : -kInf;
}

// Runs fn(i) for i in [0, n) on `workers` threads. Exceptions propagate.
void parallel_for(int n, int workers, const std::function<void(int)>& fn) {
    if (workers <= 1 || n <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto body = [&] {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    const int n_threads = std::min(workers, n);
    pool.reserve(static_cast<size_t>(n_threads));
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(body);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace

const char* plane_name(Plane plane) {
    switch (plane) {
        case Plane::kMuD: return "mu_d";
        case Plane::kDeltaMu: return "delta_mu";
        case Plane::kDeltaD: return "delta_d";
    }
    return "?";
}

DetuningOptimum maximize_over_detuning(const SystemParams& params, Method method,
                                       const DetuningSearch& search) {
    const double lo = search.resolved_lo(params);
    const double hi = search.resolved_hi(params);
    if (!(hi <= 0.0) || !(lo < hi)) {
        throw SimError(ErrorKind::kInvalidParam,
                       "detuning search range must satisfy lo < hi <= 0",
                       {{"lo", format_double(lo)}, {"hi", format_double(hi)}});
    }
    if (search.n_seed < 32) {
        throw SimError(ErrorKind::kInvalidParam, "n_seed must be at least 32",
                       {{"n_seed", std::to_string(search.n_seed)}});
    }

    const int n = search.n_seed;
    auto seed_at = [&](int i) { return lo + (hi - lo) * static_cast<double>(i) / (n - 1); };
    int best = -1;
    double best_val = -kInf;
    for (int i = 0; i < n; ++i) {
        const double v = score(params, seed_at(i), method);
        if (v > best_val) {
            best_val = v;
            best = i;
        }
    }
    if (best < 0 || best_val == -kInf) {
        throw SimError(ErrorKind::kAllUnstable,
                       "no stable point in the detuning range",
                       {{"lo", format_double(lo)}, {"hi", format_double(hi)}});
    }

    // Golden-section refinement inside the bracket around the best seed.
    double a = seed_at(std::max(0, best - 1));
    double b = seed_at(std::min(n - 1, best + 1));
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = score(params, x1, method);
    double f2 = score(params, x2, method);
    double best_x = best_val >= std::max(f1, f2) ? seed_at(best) : (f1 >= f2 ? x1 : x2);
    double best_f = std::max({best_val, f1, f2});
    while (b - a > search.rel_tol * std::max(std::abs(a), std::abs(b))) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = score(params, x2, method);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = score(params, x1, method);
        }
        if (f1 > best_f) {
            best_f = f1;
            best_x = x1;
        }
        if (f2 > best_f) {
            best_f = f2;
            best_x = x2;
        }
    }

    SystemParams at_best = params;
    at_best.delta_tilde1 = best_x;
    const MethodEval ev = evaluate_gamma_opt(at_best, method);
    return {best_x, best_f, ev.g};
}

AxisSpec default_axis1(Plane plane, const SystemParams& params) {
    const double wt = params.omega_trap;
    switch (plane) {
        case Plane::kMuD: return {"mu_rad_s", 0.0, wt, 50};
        case Plane::kDeltaMu:
        case Plane::kDeltaD: return {"delta_tilde1_rad_s", -3.0 * wt, -0.01 * wt, 50};
    }
    return {};
}

AxisSpec default_axis2(Plane plane, const SystemParams& params) {
    const double wt = params.omega_trap;
    switch (plane) {
        case Plane::kMuD: return {"d_rad_s", -2.0 * wt, 2.0 * wt, 50};
        case Plane::kDeltaMu: return {"mu_rad_s", 0.0, wt, 50};
        case Plane::kDeltaD: return {"d_rad_s", -2.0 * wt, 2.0 * wt, 50};
    }
    return {};
}

SweepGrid plane_sweep(const SystemParams& params, Plane plane, const AxisSpec& axis1,
                      const AxisSpec& axis2, const std::vector<Method>& methods,
                      const DetuningSearch& search, int workers) {
    if (axis1.n < 1 || axis2.n < 1) {
        throw SimError(ErrorKind::kInvalidParam, "axis grids must have at least one point");
    }
    SweepGrid grid;
    grid.plane = plane;
    grid.axis1 = axis1;
    grid.axis2 = axis2;
    grid.methods = methods;
    grid.reference = single_cavity_reference(params, search);
    grid.cells.resize(static_cast<size_t>(axis1.n) * axis2.n);

    auto has = [&](Method m) { return std::find(methods.begin(), methods.end(), m) != methods.end(); };
    const Method primary = has(Method::kExact)   ? Method::kExact
                           : has(Method::kDoubleLorentzian) ? Method::kDoubleLorentzian
                                                            : Method::kSingleLorentzian;

    parallel_for(axis1.n * axis2.n, workers, [&](int idx) {
        const int i = idx / axis2.n;
        const int j = idx % axis2.n;
        SweepCell cell;
        cell.axis1 = axis1.value(i);
        cell.axis2 = axis2.value(j);
        cell.gamma_sl = cell.gamma_dl = cell.gamma_exact = cell.gamma_norm = kNaN;
        cell.delta_star = kNaN;

        SystemParams p = params;
        switch (plane) {
            case Plane::kMuD:
                p.mu = cell.axis1;
                p.d = cell.axis2;
                break;
            case Plane::kDeltaMu:
                p.delta_tilde1 = cell.axis1;
                p.mu = cell.axis2;
                break;
            case Plane::kDeltaD:
                p.delta_tilde1 = cell.axis1;
                p.d = cell.axis2;
                break;
        }

        double primary_value = kNaN;
        bool stable = false;
        if (plane == Plane::kMuD) {
            try {
                const DetuningOptimum opt = maximize_over_detuning(p, primary, search);
                p.delta_tilde1 = opt.delta_star;
                cell.delta_star = opt.delta_star;
                primary_value = opt.gamma_star;
                stable = true;
            } catch (const SimError& e) {
                if (e.kind() != ErrorKind::kAllUnstable) throw;
            }
        } else {
            cell.delta_star = p.delta_tilde1;
            const MethodEval ev = evaluate_gamma_opt(p, primary);
            stable = ev.stable;
            primary_value = ev.gamma_opt;
        }

        cell.stable = stable;
        if (stable) {
            for (Method m : methods) {
                const double v =
                    (m == primary) ? primary_value : evaluate_gamma_opt(p, m).gamma_opt;
                switch (m) {
                    case Method::kSingleLorentzian: cell.gamma_sl = v; break;
                    case Method::kDoubleLorentzian: cell.gamma_dl = v; break;
                    case Method::kExact: cell.gamma_exact = v; break;
                }
            }
            cell.gamma_norm = primary_value / grid.reference;
        }
        grid.cells[static_cast<size_t>(idx)] = cell;
    });
    return grid;
}

std::vector<PowerPoint> power_sweep(const SystemParams& params,
                                    const std::vector<double>& powers,
                                    const std::vector<double>& mu_values,
                                    const DetuningSearch& search, int workers) {
    std::vector<PowerPoint> out(powers.size() * mu_values.size());
    const int n = static_cast<int>(out.size());
    parallel_for(n, workers, [&](int idx) {
        const size_t mi = static_cast<size_t>(idx) / powers.size();
        const size_t pi = static_cast<size_t>(idx) % powers.size();
        PowerPoint pt;
        pt.mu = mu_values[mi];
        pt.power = powers[pi];
        pt.gamma_max = kNaN;
        pt.g_over_kappa1 = kNaN;
        pt.delta_star = kNaN;

        SystemParams p = params;
        p.mu = pt.mu;
        p.power = pt.power;
        // Offset fixed at the joint optimum for this coupling (trap-frequency
        // reference); left unchanged when no joint optimum exists.
        const OptimalDetunings opts = optimal_detunings(pt.mu, p.d, params.omega_trap);
        if (opts.joint) p.d = opts.joint->first;
        pt.d = p.d;
        try {
            const DetuningOptimum opt = maximize_over_detuning(p, Method::kExact, search);
            pt.gamma_max = opt.gamma_star;
            pt.delta_star = opt.delta_star;
            pt.g_over_kappa1 = opt.g_star / params.kappa1;
            pt.ok = true;
        } catch (const SimError& e) {
            if (e.kind() != ErrorKind::kAllUnstable) throw;
        }
        out[static_cast<size_t>(idx)] = pt;
    });
    return out;
}

double single_cavity_reference(const SystemParams& params, const DetuningSearch& search) {
    SystemParams p = params;
    p.mu = 0.0;
    const double reference = maximize_over_detuning(p, Method::kExact, search).gamma_star;
    if (!(reference > 0.0)) {
        throw SimError(ErrorKind::kAllUnstable,
                       "no positive single-cavity cooling rate to normalize against",
                       {{"reference_rad_s", format_double(reference)}});
    }
    return reference;
}

}  // namespace nanocool::sweep
