#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "nanocool/response.hpp"

namespace nanocool {

// Steady-state covariance of the fluctuation state (Re a1, Im a1, Re a2,
// Im a2, x, p). sigma is in SI units; scaled expresses x and p in zero-point
// units (the frame in which the solve, its residual bound and the
// positive-semidefiniteness check are performed, since a norm over
// mixed-dimension entries is not meaningful).
struct Covariance {
    Eigen::Matrix<double, 6, 6> sigma;
    Eigen::Matrix<double, 6, 6> scaled;
    double x_zpf = 0.0;
    double p_zpf = 0.0;

    double x_variance() const { return sigma(4, 4); }  // m^2
    double p_variance() const { return sigma(5, 5); }  // (kg m/s)^2
};

// Solves A Sigma + Sigma A^T + D = 0 with the single thermal-force noise
// entry D_pp = 2 m gamma_m k_B T, by vectorizing to a 36-unknown linear
// system. Requires a stable drift matrix; the residual must stay below
// 1e-10 * ||D||.
Covariance lyapunov_covariance(const DriftMatrix& drift, const Equilibrium& eq,
                               const SystemParams& params);

// E_m = <p^2>/(2m) + m omega_m^2 <x^2> / 2.
double mechanical_energy(const Covariance& cov, const Equilibrium& eq,
                         const SystemParams& params);

// gamma_m k_B T / E_m: exact effective damping implied by the covariance.
double gamma_eff_lyapunov(const Covariance& cov, const Equilibrium& eq,
                          const SystemParams& params);

struct TrajectoryStats {
    double mean_em = 0.0;    // J, time-averaged mechanical energy
    double stderr_em = 0.0;  // J, batch-means standard error
    std::int64_t steps_used = 0;
    std::int64_t steps_discarded = 0;
};

// Euler-Maruyama integration of the 6-state linear Langevin dynamics with
// Gaussian thermal-force increments of variance 2 m gamma_m k_B T dt.
// Discards ten relaxation times 1/gamma_eff before averaging; deterministic
// for a given seed. dt must satisfy dt <= 0.01 / max(omega_m, kappa1).
TrajectoryStats langevin_trajectory(const SystemParams& params, const Equilibrium& eq,
                                    std::uint64_t seed, double dt, std::int64_t n_steps);

}  // namespace nanocool
