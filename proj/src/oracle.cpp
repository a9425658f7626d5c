#include "nanocool/oracle.hpp"

#include <cmath>
#include <random>
#include <vector>

#include "nanocool/constants.hpp"
#include "nanocool/errors.hpp"
#include "nanocool/io_util.hpp"

namespace nanocool {

namespace {

void require_stable(const DriftMatrix& drift) {
    const auto eigs = drift_eigenvalues(drift);
    double max_re = eigs(0).real();
    for (int i = 1; i < 6; ++i) max_re = std::max(max_re, eigs(i).real());
    if (max_re >= 0.0) {
        throw SimError(ErrorKind::kUnstableSystem,
                       "covariance is undefined for an unstable system",
                       {{"max_re_rad_s", format_double(max_re)}});
    }
}

}  // namespace

Covariance lyapunov_covariance(const DriftMatrix& drift, const Equilibrium& eq,
                               const SystemParams& params) {
    require_stable(drift);

    using Mat6 = Eigen::Matrix<double, 6, 6>;
    const Mat6& a = drift.scaled;

    // Thermal force on p only, in zero-point units of p.
    Mat6 d_mat = Mat6::Zero();
    d_mat(5, 5) = 4.0 * params.gamma_m * consts::k_boltzmann * params.temperature /
                  (consts::hbar * eq.omega_m);

    // vec(A S + S A^T) = (I (x) A + A (x) I) vec(S), column-major.
    Eigen::Matrix<double, 36, 36> big = Eigen::Matrix<double, 36, 36>::Zero();
    for (int col_block = 0; col_block < 6; ++col_block) {
        big.block<6, 6>(6 * col_block, 6 * col_block) += a;
    }
    for (int i = 0; i < 6; ++i) {
        for (int j = 0; j < 6; ++j) {
            for (int k = 0; k < 6; ++k) {
                big(6 * i + k, 6 * j + k) += a(i, j);
            }
        }
    }

    Eigen::Matrix<double, 36, 1> rhs;
    for (int j = 0; j < 6; ++j)
        for (int i = 0; i < 6; ++i) rhs(6 * j + i) = -d_mat(i, j);

    Eigen::FullPivLU<Eigen::Matrix<double, 36, 36>> lu(big);
    if (!lu.isInvertible()) {
        throw SimError(ErrorKind::kSingularSolve, "vectorized Lyapunov system is singular");
    }
    const Eigen::Matrix<double, 36, 1> sol = lu.solve(rhs);

    Covariance cov;
    cov.x_zpf = drift.x_zpf;
    cov.p_zpf = drift.p_zpf;
    for (int j = 0; j < 6; ++j)
        for (int i = 0; i < 6; ++i) cov.scaled(i, j) = sol(6 * j + i);
    cov.scaled = ((cov.scaled + cov.scaled.transpose()) / 2.0).eval();

    const double residual = (a * cov.scaled + cov.scaled * a.transpose() + d_mat).norm();
    if (!(residual <= 1e-10 * d_mat.norm())) {
        throw SimError(ErrorKind::kSingularSolve,
                       "Lyapunov residual exceeds tolerance",
                       {{"residual", format_double(residual)},
                        {"bound", format_double(1e-10 * d_mat.norm())}});
    }

    Eigen::SelfAdjointEigenSolver<Mat6> sym(cov.scaled);
    if (sym.eigenvalues()(0) < -1e-12 * cov.scaled.trace()) {
        throw SimError(ErrorKind::kSingularSolve,
                       "covariance is not positive semidefinite",
                       {{"min_eigenvalue", format_double(sym.eigenvalues()(0))}});
    }

    const double factors[6] = {1.0, 1.0, 1.0, 1.0, drift.x_zpf, drift.p_zpf};
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) cov.sigma(i, j) = cov.scaled(i, j) * factors[i] * factors[j];
    return cov;
}

double mechanical_energy(const Covariance& cov, const Equilibrium& eq,
                         const SystemParams& params) {
    return cov.p_variance() / (2.0 * params.mass) +
           params.mass * eq.omega_m * eq.omega_m * cov.x_variance() / 2.0;
}

double gamma_eff_lyapunov(const Covariance& cov, const Equilibrium& eq,
                          const SystemParams& params) {
    return params.gamma_m * consts::k_boltzmann * params.temperature /
           mechanical_energy(cov, eq, params);
}

TrajectoryStats langevin_trajectory(const SystemParams& params, const Equilibrium& eq,
                                    std::uint64_t seed, double dt, std::int64_t n_steps) {
    const double dt_max = 0.01 / std::max(eq.omega_m, params.kappa1);
    if (!(dt > 0.0) || dt > dt_max) {
        throw SimError(ErrorKind::kStepTooLarge, "time step exceeds 0.01 / max(omega_m, kappa1)",
                       {{"dt_s", format_double(dt)}, {"dt_max_s", format_double(dt_max)}});
    }

    const DriftMatrix drift = drift_matrix(eq, params);
    const Covariance cov = lyapunov_covariance(drift, eq, params);  // also checks stability
    const double gamma_eff = gamma_eff_lyapunov(cov, eq, params);

    const auto n_discard =
        static_cast<std::int64_t>(std::ceil(10.0 / (gamma_eff * dt)));
    if (n_discard >= n_steps) {
        throw SimError(ErrorKind::kInvalidParam,
                       "n_steps does not cover ten relaxation times",
                       {{"n_steps", std::to_string(n_steps)},
                        {"steps_needed", std::to_string(n_discard + 1)}});
    }

    const Eigen::Matrix<double, 6, 6>& a = drift.scaled;
    const double noise_std = std::sqrt(4.0 * params.gamma_m * consts::k_boltzmann *
                                       params.temperature * dt / (consts::hbar * eq.omega_m));
    const double energy_scale = consts::hbar * eq.omega_m / 4.0;

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);

    Eigen::Matrix<double, 6, 1> z = Eigen::Matrix<double, 6, 1>::Zero();
    const std::int64_t n_keep = n_steps - n_discard;
    const int n_batches = 32;
    const std::int64_t batch_len = n_keep / n_batches;
    if (batch_len < 1) {
        throw SimError(ErrorKind::kInvalidParam, "too few retained steps for batch statistics",
                       {{"steps_retained", std::to_string(n_keep)}});
    }
    std::vector<double> batch_means;
    batch_means.reserve(n_batches);

    double batch_acc = 0.0;
    std::int64_t in_batch = 0;
    std::int64_t used = 0;
    Eigen::Matrix<double, 6, 1> az;
    for (std::int64_t step = 0; step < n_steps; ++step) {
        az.noalias() = a * z;
        z += dt * az;
        z(5) += noise_std * normal(rng);
        if (step < n_discard) continue;
        batch_acc += z(4) * z(4) + z(5) * z(5);
        if (++in_batch == batch_len && static_cast<int>(batch_means.size()) < n_batches) {
            batch_means.push_back(energy_scale * batch_acc / static_cast<double>(batch_len));
            batch_acc = 0.0;
            in_batch = 0;
        }
        ++used;
    }

    double mean = 0.0;
    for (double b : batch_means) mean += b;
    mean /= static_cast<double>(batch_means.size());
    double var = 0.0;
    for (double b : batch_means) var += (b - mean) * (b - mean);
    var /= static_cast<double>(batch_means.size() - 1);

    TrajectoryStats stats;
    stats.mean_em = mean;
    stats.stderr_em = std::sqrt(var / static_cast<double>(batch_means.size()));
    stats.steps_used = used;
    stats.steps_discarded = n_discard;
    return stats;
}

}  // namespace nanocool
