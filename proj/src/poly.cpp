#include "nanocool/poly.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace nanocool::poly {

std::vector<double> multiply(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) return {};
    std::vector<double> out(a.size() + b.size() - 1, 0.0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

std::vector<double> add(std::span<const double> a, std::span<const double> b) {
    std::vector<double> out(std::max(a.size(), b.size()), 0.0);
    for (size_t i = 0; i < a.size(); ++i) out[i] += a[i];
    for (size_t i = 0; i < b.size(); ++i) out[i] += b[i];
    return out;
}

std::vector<double> scale(std::span<const double> a, double factor) {
    std::vector<double> out(a.begin(), a.end());
    for (double& c : out) c *= factor;
    return out;
}

std::vector<double> derivative(std::span<const double> a) {
    if (a.size() <= 1) return {0.0};
    std::vector<double> out(a.size() - 1);
    for (size_t i = 1; i < a.size(); ++i) out[i - 1] = a[i] * static_cast<double>(i);
    return out;
}

std::complex<double> eval(std::span<const double> a, std::complex<double> s) {
    std::complex<double> acc(0.0, 0.0);
    for (size_t i = a.size(); i-- > 0;) acc = acc * s + a[i];
    return acc;
}

std::vector<std::complex<double>> roots(std::span<const double> coeffs) {
    // Trim leading (highest-order) zeros.
    size_t n = coeffs.size();
    while (n > 0 && coeffs[n - 1] == 0.0) --n;
    if (n <= 1) return {};
    const size_t deg = n - 1;

    // Rescale s = w * z so the companion matrix is well conditioned across
    // the large dynamic range of the physical coefficients.
    double w = 0.0;
    for (size_t i = 0; i < deg; ++i) {
        if (coeffs[i] == 0.0) continue;
        const double mag = std::abs(coeffs[i] / coeffs[deg]);
        w = std::max(w, std::pow(mag, 1.0 / static_cast<double>(deg - i)));
    }
    if (w == 0.0) w = 1.0;

    // Monic coefficients of q(z) = p(w z) / (c_deg w^deg).
    std::vector<double> monic(deg);
    for (size_t i = 0; i < deg; ++i) {
        const double wpow = std::pow(w, static_cast<double>(deg - i));
        monic[i] = coeffs[i] / (coeffs[deg] * wpow);
    }

    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(static_cast<long>(deg), static_cast<long>(deg));
    for (size_t i = 1; i < deg; ++i) companion(static_cast<long>(i), static_cast<long>(i - 1)) = 1.0;
    for (size_t i = 0; i < deg; ++i) companion(static_cast<long>(i), static_cast<long>(deg - 1)) = -monic[i];

    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, /*computeEigenvectors=*/false);
    std::vector<std::complex<double>> out(deg);
    for (size_t i = 0; i < deg; ++i) {
        const auto z = solver.eigenvalues()(static_cast<long>(i));
        out[i] = std::complex<double>(z.real() * w, z.imag() * w);
    }
    return out;
}

}  // namespace nanocool::poly
