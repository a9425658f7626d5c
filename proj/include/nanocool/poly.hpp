#pragma once

#include <complex>
#include <span>
#include <vector>

namespace nanocool::poly {

// Dense real polynomials, ascending coefficient order: p[k] multiplies s^k.

std::vector<double> multiply(std::span<const double> a, std::span<const double> b);
std::vector<double> add(std::span<const double> a, std::span<const double> b);
std::vector<double> scale(std::span<const double> a, double factor);
std::vector<double> derivative(std::span<const double> a);

std::complex<double> eval(std::span<const double> a, std::complex<double> s);

// All complex roots via the eigenvalues of the (frequency-rescaled) companion
// matrix. Leading zero coefficients are trimmed first.
std::vector<std::complex<double>> roots(std::span<const double> coeffs);

}  // namespace nanocool::poly
