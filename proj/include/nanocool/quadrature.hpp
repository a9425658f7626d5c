#pragma once

#include <functional>
#include <span>

namespace nanocool::quad {

struct Result {
    double value = 0.0;
    double error_estimate = 0.0;
    int evaluations = 0;
    int intervals = 0;
};

// Adaptive Gauss-Kronrod 15(7) over the panels defined by consecutive
// breakpoints. Panels are bisected worst-error-first until the summed error
// estimate satisfies  err <= max(rel_tol * |value|, abs_tol)  or the interval
// budget is exhausted, in which case SimError(kQuadratureFailure) reports the
// tolerance actually achieved.
Result integrate(const std::function<double(double)>& f,
                 std::span<const double> breakpoints,
                 double rel_tol,
                 double abs_tol = 0.0,
                 int max_intervals = 20000);

}  // namespace nanocool::quad
