#pragma once

#include <cstddef>
#include <functional>

namespace hypervar::quad {

struct Result {
    double value = 0.0;
    double errorEstimate = 0.0;
    std::size_t evaluations = 0;
    bool converged = false;
};

struct Options {
    double relTol = 1e-8;
    double absTol = 0.0;
    std::size_t maxIntervals = 200;
};

/// Globally adaptive Gauss-Kronrod (7/15) quadrature on [a, b].
Result integrate(const std::function<double(double)>& f, double a, double b, Options options = {});

/// Integral of f over (lower, inf) via r = lower + scale * (-log(1 - u)), u in (0, 1).
/// The scale is doubled (up to 12 times) while the adaptive rule fails to converge
/// or the mapped integrand has not decayed at u = 1 - 1e-9; RadialDecayTooSlow
/// is thrown if it never does.
Result integrateTail(const std::function<double(double)>& f, double lower, double scale,
                     Options options = {});

}  // namespace hypervar::quad
