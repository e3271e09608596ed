#pragma once

namespace hypervar {

/// Standard normal distribution function.
double normalCdf(double x);

/// Standard normal quantile (Acklam's rational approximation refined by one Halley step).
double normalQuantile(double p);

/// Regularized lower incomplete gamma P(a, x).
double gammaP(double a, double x);

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x), computed without cancellation.
double gammaQ(double a, double x);

/// Solves P(a, x) = p for x >= 0.
double gammaPInverse(double a, double p);

/// Chi-square distribution function with `df` degrees of freedom.
double chiSquareCdf(double x, int df);

/// Quantile of the chi distribution (radius of a standard normal vector in `df` dimensions).
double chiQuantile(double p, int df);

}  // namespace hypervar
