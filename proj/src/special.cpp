#include "hypervar/special.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "hypervar/errors.hpp"

namespace hypervar {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = 1e-300;

// P(a,x) by its power series; valid and fast for x < a + 1.
double gammaSeries(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    for (int n = 1; n < 100000; ++n) {
        term *= x / (a + n);
        sum += term;
        if (std::abs(term) < std::abs(sum) * kEps) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Q(a,x) by modified Lentz continued fraction; valid for x >= a + 1.
double gammaContinuedFraction(double a, double x) {
    double b = x + 1.0 - a;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 100000; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < kTiny) d = kTiny;
        c = b + an / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < kEps) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double normalCdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double normalQuantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        if (p == 0.0) return -std::numeric_limits<double>::infinity();
        if (p == 1.0) return std::numeric_limits<double>::infinity();
        throw InputError("normalQuantile: probability outside [0,1]");
    }
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549732539343734e+00,
                                   4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double pLow = 0.02425;
    double x;
    if (p < pLow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - pLow) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log1p(-p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double e = normalCdf(x) - p;
    const double u = e * std::sqrt(2.0 * M_PI) * std::exp(0.5 * x * x);
    return x - u / (1.0 + 0.5 * x * u);
}

double gammaP(double a, double x) {
    if (!(a > 0.0)) throw InputError("gammaP: shape must be positive");
    if (x <= 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;
    return x < a + 1.0 ? gammaSeries(a, x) : 1.0 - gammaContinuedFraction(a, x);
}

double gammaQ(double a, double x) {
    if (!(a > 0.0)) throw InputError("gammaQ: shape must be positive");
    if (x <= 0.0) return 1.0;
    if (std::isinf(x)) return 0.0;
    return x < a + 1.0 ? 1.0 - gammaSeries(a, x) : gammaContinuedFraction(a, x);
}

double gammaPInverse(double a, double p) {
    if (!(a > 0.0)) throw InputError("gammaPInverse: shape must be positive");
    if (p <= 0.0) return 0.0;
    if (p >= 1.0) return std::numeric_limits<double>::infinity();

    const double lgam = std::lgamma(a);
    double x;
    if (a > 1.0) {
        // Wilson-Hilferty start.
        const double z = normalQuantile(p);
        const double t = 1.0 / (9.0 * a);
        x = a * std::pow(1.0 - t + z * std::sqrt(t), 3);
        if (x <= 0.0) x = std::exp((std::log(p) + std::lgamma(a + 1.0)) / a);
    } else {
        const double t = 1.0 - a * (0.253 + a * 0.12);
        x = p < t ? std::pow(p / t, 1.0 / a) : 1.0 - std::log1p(-(p - t) / (1.0 - t));
    }

    const double am1 = a - 1.0;
    for (int it = 0; it < 100; ++it) {
        if (x <= 0.0) return 0.0;
        // Work with whichever tail is smaller to keep the residual accurate.
        const double err = p < 0.5 ? gammaP(a, x) - p : (1.0 - p) - gammaQ(a, x);
        const double logDensity = am1 * std::log(x) - x - lgam;
        const double density = std::exp(logDensity);
        if (density == 0.0) break;
        const double step = err / density;
        const double halley = step / (1.0 - 0.5 * std::min(1.0, step * (am1 / x - 1.0)));
        double next = x - halley;
        if (next <= 0.0) next = 0.5 * x;
        const bool done = std::abs(next - x) < 1e-14 * x;
        x = next;
        if (done) break;
    }
    return x;
}

double chiSquareCdf(double x, int df) {
    if (df <= 0) throw InputError("chiSquareCdf: degrees of freedom must be positive");
    if (x <= 0.0) return 0.0;
    return gammaP(0.5 * df, 0.5 * x);
}

double chiQuantile(double p, int df) {
    if (df <= 0) throw InputError("chiQuantile: degrees of freedom must be positive");
    return std::sqrt(2.0 * gammaPInverse(0.5 * df, p));
}

}  // namespace hypervar
