#include "hypervar/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hypervar/errors.hpp"

namespace hypervar {

double varFromR(double R, double theta) { return R * R / 2.0 - theta; }

double defaultTolerance(double standardError) { return std::max(1e-4, 0.5 * standardError); }

RootResult solveR(double alpha, const TailFunction& g, double tol, Monotonicity direction) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw InputError("alpha must lie in (0, 1)");
    if (!(tol > 0.0)) throw InputError("solver tolerance must be positive");

    // f(R) = sign * (g(R) - alpha) is positive at R = 0 and falls through zero.
    const double sign = direction == Monotonicity::Nonincreasing ? 1.0 : -1.0;
    std::size_t iterations = 0;
    auto eval = [&](double R) {
        ++iterations;
        return g(R);
    };

    RootResult best;
    double bestGap = std::numeric_limits<double>::infinity();
    auto track = [&](double R, const TailEstimate& est) {
        const double gap = std::abs(est.value - alpha);
        if (gap < bestGap) {
            bestGap = gap;
            best.R = R;
            best.gAtR = est;
        }
        return sign * (est.value - alpha);
    };

    double lo = 0.0;
    double flo = track(lo, eval(lo));
    if (bestGap <= tol) {
        best.iterations = iterations;
        return best;
    }
    if (flo < 0.0)
        throw NoSolution("G(0) = " + std::to_string(best.gAtR.value) +
                         " is already on the far side of alpha = " + std::to_string(alpha));

    double hi = 1.0;
    double fhi = track(hi, eval(hi));
    while (fhi > 0.0 && bestGap > tol) {
        lo = hi;
        flo = fhi;
        hi *= 2.0;
        if (hi > 1e6) throw BracketOverflow("no sign change of G(R) - alpha below R = 1e6");
        fhi = track(hi, eval(hi));
    }

    // Brent's zeroin on [lo, hi] with f(lo) > 0 >= f(hi).
    double a = lo, fa = flo, b = hi, fb = fhi;
    double c = a, fc = fa, d = b - a, e = d;
    for (int it = 0; it < 200 && bestGap > tol; ++it) {
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            d = e = b - a;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double xtol = 2.0 * std::numeric_limits<double>::epsilon() * std::abs(b) + 1e-15;
        const double m = 0.5 * (c - b);
        if (std::abs(m) <= xtol || fb == 0.0) break;
        if (std::abs(e) >= xtol && std::abs(fa) > std::abs(fb)) {
            double p, q;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                const double qa = fa / fc, r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            else p = -p;
            if (2.0 * p < std::min(3.0 * m * q - std::abs(xtol * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += std::abs(d) > xtol ? d : (m > 0.0 ? xtol : -xtol);
        fb = track(b, eval(b));
    }

    best.iterations = iterations;
    if (bestGap > tol)
        throw NoSolution("root bracket collapsed with |G(R) - alpha| = " + std::to_string(bestGap) +
                         " above tolerance " + std::to_string(tol));
    return best;
}

}  // namespace hypervar
