#include <algorithm>
#include <cmath>
#include <numbers>

#include "hypervar/errors.hpp"
#include "hypervar/hyperboloid.hpp"
#include "hypervar/quadrature.hpp"

namespace hypervar {

double unitSphereArea(std::size_t n) {
    const double half = 0.5 * static_cast<double>(n);
    return 2.0 * std::pow(std::numbers::pi, half) / std::tgamma(half);
}

Matrix randomRotation(std::size_t n, CounterStream& stream) {
    // Gram-Schmidt on Gaussian columns yields a Haar-distributed orthogonal matrix.
    Matrix q(n);
    for (std::size_t c = 0; c < n; ++c) {
        for (std::size_t r = 0; r < n; ++r) q(r, c) = stream.normal();
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t p = 0; p < c; ++p) {
                double dot = 0.0;
                for (std::size_t r = 0; r < n; ++r) dot += q(r, p) * q(r, c);
                for (std::size_t r = 0; r < n; ++r) q(r, c) -= dot * q(r, p);
            }
        }
        double norm = 0.0;
        for (std::size_t r = 0; r < n; ++r) norm += q(r, c) * q(r, c);
        norm = std::sqrt(norm);
        for (std::size_t r = 0; r < n; ++r) q(r, c) /= norm;
    }
    return q;
}

namespace {

/// Quadratic form xi |D|^{-1} xi^t for each column of `rotation`.
std::vector<double> inverseForms(const Matrix& rotation, std::span<const double> weights) {
    const std::size_t n = weights.size();
    std::vector<double> forms(n, 0.0);
    for (std::size_t c = 0; c < n; ++c)
        for (std::size_t r = 0; r < n; ++r) forms[c] += rotation(r, c) * rotation(r, c) / weights[r];
    return forms;
}

}  // namespace

TailEstimate gGeneralElliptic(double R, const SignedSpectrum& spectrum, const RadialDensity& density,
                              const QuadConfig& cfg) {
    if (spectrum.dPlus.empty() || spectrum.dMinus.empty())
        throw InvalidSignature("general elliptic integrator needs both positive and negative eigenvalues");
    if (!(R >= 0.0)) throw InputError("hyperboloid radius R must be >= 0");
    if (cfg.rotations < 2) throw InputError("general elliptic integrator needs at least 2 rotations");

    // x = w- in R^{n1} (the side that must exceed), y = w+ in R^{n2}.
    const std::size_t n1 = spectrum.dMinus.size();
    const std::size_t n2 = spectrum.dPlus.size();
    const std::size_t n = n1 + n2;

    double logDet = 0.0;
    for (double d : spectrum.dMinus) logDet += std::log(d);
    for (double d : spectrum.dPlus) logDet += std::log(d);
    const double prefactor = unitSphereArea(n1) * unitSphereArea(n2) * std::exp(-0.5 * logDet);

    const double R2 = R * R;
    const double e1 = static_cast<double>(n1) - 1.0;
    const double e2 = static_cast<double>(n2) - 1.0;
    const quad::Options inner{cfg.innerRelTol, 0.0, cfg.maxIntervals};
    const quad::Options outer{cfg.outerRelTol, 0.0, cfg.maxIntervals};

    auto g = [&](double s) {
        const double v = density.g(s, n);
        if (v < 0.0 || !std::isfinite(v)) throw InputError("radial density must be finite and >= 0");
        return v;
    };

    // Decay length along a ray where the argument of g grows like k r^2 near
    // r = r0: 1 / (sqrt(2 k |L|) + 2 k r0 |L|) with L = d log g / ds. For the
    // normal law (L = -1/2) this is 1 / (sqrt(k) + k r0).
    auto decayScale = [&](double k, double r0, double s0) {
        double slope = 0.5;
        const double h = 1e-4 * std::max(s0, 1e-4);
        const double lo = density.g(std::max(s0 - h, 0.0), n), hi = density.g(s0 + h, n);
        if (lo > 0.0 && hi > 0.0) {
            const double fd = -(std::log(hi) - std::log(lo)) / (s0 + h - std::max(s0 - h, 0.0));
            if (std::isfinite(fd) && fd > 0.0) slope = fd;
        }
        return 1.0 / (std::sqrt(2.0 * k * slope) + 2.0 * k * r0 * slope);
    };

    // I(a, b) = int_0^inf r2^{n2-1} int_{sqrt(R^2+r2^2)}^inf r1^{n1-1} g(r1^2 a + r2^2 b) dr1 dr2
    std::size_t evaluations = 0;
    double quadError = 0.0;
    auto pairIntegral = [&](double a, double b) {
        auto outerIntegrand = [&](double r2) {
            const double lower = std::sqrt(R2 + r2 * r2);
            const double scale = decayScale(a, lower, a * lower * lower + b * r2 * r2);
            auto innerIntegrand = [&](double r1) {
                return std::pow(r1, e1) * g(r1 * r1 * a + r2 * r2 * b);
            };
            const quad::Result in = quad::integrateTail(innerIntegrand, lower, scale, inner);
            evaluations += in.evaluations;
            return std::pow(r2, e2) * in.value;
        };
        const double scale = decayScale(a + b, R, a * R2);
        const quad::Result out = quad::integrateTail(outerIntegrand, 0.0, scale, outer);
        quadError += out.errorEstimate;
        return out.value;
    };

    std::vector<double> estimates;
    estimates.reserve(cfg.rotations);
    for (std::size_t m = 0; m < cfg.rotations; ++m) {
        CounterStream s1(cfg.seed, m, 0), s2(cfg.seed, m, 1);
        const auto forms1 = inverseForms(randomRotation(n1, s1), spectrum.dMinus);
        const auto forms2 = inverseForms(randomRotation(n2, s2), spectrum.dPlus);
        // Antipodal degree-3 rule {+-Q e_j}; the integrand is even in xi, so each
        // antipodal pair collapses to one node of weight 1/n.
        double acc = 0.0;
        for (double a : forms1)
            for (double b : forms2) acc += pairIntegral(a, b);
        estimates.push_back(prefactor * acc / static_cast<double>(n1 * n2));
    }

    const double mm = static_cast<double>(estimates.size());
    double mean = 0.0;
    for (double v : estimates) mean += v;
    mean /= mm;
    double ss = 0.0;
    for (double v : estimates) ss += (v - mean) * (v - mean);
    const double spreadSe = std::sqrt(ss / (mm - 1.0) / mm);
    const double quadSe = prefactor * quadError / (mm * static_cast<double>(n1 * n2));

    TailEstimate est;
    est.value = std::clamp(mean, 0.0, 1.0);
    est.standardError = std::hypot(spreadSe, quadSe);
    est.method = "spherical-radial-quadrature";
    est.evaluations = evaluations;
    return est;
}

}  // namespace hypervar
