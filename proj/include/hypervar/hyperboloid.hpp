#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "hypervar/chi2mix.hpp"
#include "hypervar/linalg.hpp"
#include "hypervar/random.hpp"
#include "hypervar/tail_estimate.hpp"

namespace hypervar {

/// Sampling configuration shared by the Monte Carlo estimators.
struct McConfig {
    std::uint64_t seed = 42;
    std::size_t replicates = 32;
    std::size_t samplesPerReplicate = 100000;
    bool antithetic = true;

    void validate() const;
};

/// Radial law of a spherically symmetric density in R^n.
///
/// `g(s, n)` is the density as a function of the squared radius, normalized so
/// that the integral of g(|z|^2, n) over R^n is one. `sampleRadius(stream, n)`
/// draws |z|. Only the normal law is validated; custom laws are a hook.
struct RadialDensity {
    std::string tag;
    std::function<double(double, std::size_t)> g;
    std::function<double(CounterStream&, std::size_t)> sampleRadius;

    static RadialDensity normal();
};

struct HyperboloidProblem {
    SignedSpectrum spectrum;
    RadialDensity density = RadialDensity::normal();
};

/// Tolerances and randomization for the double spherical-radial integrator.
struct QuadConfig {
    std::uint64_t seed = 42;
    std::size_t rotations = 32;
    double outerRelTol = 1e-6;
    double innerRelTol = 1e-8;
    std::size_t maxIntervals = 400;
};

// ---------------------------------------------------------------------------
// Normal density, deterministic paths

/// H at R^2 + r^2 = r2sum: P(sum d-_j chi2_1 >= r2sum).
TailEstimate innerTailH(double r2sum, std::span<const double> dMinus, SeriesOptions options = {});

/// n+ = 0: G(R) = P(sum d-_j chi2_1 >= R^2).
TailEstimate gNormalNegOnly(double R, std::span<const double> dMinus, SeriesOptions options = {});

/// n- = 0: G(R) = P(sum d+_j chi2_1 <= R^2), nondecreasing in R.
TailEstimate gNormalPosOnly(double R, std::span<const double> dPlus, SeriesOptions options = {});

/// H(t^2) tabulated on a uniform grid in the radius t, interpolated by monotone
/// cubic Hermite using exact derivatives from the series. The grid is doubled
/// until the midpoint error against the series is at most `tolerance`.
class InnerTailTable {
public:
    explicit InnerTailTable(std::span<const double> dMinus, double tolerance = 1e-10,
                            SeriesOptions options = {});

    /// H at squared radius s = R^2 + r^2.
    double operator()(double s) const;

    std::size_t nodes() const noexcept { return values_.size(); }
    double maxMidpointError() const noexcept { return maxError_; }
    double radiusLimit() const noexcept { return tMax_; }

private:
    void build(std::size_t intervals);

    RubenSeries series_;
    double tMax_ = 0.0;
    double step_ = 0.0;
    double maxError_ = 0.0;
    std::vector<double> values_;
    std::vector<double> slopes_;
};

// ---------------------------------------------------------------------------
// Monte Carlo paths. The estimator classes draw their samples once at
// construction; every call reuses them (common random numbers), so G is a
// deterministic nonincreasing function of R for a fixed configuration.

/// Mixed signature: E_z[ H(R^2 + z D+ z^t) ] by spherical-radial sampling,
/// z = rho * xi with xi uniform on the sphere and rho chi-distributed.
class MixedNormalEstimator {
public:
    MixedNormalEstimator(const SignedSpectrum& spectrum, const McConfig& cfg,
                         SeriesOptions options = {});

    TailEstimate operator()(double R) const;

    const InnerTailTable& table() const noexcept { return *table_; }

private:
    std::shared_ptr<const InnerTailTable> table_;
    std::vector<std::vector<double>> radialSquares_;  // per replicate: rho^2 * xi D+ xi^t
};

TailEstimate gNormalMixed(double R, const SignedSpectrum& spectrum, const McConfig& cfg,
                          SeriesOptions options = {});

/// Brute-force sampler of w ~ |D|^{1/2} z counting |w-|^2 - |w+|^2 >= R^2.
class OracleEstimator {
public:
    OracleEstimator(const SignedSpectrum& spectrum, const McConfig& cfg,
                    const RadialDensity& density = RadialDensity::normal());

    TailEstimate operator()(double R) const;

private:
    std::vector<std::vector<double>> sortedGaps_;  // per replicate, ascending
};

TailEstimate mcOracle(double R, const SignedSpectrum& spectrum, const McConfig& cfg,
                      const RadialDensity& density = RadialDensity::normal());

// ---------------------------------------------------------------------------
// General elliptic density

/// Double spherical-radial evaluation of G(R) for an arbitrary radial density.
/// Requires both signature parts nonempty (InvalidSignature otherwise).
TailEstimate gGeneralElliptic(double R, const SignedSpectrum& spectrum, const RadialDensity& density,
                              const QuadConfig& cfg = {});

/// Haar-distributed orthogonal n x n matrix drawn from `stream`.
Matrix randomRotation(std::size_t n, CounterStream& stream);

/// Surface area of the unit sphere in R^n.
double unitSphereArea(std::size_t n);

}  // namespace hypervar
