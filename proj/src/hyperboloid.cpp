#include "hypervar/hyperboloid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hypervar/errors.hpp"
#include "hypervar/special.hpp"

namespace hypervar {

namespace {

struct ReplicateSummary {
    double mean = 0.0;
    double standardError = 0.0;
};

ReplicateSummary summarize(std::span<const double> replicateMeans) {
    const double m = static_cast<double>(replicateMeans.size());
    double mean = 0.0;
    for (double x : replicateMeans) mean += x;
    mean /= m;
    double ss = 0.0;
    for (double x : replicateMeans) ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / (m - 1.0) / m)};
}

void requireRadius(double R) {
    if (!(R >= 0.0) || !std::isfinite(R)) throw InputError("hyperboloid radius R must be >= 0");
}

std::vector<double> toVector(std::span<const double> s) { return {s.begin(), s.end()}; }

}  // namespace

void McConfig::validate() const {
    if (replicates < 2) throw InputError("Monte Carlo needs at least 2 replicates");
    if (samplesPerReplicate < 1) throw InputError("Monte Carlo needs at least 1 sample per replicate");
}

RadialDensity RadialDensity::normal() {
    RadialDensity d;
    d.tag = "normal";
    d.g = [](double s, std::size_t n) {
        return std::exp(-0.5 * s - 0.5 * static_cast<double>(n) * std::log(2.0 * std::numbers::pi));
    };
    d.sampleRadius = [](CounterStream& stream, std::size_t n) {
        return chiQuantile(stream.uniform(), static_cast<int>(n));
    };
    return d;
}

TailEstimate innerTailH(double r2sum, std::span<const double> dMinus, SeriesOptions options) {
    return mixtureUpperTail(ChiSquareMixture(toVector(dMinus)), r2sum, options);
}

TailEstimate gNormalNegOnly(double R, std::span<const double> dMinus, SeriesOptions options) {
    requireRadius(R);
    return mixtureUpperTail(ChiSquareMixture(toVector(dMinus)), R * R, options);
}

TailEstimate gNormalPosOnly(double R, std::span<const double> dPlus, SeriesOptions options) {
    requireRadius(R);
    TailEstimate upper = mixtureUpperTail(ChiSquareMixture(toVector(dPlus)), R * R, options);
    upper.value = std::clamp(1.0 - upper.value, 0.0, 1.0);
    return upper;
}

// ---------------------------------------------------------------------------

InnerTailTable::InnerTailTable(std::span<const double> dMinus, double tolerance,
                               SeriesOptions options)
    : series_(ChiSquareMixture(toVector(dMinus)), options) {
    const double maxWeight = *std::max_element(dMinus.begin(), dMinus.end());
    tMax_ = 4.0 * std::sqrt(maxWeight);
    while (series_.upperTail(tMax_ * tMax_).value > 1e-17) tMax_ *= 1.25;

    constexpr std::size_t kMaxIntervals = std::size_t{1} << 17;
    for (std::size_t intervals = 256;; intervals *= 2) {
        build(intervals);
        if (maxError_ <= tolerance || intervals >= kMaxIntervals) break;
    }
}

void InnerTailTable::build(std::size_t intervals) {
    step_ = tMax_ / static_cast<double>(intervals);
    values_.resize(intervals + 1);
    slopes_.resize(intervals + 1);
    for (std::size_t i = 0; i <= intervals; ++i) {
        const double t = step_ * static_cast<double>(i);
        values_[i] = series_.upperTail(t * t).value;
        slopes_[i] = series_.upperTailRadialDerivative(t);
    }
    // Fritsch-Carlson limiter keeps each cubic piece monotone.
    for (std::size_t i = 0; i < intervals; ++i) {
        const double secant = (values_[i + 1] - values_[i]) / step_;
        if (secant == 0.0) {
            slopes_[i] = slopes_[i + 1] = 0.0;
            continue;
        }
        const double a = std::max(0.0, slopes_[i] / secant);
        const double b = std::max(0.0, slopes_[i + 1] / secant);
        slopes_[i] = a * secant;
        slopes_[i + 1] = b * secant;
        const double r = a * a + b * b;
        if (r > 9.0) {
            const double tau = 3.0 / std::sqrt(r);
            slopes_[i] = tau * a * secant;
            slopes_[i + 1] = tau * b * secant;
        }
    }
    maxError_ = 0.0;
    for (std::size_t i = 0; i < intervals; ++i) {
        const double t = step_ * (static_cast<double>(i) + 0.5);
        maxError_ = std::max(maxError_, std::abs((*this)(t * t) - series_.upperTail(t * t).value));
    }
}

double InnerTailTable::operator()(double s) const {
    const double t = s > 0.0 ? std::sqrt(s) : 0.0;
    if (t >= tMax_) return 0.0;
    const double pos = t / step_;
    const std::size_t i = std::min(static_cast<std::size_t>(pos), values_.size() - 2);
    const double x = pos - static_cast<double>(i);
    const double x2 = x * x, x3 = x2 * x;
    const double h00 = 2.0 * x3 - 3.0 * x2 + 1.0;
    const double h10 = x3 - 2.0 * x2 + x;
    const double h01 = -2.0 * x3 + 3.0 * x2;
    const double h11 = x3 - x2;
    const double v = h00 * values_[i] + h10 * step_ * slopes_[i] + h01 * values_[i + 1] +
                     h11 * step_ * slopes_[i + 1];
    return std::clamp(v, 0.0, 1.0);
}

// ---------------------------------------------------------------------------

MixedNormalEstimator::MixedNormalEstimator(const SignedSpectrum& spectrum, const McConfig& cfg,
                                           SeriesOptions options) {
    if (spectrum.dPlus.empty() || spectrum.dMinus.empty())
        throw InvalidSignature("mixed estimator needs both positive and negative eigenvalues");
    cfg.validate();
    table_ = std::make_shared<const InnerTailTable>(spectrum.dMinus, 1e-10, options);

    const std::size_t nPlus = spectrum.dPlus.size();
    const int df = static_cast<int>(nPlus);
    const std::size_t draws = cfg.antithetic ? (cfg.samplesPerReplicate + 1) / 2 : cfg.samplesPerReplicate;
    radialSquares_.resize(cfg.replicates);
    std::vector<double> direction(nPlus);
    for (std::size_t m = 0; m < cfg.replicates; ++m) {
        auto& out = radialSquares_[m];
        out.reserve(cfg.antithetic ? 2 * draws : draws);
        for (std::size_t i = 0; i < draws; ++i) {
            CounterStream stream(cfg.seed, m, i);
            double norm2 = 0.0;
            for (auto& x : direction) {
                x = stream.normal();
                norm2 += x * x;
            }
            // xi D+ xi^t for xi = direction / |direction|; -xi gives the same value.
            double form = 0.0;
            for (std::size_t j = 0; j < nPlus; ++j) form += spectrum.dPlus[j] * direction[j] * direction[j];
            form /= norm2;
            const double u = stream.uniform();
            const double rho = chiQuantile(u, df);
            out.push_back(rho * rho * form);
            if (cfg.antithetic) {
                const double rhoAnti = chiQuantile(1.0 - u, df);
                out.push_back(rhoAnti * rhoAnti * form);
            }
        }
    }
}

TailEstimate MixedNormalEstimator::operator()(double R) const {
    requireRadius(R);
    const double R2 = R * R;
    std::vector<double> means;
    means.reserve(radialSquares_.size());
    std::size_t evals = 0;
    for (const auto& rep : radialSquares_) {
        double acc = 0.0;
        for (double r2 : rep) acc += (*table_)(R2 + r2);
        means.push_back(acc / static_cast<double>(rep.size()));
        evals += rep.size();
    }
    const ReplicateSummary s = summarize(means);
    return {std::clamp(s.mean, 0.0, 1.0), s.standardError, "spherical-radial-mc", evals};
}

TailEstimate gNormalMixed(double R, const SignedSpectrum& spectrum, const McConfig& cfg,
                          SeriesOptions options) {
    return MixedNormalEstimator(spectrum, cfg, options)(R);
}

// ---------------------------------------------------------------------------

OracleEstimator::OracleEstimator(const SignedSpectrum& spectrum, const McConfig& cfg,
                                 const RadialDensity& density) {
    cfg.validate();
    const std::size_t nMinus = spectrum.dMinus.size();
    const std::size_t n = nMinus + spectrum.dPlus.size();
    if (n == 0) throw InvalidSignature("oracle needs a nonempty spectrum");
    const bool isNormal = density.tag == "normal";

    std::vector<double> z(n);
    sortedGaps_.resize(cfg.replicates);
    for (std::size_t m = 0; m < cfg.replicates; ++m) {
        auto& gaps = sortedGaps_[m];
        gaps.resize(cfg.samplesPerReplicate);
        for (std::size_t i = 0; i < cfg.samplesPerReplicate; ++i) {
            CounterStream stream(cfg.seed, m, i);
            double norm2 = 0.0;
            for (auto& x : z) {
                x = stream.normal();
                norm2 += x * x;
            }
            if (!isNormal) {
                const double scale = density.sampleRadius(stream, n) / std::sqrt(norm2);
                for (auto& x : z) x *= scale;
            }
            double gap = 0.0;
            for (std::size_t j = 0; j < nMinus; ++j) gap += spectrum.dMinus[j] * z[j] * z[j];
            for (std::size_t j = nMinus; j < n; ++j)
                gap -= spectrum.dPlus[j - nMinus] * z[j] * z[j];
            gaps[i] = gap;
        }
        std::sort(gaps.begin(), gaps.end());
    }
}

TailEstimate OracleEstimator::operator()(double R) const {
    requireRadius(R);
    const double R2 = R * R;
    std::vector<double> freq;
    freq.reserve(sortedGaps_.size());
    std::size_t evals = 0;
    for (const auto& gaps : sortedGaps_) {
        const auto first = std::lower_bound(gaps.begin(), gaps.end(), R2);
        freq.push_back(static_cast<double>(gaps.end() - first) / static_cast<double>(gaps.size()));
        evals += gaps.size();
    }
    const ReplicateSummary s = summarize(freq);
    return {s.mean, s.standardError, "mc-oracle", evals};
}

TailEstimate mcOracle(double R, const SignedSpectrum& spectrum, const McConfig& cfg,
                      const RadialDensity& density) {
    return OracleEstimator(spectrum, cfg, density)(R);
}

}  // namespace hypervar
