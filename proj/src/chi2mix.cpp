#include "hypervar/chi2mix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hypervar/errors.hpp"
#include "hypervar/special.hpp"

namespace hypervar {

ChiSquareMixture::ChiSquareMixture(std::vector<double> weights) : weights_(std::move(weights)) {
    if (weights_.empty()) throw InputError("chi-square mixture needs at least one weight");
    for (double w : weights_)
        if (!(w > 0.0) || !std::isfinite(w))
            throw InputError("chi-square mixture weights must be positive and finite");
    const auto [lo, hi] = std::minmax_element(weights_.begin(), weights_.end());
    minWeight_ = *lo;
    maxWeight_ = *hi;
}

RubenSeries::RubenSeries(const ChiSquareMixture& mix, SeriesOptions options)
    : beta_(mix.minWeight()), degrees_(mix.weights().size()) {
    const auto w = mix.weights();
    std::vector<double> ratio(w.size());
    double logC0 = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j) {
        ratio[j] = 1.0 - beta_ / w[j];
        logC0 += 0.5 * std::log(beta_ / w[j]);
    }

    std::vector<double> s(w.size(), 0.0);
    double c = std::exp(logC0);
    double mass = c;
    coefficients_.push_back(c);
    while (1.0 - mass > options.tolerance) {
        if (coefficients_.size() >= options.maxTerms)
            throw SeriesBudgetExceeded(coefficients_.size(), 1.0 - mass);
        const double k = static_cast<double>(coefficients_.size());
        double acc = 0.0;
        for (std::size_t j = 0; j < w.size(); ++j) {
            s[j] = ratio[j] * (c + s[j]);
            acc += s[j];
        }
        c = acc / (2.0 * k);
        coefficients_.push_back(c);
        mass += c;
        // Summation noise can leave the mass a few ulps short of the tolerance.
        if (c < 1e-300) break;
    }
    remainder_ = std::max(0.0, 1.0 - mass);

    suffixMass_.assign(coefficients_.size() + 1, 0.0);
    for (std::size_t k = coefficients_.size(); k-- > 0;)
        suffixMass_[k] = suffixMass_[k + 1] + coefficients_[k];
}

TailEstimate RubenSeries::upperTail(double x) const {
    TailEstimate est;
    est.method = "ruben-series";
    if (x <= 0.0) {
        est.value = 1.0;
        return est;
    }
    const double u = x / (2.0 * beta_);
    const double logU = std::log(u);
    double a = 0.5 * static_cast<double>(degrees_);
    double q = gammaQ(a, u);
    // log of u^a e^{-u} / Gamma(a+1), the increment Q(a+1,u) - Q(a,u).
    double logStep = a * logU - u - std::lgamma(a + 1.0);

    double sum = 0.0;
    std::size_t k = 0;
    for (; k < coefficients_.size(); ++k) {
        if (q >= 1.0 - 1e-16) {
            sum += suffixMass_[k];
            break;
        }
        sum += coefficients_[k] * q;
        q = std::min(1.0, q + std::exp(logStep));
        a += 1.0;
        logStep += logU - std::log(a);
    }
    est.value = std::clamp(sum, 0.0, 1.0);
    est.standardError = remainder_;
    est.evaluations = k + 1;
    return est;
}

double RubenSeries::density(double x) const {
    if (x <= 0.0) {
        if (degrees_ == 1) return std::numeric_limits<double>::infinity();
        return degrees_ == 2 ? coefficients_[0] / (2.0 * beta_) : 0.0;
    }
    const double u = x / (2.0 * beta_);
    const double logU = std::log(u);
    double a = 0.5 * static_cast<double>(degrees_);
    // log of u^{a-1} e^{-u} / Gamma(a)
    double logTerm = (a - 1.0) * logU - u - std::lgamma(a);
    double sum = 0.0;
    for (std::size_t k = 0; k < coefficients_.size(); ++k) {
        const double term = std::exp(logTerm);
        sum += coefficients_[k] * term;
        // Past the mode the Poisson-like factor only shrinks; bound the rest by it.
        if (a > u && term * suffixMass_[k + 1] < 1e-17 * sum) break;
        logTerm += logU - std::log(a);
        a += 1.0;
    }
    return sum / (2.0 * beta_);
}

double RubenSeries::upperTailRadialDerivative(double t) const {
    if (t < 0.0) t = -t;
    // -2t f(t^2) = -sum_k c_k * 2 t^{2a-1} (2 beta)^{-a} e^{-u} / Gamma(a),  u = t^2 / (2 beta)
    const double twoBeta = 2.0 * beta_;
    const double u = t * t / twoBeta;
    double a = 0.5 * static_cast<double>(degrees_);
    if (t == 0.0) {
        // Only the a = 1/2 term survives at the origin.
        return degrees_ == 1 ? -coefficients_[0] * 2.0 / (std::sqrt(twoBeta) * std::tgamma(0.5))
                             : 0.0;
    }
    const double logT = std::log(t);
    const double logTwoBeta = std::log(twoBeta);
    double logTerm = std::log(2.0) + (2.0 * a - 1.0) * logT - a * logTwoBeta - u - std::lgamma(a);
    const double logStep = 2.0 * logT - logTwoBeta;  // multiplies by u / a per step
    double sum = 0.0;
    for (std::size_t k = 0; k < coefficients_.size(); ++k) {
        const double term = std::exp(logTerm);
        sum += coefficients_[k] * term;
        if (a > u && term * suffixMass_[k + 1] < 1e-17 * sum) break;
        logTerm += logStep - std::log(a);
        a += 1.0;
    }
    return -sum;
}

TailEstimate mixtureUpperTail(const ChiSquareMixture& mix, double x, SeriesOptions options) {
    if (!std::isfinite(x)) throw InputError("mixtureUpperTail: x must be finite");
    if (x <= 0.0) return TailEstimate{1.0, 0.0, "ruben-series", 0};
    return RubenSeries(mix, options).upperTail(x);
}

}  // namespace hypervar
