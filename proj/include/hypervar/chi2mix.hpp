#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hypervar/tail_estimate.hpp"

namespace hypervar {

/// Q = sum_j w_j * chi2_1, independent terms, all weights > 0.
class ChiSquareMixture {
public:
    explicit ChiSquareMixture(std::vector<double> weights);

    std::span<const double> weights() const noexcept { return weights_; }
    double minWeight() const noexcept { return minWeight_; }
    double maxWeight() const noexcept { return maxWeight_; }

private:
    std::vector<double> weights_;
    double minWeight_ = 0.0;
    double maxWeight_ = 0.0;
};

struct SeriesOptions {
    double tolerance = 1e-10;
    std::size_t maxTerms = 20000;
};

/// Ruben's representation of the distribution of a central chi-square mixture:
///
///     P(Q <= x) = sum_k c_k * F_{n+2k}(x / beta),    beta = min weight,
///
/// with c_0 = prod_j sqrt(beta / w_j) and c_k = (1/2k) sum_j S_j(k), where
/// S_j(k) = g_j (c_{k-1} + S_j(k-1)), g_j = 1 - beta / w_j. All c_k are
/// nonnegative and sum to one, so 1 - sum_{k<=K} c_k bounds the truncation error
/// uniformly in x. Coefficients are computed once at construction.
class RubenSeries {
public:
    explicit RubenSeries(const ChiSquareMixture& mix, SeriesOptions options = {});

    /// P(Q >= x); exactly 1 for x <= 0.
    TailEstimate upperTail(double x) const;

    /// Density of Q at x > 0.
    double density(double x) const;

    /// d/dt P(Q >= t^2) = -2 t f(t^2), finite at t = 0 for every degree count.
    double upperTailRadialDerivative(double t) const;

    std::size_t terms() const noexcept { return coefficients_.size(); }
    double truncationBound() const noexcept { return remainder_; }
    std::size_t degrees() const noexcept { return degrees_; }

private:
    std::vector<double> coefficients_;
    std::vector<double> suffixMass_;  // suffixMass_[k] = sum_{i>=k} c_i
    double beta_ = 0.0;
    double remainder_ = 0.0;
    std::size_t degrees_ = 0;
};

/// P(sum_j w_j chi2_1 >= x) with truncation error <= options.tolerance.
/// Throws SeriesBudgetExceeded when the term cap is hit first.
TailEstimate mixtureUpperTail(const ChiSquareMixture& mix, double x, SeriesOptions options = {});

}  // namespace hypervar
