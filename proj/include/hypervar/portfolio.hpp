#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hypervar/linalg.hpp"

namespace hypervar {

enum class OptionKind { Call, Put };

/// One European option position and the shares held against it.
struct Instrument {
    std::string name;  // identifies the underlying
    OptionKind kind = OptionKind::Call;
    double strike = 0.0;
    double rate = 0.0;      // continuously compounded, annual
    double maturity = 0.0;  // years
    double spot = 0.0;
    std::optional<double> vol;  // annual; derived from sigma when absent
    double quantity = 0.0;      // negative = short
    double hedgeShares = 0.0;
    bool autoHedge = false;  // hedge_shares left empty: hold -quantity * delta shares

    void validate() const;
};

struct Greeks {
    double price = 0.0;
    double delta = 0.0;
    double gamma = 0.0;
    double thetaAnnual = 0.0;  // d price / d calendar time, per year
};

/// Black-Scholes European greeks without dividends. Requires `inst.vol`.
Greeks bsGreeks(const Instrument& inst);

/// Second-order model of the portfolio value in daily log-returns.
struct QuadraticModel {
    double theta = 0.0;          // per day
    std::vector<double> delta1;  // S_i * Delta^i
    SymmetricMatrix gamma1;
    SymmetricMatrix sigma;
    std::vector<std::string> underlyings;
    double grossValue = 0.0;  // sum of |option value| + |share value|

    /// ||delta1||_inf <= relTol * grossValue
    bool deltaHedged(double relTol = 1e-8) const;
};

/// sqrt(dayCount * sigma_ii)
double volatilityFromCovariance(const SymmetricMatrix& sigma, std::size_t index, double dayCount = 252.0);

/// Aggregates greeks per underlying (instruments sharing a name are summed, in
/// order of first appearance), then maps them to log-return coordinates:
/// Delta1_i = S_i Delta_i, Gamma1_ii = S_i^2 Gamma_ii + Delta1_i, Theta per day.
/// Instruments without a volatility take it from the matching sigma diagonal;
/// instruments flagged `autoHedge` get hedgeShares = -quantity * delta.
QuadraticModel buildQuadraticModel(const std::vector<Instrument>& instruments,
                                   const SymmetricMatrix& sigma, double dayCount = 252.0);

/// Shares that delta-hedge `quantity` options: -quantity * delta.
double hedgeSharesFor(const Instrument& inst);

/// Daily log-returns in rows (oldest first), one column per ticker.
struct ReturnSeries {
    std::vector<std::string> tickers;
    std::vector<std::vector<double>> observations;

    /// log(P_t / P_{t-1}) from a price table; needs at least 2 price rows.
    static ReturnSeries fromPrices(std::vector<std::string> tickers,
                                   const std::vector<std::vector<double>>& prices);
};

/// RiskMetrics recursion: S_1 = x_1^t x_1, S_t = lambda S_{t-1} + (1 - lambda) x_t^t x_t.
SymmetricMatrix ewmaCovariance(const ReturnSeries& series, double lambda);

std::vector<Instrument> readInstrumentsCsv(const std::string& path);
ReturnSeries readPricesCsv(const std::string& path);

}  // namespace hypervar
