#include <gtest/gtest.h>

#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <random>

#include "hypervar/errors.hpp"
#include "hypervar/io.hpp"
#include "hypervar/portfolio.hpp"

using namespace hypervar;

namespace {

// Black-Scholes price written out independently of the library.
double referencePrice(OptionKind kind, double s, double k, double r, double t, double v) {
    const boost::math::normal_distribution<double> n;
    const double d1 = (std::log(s / k) + (r + 0.5 * v * v) * t) / (v * std::sqrt(t));
    const double d2 = d1 - v * std::sqrt(t);
    if (kind == OptionKind::Call) return s * boost::math::cdf(n, d1) - k * std::exp(-r * t) * boost::math::cdf(n, d2);
    return k * std::exp(-r * t) * boost::math::cdf(n, -d2) - s * boost::math::cdf(n, -d1);
}

Instrument option(OptionKind kind, double s, double k, double r, double t, double v, double q = 1.0) {
    Instrument i;
    i.name = "X";
    i.kind = kind;
    i.spot = s;
    i.strike = k;
    i.rate = r;
    i.maturity = t;
    i.vol = v;
    i.quantity = q;
    return i;
}

ReturnSeries seriesOf(std::vector<std::vector<double>> rows, std::size_t n) {
    ReturnSeries r;
    for (std::size_t j = 0; j < n; ++j) r.tickers.push_back("T" + std::to_string(j));
    r.observations = std::move(rows);
    return r;
}

}  // namespace

TEST(BlackScholes, PriceMatchesReference) {
    for (auto kind : {OptionKind::Call, OptionKind::Put}) {
        const auto g = bsGreeks(option(kind, 100.0, 95.0, 0.03, 0.5, 0.25));
        EXPECT_NEAR(g.price, referencePrice(kind, 100.0, 95.0, 0.03, 0.5, 0.25), 1e-11);
    }
}

TEST(BlackScholes, DeepInTheMoneyDelta) {
    EXPECT_NEAR(bsGreeks(option(OptionKind::Call, 100.0, 1.0, 0.05, 0.25, 0.2)).delta, 1.0, 1e-6);
    EXPECT_NEAR(bsGreeks(option(OptionKind::Call, 200.0, 50.0, 0.05, 0.25, 0.2)).delta, 1.0, 1e-12);
    EXPECT_NEAR(bsGreeks(option(OptionKind::Put, 50.0, 200.0, 0.05, 0.25, 0.2)).delta, -1.0, 1e-12);
}

TEST(BlackScholes, PutCallParity) {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        const double s = 20 + 80 * u(rng), k = 20 + 80 * u(rng), r = 0.1 * u(rng), t = 0.05 + 2 * u(rng),
                     v = 0.05 + 0.6 * u(rng);
        const auto c = bsGreeks(option(OptionKind::Call, s, k, r, t, v));
        const auto p = bsGreeks(option(OptionKind::Put, s, k, r, t, v));
        EXPECT_NEAR(c.price - p.price, s - k * std::exp(-r * t), 1e-10 * std::max(1.0, s));
        EXPECT_NEAR(c.delta - p.delta, 1.0, 1e-12);
        EXPECT_NEAR(c.gamma, p.gamma, 1e-14);
    }
}

TEST(BlackScholes, GreeksMatchFiniteDifferencesOfReferencePrice) {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        const auto kind = i % 2 ? OptionKind::Call : OptionKind::Put;
        const double s = 20 + 80 * u(rng), k = s * (0.8 + 0.4 * u(rng)), r = 0.1 * u(rng),
                     t = 0.1 + 1.5 * u(rng), v = 0.1 + 0.5 * u(rng);
        const auto g = bsGreeks(option(kind, s, k, r, t, v));
        const double hs = 1e-3 * s, ht = 1e-4;
        const auto price = [&](double ss, double tt) { return referencePrice(kind, ss, k, r, tt, v); };
        const double fdDelta = (price(s + hs, t) - price(s - hs, t)) / (2 * hs);
        const double fdGamma = (bsGreeks(option(kind, s + 1e-4 * s, k, r, t, v)).delta -
                                bsGreeks(option(kind, s - 1e-4 * s, k, r, t, v)).delta) / (2e-4 * s);
        const double fdTheta = -(price(s, t + ht) - price(s, t - ht)) / (2 * ht);
        EXPECT_NEAR(g.delta, fdDelta, 1e-5);
        EXPECT_NEAR(g.gamma, fdGamma, 1e-5 * g.gamma);
        EXPECT_NEAR(g.thetaAnnual, fdTheta, 1e-5 * std::max(1.0, std::abs(fdTheta)));
    }
}

TEST(QuadraticModel, HedgedPortfolioHasZeroDelta) {
    auto a = option(OptionKind::Call, 40.0, 44.0, 0.1, 0.25, 0.3, -1.0);
    a.autoHedge = true;
    auto b = option(OptionKind::Put, 40.0, 38.0, 0.1, 0.25, 0.3, 2.0);
    b.hedgeShares = hedgeSharesFor(b);
    auto c = option(OptionKind::Call, 25.0, 24.0, 0.1, 0.25, 0.2, -3.0);
    c.name = "Y";
    c.autoHedge = true;
    SymmetricMatrix sigma(2);
    sigma.set(0, 0, 4e-4);
    sigma.set(1, 1, 2e-4);
    sigma.set(0, 1, 1e-4);
    const auto m = buildQuadraticModel({a, b, c}, sigma);
    ASSERT_EQ(m.underlyings, (std::vector<std::string>{"X", "Y"}));
    EXPECT_TRUE(m.deltaHedged());
    for (double d : m.delta1) EXPECT_NEAR(d, 0.0, 1e-12);
    EXPECT_EQ(m.gamma1(0, 1), 0.0);

    const double gammaX = -bsGreeks(a).gamma + 2.0 * bsGreeks(b).gamma;
    EXPECT_NEAR(m.gamma1(0, 0), 40.0 * 40.0 * gammaX, 1e-12);
    const double thetaDay = (-bsGreeks(a).thetaAnnual + 2.0 * bsGreeks(b).thetaAnnual - 3.0 * bsGreeks(c).thetaAnnual) / 252.0;
    EXPECT_NEAR(m.theta, thetaDay, 1e-12);
}

TEST(QuadraticModel, UnhedgedDeltaEntersGamma1) {
    const auto a = option(OptionKind::Call, 50.0, 50.0, 0.0, 1.0, 0.2, 1.0);
    const auto m = buildQuadraticModel({a}, SymmetricMatrix::identity(1));
    const auto g = bsGreeks(a);
    EXPECT_NEAR(m.delta1[0], 50.0 * g.delta, 1e-12);
    EXPECT_NEAR(m.gamma1(0, 0), 2500.0 * g.gamma + 50.0 * g.delta, 1e-10);
    EXPECT_FALSE(m.deltaHedged());
}

TEST(QuadraticModel, ShortCallsFromDataAreAllNegative) {
    const auto sigma = io::readSymmetricCsv(std::string(HYPERVAR_DATA_DIR) + "/cac40_calls_sigma.csv");
    const auto inst = readInstrumentsCsv(std::string(HYPERVAR_DATA_DIR) + "/cac40_calls_instruments.csv");
    const auto m = buildQuadraticModel(inst, sigma);
    EXPECT_EQ(m.underlyings.size(), 9u);
    EXPECT_TRUE(m.deltaHedged());
    for (std::size_t i = 0; i < 9; ++i) EXPECT_LT(m.gamma1(i, i), 0.0);
    EXPECT_TRUE(std::isfinite(m.theta));
    EXPECT_GT(m.theta, 0.0);          // short options earn time decay
}

TEST(QuadraticModel, DimensionAndSpotChecks) {
    const auto a = option(OptionKind::Call, 50.0, 50.0, 0.0, 1.0, 0.2);
    EXPECT_THROW(buildQuadraticModel({a}, SymmetricMatrix::identity(2)), DimensionMismatch);
    auto b = a;
    b.spot = 51.0;
    EXPECT_THROW(buildQuadraticModel({a, b}, SymmetricMatrix::identity(1)), InputError);
    EXPECT_THROW(buildQuadraticModel({}, SymmetricMatrix::identity(1)), InputError);
}

TEST(Ewma, ClosedForm) {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> z(0.0, 0.01);
    const std::size_t n = 3, T = 40;
    std::vector<std::vector<double>> rows(T, std::vector<double>(n));
    for (auto& r : rows)
        for (auto& x : r) x = z(rng);
    const double lambda = 0.94;
    const auto cov = ewmaCovariance(seriesOf(rows, n), lambda);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double ref = std::pow(lambda, T - 1) * rows[0][i] * rows[0][j];
            for (std::size_t t = 1; t < T; ++t)
                ref += (1 - lambda) * std::pow(lambda, T - 1 - t) * rows[t][i] * rows[t][j];
            EXPECT_NEAR(cov(i, j), ref, 1e-12 * 1e-4);
        }
}

TEST(Ewma, SmallLambdaKeepsOnlyLastObservation) {
    const std::vector<std::vector<double>> rows{{0.01, -0.02}, {0.03, 0.005}};
    const auto cov = ewmaCovariance(seriesOf(rows, 2), 1e-12);
    EXPECT_NEAR(cov(0, 0), 9e-4, 1e-15);
    EXPECT_NEAR(cov(0, 1), 1.5e-4, 1e-15);
    EXPECT_NEAR(cov(1, 1), 2.5e-5, 1e-15);
}

TEST(Ewma, ZeroReturnsAndSingleObservation) {
    const auto zero = ewmaCovariance(seriesOf({{0.0, 0.0}, {0.0, 0.0}}, 2), 0.9);
    EXPECT_EQ(zero.maxAbs(), 0.0);
    const auto one = ewmaCovariance(seriesOf({{0.1, 0.2}}, 2), 0.9);
    EXPECT_NEAR(one(0, 1), 0.02, 1e-15);
    EXPECT_THROW(ewmaCovariance(seriesOf({{0.1}}, 1), 1.0), InputError);
    EXPECT_THROW(ewmaCovariance(seriesOf({}, 1), 0.5), InputError);
}

TEST(Ewma, PositiveSemidefiniteAndPermutationEquivariant) {
    std::mt19937_64 rng(2);
    std::normal_distribution<double> z(0.0, 0.02);
    const std::size_t n = 4;
    std::vector<std::vector<double>> rows(30, std::vector<double>(n));
    for (auto& r : rows)
        for (auto& x : r) x = z(rng);
    const auto cov = ewmaCovariance(seriesOf(rows, n), 0.97);
    for (double ev : symEigen(cov).eigenvalues) EXPECT_GE(ev, -1e-15);

    const std::vector<std::size_t> perm{2, 0, 3, 1};
    auto permuted = rows;
    for (std::size_t t = 0; t < rows.size(); ++t)
        for (std::size_t j = 0; j < n; ++j) permuted[t][j] = rows[t][perm[j]];
    const auto pcov = ewmaCovariance(seriesOf(permuted, n), 0.97);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) EXPECT_EQ(pcov(i, j), cov(perm[i], perm[j]));
}

TEST(Ewma, FromPricesUsesLogReturns) {
    const auto r = ReturnSeries::fromPrices({"A"}, {{100.0}, {110.0}, {99.0}});
    ASSERT_EQ(r.observations.size(), 2u);
    EXPECT_NEAR(r.observations[0][0], std::log(1.1), 1e-15);
    EXPECT_NEAR(r.observations[1][0], std::log(0.9), 1e-15);
    EXPECT_THROW(ReturnSeries::fromPrices({"A"}, {{100.0}}), InputError);
    EXPECT_THROW(ReturnSeries::fromPrices({"A"}, {{100.0}, {0.0}}), InputError);
}
