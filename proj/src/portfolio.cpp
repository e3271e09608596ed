#include "hypervar/portfolio.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

#include "hypervar/errors.hpp"
#include "hypervar/io.hpp"
#include "hypervar/special.hpp"

namespace hypervar {

void Instrument::validate() const {
    if (!(strike > 0.0)) throw InputError(name + ": strike must be positive");
    if (!(spot > 0.0)) throw InputError(name + ": spot must be positive");
    if (!(maturity > 0.0)) throw InputError(name + ": maturity must be positive");
    if (vol && !(*vol > 0.0)) throw InputError(name + ": volatility must be positive");
}

Greeks bsGreeks(const Instrument& inst) {
    inst.validate();
    if (!inst.vol) throw InputError(inst.name + ": volatility required for Black-Scholes greeks");
    const double s = inst.spot, k = inst.strike, r = inst.rate, t = inst.maturity, v = *inst.vol;
    const double sqrtT = std::sqrt(t);
    const double d1 = (std::log(s / k) + (r + 0.5 * v * v) * t) / (v * sqrtT);
    const double d2 = d1 - v * sqrtT;
    const double pdf = std::exp(-0.5 * d1 * d1) / std::sqrt(2.0 * std::numbers::pi);
    const double discount = k * std::exp(-r * t);

    Greeks g;
    g.gamma = pdf / (s * v * sqrtT);
    const double decay = -s * pdf * v / (2.0 * sqrtT);
    if (inst.kind == OptionKind::Call) {
        g.price = s * normalCdf(d1) - discount * normalCdf(d2);
        g.delta = normalCdf(d1);
        g.thetaAnnual = decay - r * discount * normalCdf(d2);
    } else {
        g.price = discount * normalCdf(-d2) - s * normalCdf(-d1);
        g.delta = normalCdf(d1) - 1.0;
        g.thetaAnnual = decay + r * discount * normalCdf(-d2);
    }
    return g;
}

double hedgeSharesFor(const Instrument& inst) { return -inst.quantity * bsGreeks(inst).delta; }

bool QuadraticModel::deltaHedged(double relTol) const {
    double worst = 0.0;
    for (double d : delta1) worst = std::max(worst, std::abs(d));
    return worst <= relTol * grossValue;
}

double volatilityFromCovariance(const SymmetricMatrix& sigma, std::size_t index, double dayCount) {
    return std::sqrt(dayCount * sigma(index, index));
}

QuadraticModel buildQuadraticModel(const std::vector<Instrument>& instruments,
                                   const SymmetricMatrix& sigma, double dayCount) {
    if (instruments.empty()) throw InputError("no instruments");
    if (!(dayCount > 0.0)) throw InputError("day count must be positive");

    QuadraticModel model;
    std::vector<double> spots;
    std::vector<std::size_t> slot(instruments.size());
    for (std::size_t i = 0; i < instruments.size(); ++i) {
        const auto& inst = instruments[i];
        inst.validate();
        const auto it = std::find(model.underlyings.begin(), model.underlyings.end(), inst.name);
        if (it == model.underlyings.end()) {
            slot[i] = model.underlyings.size();
            model.underlyings.push_back(inst.name);
            spots.push_back(inst.spot);
        } else {
            slot[i] = static_cast<std::size_t>(it - model.underlyings.begin());
            if (spots[slot[i]] != inst.spot)
                throw InputError(inst.name + ": instruments on one underlying disagree on spot");
        }
    }
    const std::size_t n = model.underlyings.size();
    if (sigma.size() != n)
        throw DimensionMismatch("covariance is " + std::to_string(sigma.size()) + "x" +
                                std::to_string(sigma.size()) + " but there are " + std::to_string(n) +
                                " underlyings");

    std::vector<double> delta(n, 0.0), gamma(n, 0.0);
    double thetaAnnual = 0.0;
    for (std::size_t i = 0; i < instruments.size(); ++i) {
        Instrument inst = instruments[i];
        if (!inst.vol) inst.vol = volatilityFromCovariance(sigma, slot[i], dayCount);
        const Greeks g = bsGreeks(inst);
        if (inst.autoHedge) inst.hedgeShares = -inst.quantity * g.delta;
        delta[slot[i]] += inst.quantity * g.delta + inst.hedgeShares;
        gamma[slot[i]] += inst.quantity * g.gamma;
        thetaAnnual += inst.quantity * g.thetaAnnual;
        model.grossValue += std::abs(inst.quantity * g.price) + std::abs(inst.hedgeShares * inst.spot);
    }

    model.theta = thetaAnnual / dayCount;
    model.delta1.resize(n);
    model.gamma1 = SymmetricMatrix(n);
    for (std::size_t i = 0; i < n; ++i) {
        model.delta1[i] = spots[i] * delta[i];
        // Single-name options carry no cross-gamma, so Gamma1 is diagonal.
        model.gamma1.set(i, i, spots[i] * spots[i] * gamma[i] + model.delta1[i]);
    }
    model.sigma = sigma;
    return model;
}

ReturnSeries ReturnSeries::fromPrices(std::vector<std::string> tickers,
                                      const std::vector<std::vector<double>>& prices) {
    if (prices.size() < 2) throw InputError("need at least two price rows to form a return");
    ReturnSeries series;
    series.tickers = std::move(tickers);
    const std::size_t n = series.tickers.size();
    for (std::size_t t = 1; t < prices.size(); ++t) {
        if (prices[t].size() != n || prices[t - 1].size() != n)
            throw DimensionMismatch("price row width differs from ticker count");
        std::vector<double> row(n);
        for (std::size_t j = 0; j < n; ++j) {
            if (!(prices[t][j] > 0.0) || !(prices[t - 1][j] > 0.0))
                throw InputError("prices must be positive");
            row[j] = std::log(prices[t][j] / prices[t - 1][j]);
        }
        series.observations.push_back(std::move(row));
    }
    return series;
}

SymmetricMatrix ewmaCovariance(const ReturnSeries& series, double lambda) {
    if (!(lambda > 0.0 && lambda < 1.0)) throw InputError("EWMA decay must lie in (0, 1)");
    if (series.observations.empty()) throw InputError("EWMA needs at least one observation");
    const std::size_t n = series.tickers.size();
    SymmetricMatrix cov(n);
    bool first = true;
    for (const auto& x : series.observations) {
        if (x.size() != n) throw DimensionMismatch("return row width differs from ticker count");
        const double keep = first ? 0.0 : lambda;
        const double add = first ? 1.0 : 1.0 - lambda;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j <= i; ++j) cov.set(i, j, keep * cov(i, j) + add * (x[i] * x[j]));
        first = false;
    }
    return cov;
}

namespace {

std::vector<std::string> readLines(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    return lines;
}

bool blank(const std::string& s) { return s.find_first_not_of(" \t") == std::string::npos; }

}  // namespace

std::vector<Instrument> readInstrumentsCsv(const std::string& path) {
    const auto lines = readLines(path);
    static const std::vector<std::string> kHeader = {"name",  "kind", "strike", "rate", "maturity_years",
                                                     "spot",  "vol",  "quantity", "hedge_shares"};
    if (lines.empty() || io::splitCsvLine(lines[0]) != kHeader)
        throw ParseError(path, 1, "expected header name,kind,strike,rate,maturity_years,spot,vol,quantity,hedge_shares");
    std::vector<Instrument> out;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (blank(lines[i])) continue;
        const auto f = io::splitCsvLine(lines[i]);
        const std::size_t lineNo = i + 1;
        if (f.size() != kHeader.size())
            throw ParseError(path, lineNo, "expected 9 fields, found " + std::to_string(f.size()));
        Instrument inst;
        inst.name = f[0];
        std::string kind = f[1];
        std::transform(kind.begin(), kind.end(), kind.begin(), ::tolower);
        if (kind == "call")
            inst.kind = OptionKind::Call;
        else if (kind == "put")
            inst.kind = OptionKind::Put;
        else
            throw ParseError(path, lineNo, "kind must be call or put");
        inst.strike = io::parseNumber(f[2], path, lineNo);
        inst.rate = io::parseNumber(f[3], path, lineNo);
        inst.maturity = io::parseNumber(f[4], path, lineNo);
        inst.spot = io::parseNumber(f[5], path, lineNo);
        if (!f[6].empty()) inst.vol = io::parseNumber(f[6], path, lineNo);
        inst.quantity = io::parseNumber(f[7], path, lineNo);
        if (f[8].empty())
            inst.autoHedge = true;
        else
            inst.hedgeShares = io::parseNumber(f[8], path, lineNo);
        try {
            inst.validate();
        } catch (const InputError& e) {
            throw ParseError(path, lineNo, e.what());
        }
        out.push_back(std::move(inst));
    }
    if (out.empty()) throw ParseError(path, lines.size(), "no instruments");
    return out;
}

ReturnSeries readPricesCsv(const std::string& path) {
    const auto lines = readLines(path);
    if (lines.empty()) throw ParseError(path, 1, "empty prices file");
    auto tickers = io::splitCsvLine(lines[0]);
    std::vector<std::vector<double>> prices;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (blank(lines[i])) continue;
        const auto f = io::splitCsvLine(lines[i]);
        if (f.size() != tickers.size())
            throw ParseError(path, i + 1, "expected " + std::to_string(tickers.size()) + " prices");
        std::vector<double> row;
        for (const auto& x : f) {
            const double p = io::parseNumber(x, path, i + 1);
            if (!(p > 0.0)) throw ParseError(path, i + 1, "prices must be positive");
            row.push_back(p);
        }
        prices.push_back(std::move(row));
    }
    if (prices.size() < 2) throw ParseError(path, lines.size(), "need at least two price rows");
    return ReturnSeries::fromPrices(std::move(tickers), prices);
}

}  // namespace hypervar
