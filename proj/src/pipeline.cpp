#include "hypervar/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <future>
#include <ostream>

#include "hypervar/errors.hpp"

namespace hypervar {

std::string methodName(Method m) {
    switch (m) {
        case Method::Auto: return "auto";
        case Method::NegOnly: return "neg-only";
        case Method::PosOnly: return "pos-only";
        case Method::Mixed: return "mixed";
        case Method::General: return "general";
        case Method::Oracle: return "oracle";
    }
    return "unknown";
}

Method parseMethod(const std::string& name) {
    for (Method m : {Method::Auto, Method::NegOnly, Method::PosOnly, Method::Mixed, Method::General,
                     Method::Oracle})
        if (methodName(m) == name) return m;
    throw InputError("unknown method '" + name + "' (auto|neg-only|pos-only|mixed|general|oracle)");
}

Method resolveMethod(const SignedSpectrum& spectrum, Method requested) {
    const bool hasPlus = !spectrum.dPlus.empty();
    const bool hasMinus = !spectrum.dMinus.empty();
    switch (requested) {
        case Method::Auto:
            if (!hasPlus) return Method::NegOnly;
            if (!hasMinus) return Method::PosOnly;
            return Method::Mixed;
        case Method::NegOnly:
            if (hasPlus) throw InvalidSignature("neg-only requested but the spectrum has positive eigenvalues");
            break;
        case Method::PosOnly:
            if (hasMinus) throw InvalidSignature("pos-only requested but the spectrum has negative eigenvalues");
            break;
        case Method::Mixed:
        case Method::General:
            if (!hasPlus || !hasMinus)
                throw InvalidSignature(methodName(requested) + " requires both positive and negative eigenvalues");
            break;
        case Method::Oracle:
            if (!hasMinus)
                throw InvalidSignature("oracle samples the region |w-|^2 - |w+|^2 >= R^2, which needs n- > 0");
            break;
    }
    return requested;
}

SignedSpectrum spectrumFromModel(const SymmetricMatrix& sigma, const SymmetricMatrix& gamma1,
                                 double zeroTol) {
    if (sigma.size() != gamma1.size())
        throw DimensionMismatch("sigma is " + std::to_string(sigma.size()) + "-dimensional, Gamma1 is " +
                                std::to_string(gamma1.size()) + "-dimensional");
    return buildSignedSpectrum(cholesky(sigma), gamma1, zeroTol);
}

TailFunction makeEvaluator(const SignedSpectrum& spectrum, Method method, const EvaluatorConfig& cfg) {
    switch (method) {
        case Method::NegOnly: {
            auto series = std::make_shared<const RubenSeries>(ChiSquareMixture(spectrum.dMinus), cfg.series);
            return [series](double R) {
                if (!(R >= 0.0)) throw InputError("hyperboloid radius R must be >= 0");
                return series->upperTail(R * R);
            };
        }
        case Method::PosOnly: {
            auto series = std::make_shared<const RubenSeries>(ChiSquareMixture(spectrum.dPlus), cfg.series);
            return [series](double R) {
                if (!(R >= 0.0)) throw InputError("hyperboloid radius R must be >= 0");
                TailEstimate est = series->upperTail(R * R);
                est.value = std::clamp(1.0 - est.value, 0.0, 1.0);
                return est;
            };
        }
        case Method::Mixed: {
            auto est = std::make_shared<const MixedNormalEstimator>(spectrum, cfg.mc, cfg.series);
            return [est](double R) { return (*est)(R); };
        }
        case Method::Oracle: {
            auto est = std::make_shared<const OracleEstimator>(spectrum, cfg.mc);
            return [est](double R) { return (*est)(R); };
        }
        case Method::General: {
            auto spec = std::make_shared<const SignedSpectrum>(spectrum);
            const QuadConfig quad = cfg.quad;
            return [spec, quad](double R) {
                return gGeneralElliptic(R, *spec, RadialDensity::normal(), quad);
            };
        }
        case Method::Auto: break;
    }
    throw InputError("method must be resolved before building an evaluator");
}

double varForMethod(Method method, double R, double theta) {
    return method == Method::PosOnly ? -R * R / 2.0 - theta : varFromR(R, theta);
}

std::vector<VarResult> computeVar(const VarRequest& request) {
    if (request.alphas.empty()) throw InputError("no alpha values requested");
    for (double a : request.alphas)
        if (!(a > 0.0 && a < 1.0)) throw InputError("alpha values must lie in (0, 1)");

    const Method method = resolveMethod(request.spectrum, request.method);
    const TailFunction g = makeEvaluator(request.spectrum, method, request.config);
    const bool stochastic = method == Method::Mixed || method == Method::Oracle || method == Method::General;
    const Monotonicity direction =
        method == Method::PosOnly ? Monotonicity::Nondecreasing : Monotonicity::Nonincreasing;

    auto solveOne = [&](double alpha) {
        const double tol = request.tolerance.value_or(1e-4);
        RootResult root;
        try {
            root = solveR(alpha, g, tol, direction);
        } catch (const NoSolution&) {
            // A sampled G is a fine staircase; fall back to the SE-scaled tolerance.
            if (!stochastic || request.tolerance) throw;
            const double se = g(0.0).standardError;
            root = solveR(alpha, g, std::max(tol, defaultTolerance(se)), direction);
        }
        VarResult r;
        r.alpha = alpha;
        r.R = root.R;
        r.V = varForMethod(method, root.R, request.theta);
        r.gAtR = root.gAtR.value;
        r.standardError = root.gAtR.standardError;
        r.method = method;
        r.nPlus = request.spectrum.nPlus();
        r.nMinus = request.spectrum.nMinus();
        r.iterations = root.iterations;
        return r;
    };

    std::vector<double> alphas = request.alphas;
    std::sort(alphas.begin(), alphas.end(), std::greater<>());
    std::vector<std::future<VarResult>> jobs;
    jobs.reserve(alphas.size());
    for (double a : alphas) jobs.push_back(std::async(std::launch::async, solveOne, a));
    std::vector<VarResult> results;
    results.reserve(alphas.size());
    for (auto& j : jobs) results.push_back(j.get());
    return results;
}

std::vector<GPoint> computeG(const SignedSpectrum& spectrum, Method method, const EvaluatorConfig& cfg,
                             const std::vector<double>& radii) {
    const Method resolved = resolveMethod(spectrum, method);
    const TailFunction g = makeEvaluator(spectrum, resolved, cfg);
    std::vector<GPoint> out;
    out.reserve(radii.size());
    for (double R : radii) out.push_back({R, g(R)});
    return out;
}

nlohmann::ordered_json varReportJson(const std::vector<VarResult>& results,
                                     const nlohmann::ordered_json& config) {
    nlohmann::ordered_json doc;
    doc["results"] = nlohmann::ordered_json::array();
    for (const auto& r : results) {
        nlohmann::ordered_json row;
        row["alpha"] = r.alpha;
        row["R"] = r.R;
        row["V"] = r.V;
        row["gAtR"] = r.gAtR;
        row["standardError"] = r.standardError;
        row["method"] = methodName(r.method);
        row["nPlus"] = r.nPlus;
        row["nMinus"] = r.nMinus;
        doc["results"].push_back(std::move(row));
    }
    doc["config"] = config;
    return doc;
}

void printVarTable(std::ostream& out, const std::vector<VarResult>& results) {
    char line[160];
    std::snprintf(line, sizeof line, "%8s %10s %12s %10s %10s %-10s %5s %5s\n", "alpha", "R", "V", "G(R)",
                  "SE", "method", "n+", "n-");
    out << line;
    for (const auto& r : results) {
        std::snprintf(line, sizeof line, "%8.4f %10.4f %12.4f %10.6f %10.2e %-10s %5zu %5zu\n", r.alpha,
                      r.R, r.V, r.gAtR, r.standardError, methodName(r.method).c_str(), r.nPlus, r.nMinus);
        out << line;
    }
}

void printGTable(std::ostream& out, const std::vector<GPoint>& points) {
    char line[128];
    std::snprintf(line, sizeof line, "%10s %14s %12s  %s\n", "R", "G(R)", "SE", "method");
    out << line;
    for (const auto& p : points) {
        std::snprintf(line, sizeof line, "%10.4f %14.8f %12.3e  %s\n", p.R, p.g.value, p.g.standardError,
                      p.g.method.c_str());
        out << line;
    }
}

}  // namespace hypervar
