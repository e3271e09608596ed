#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hypervar/hyperboloid.hpp"
#include "hypervar/linalg.hpp"
#include "hypervar/solver.hpp"

namespace hypervar {

enum class Method { Auto, NegOnly, PosOnly, Mixed, General, Oracle };

std::string methodName(Method m);
Method parseMethod(const std::string& name);

/// Picks the evaluation path from the signature: n+ = 0 -> NegOnly,
/// n- = 0 -> PosOnly, otherwise Mixed. Explicit requests are checked for
/// compatibility with the signature.
Method resolveMethod(const SignedSpectrum& spectrum, Method requested);

/// Cholesky of sigma, then the signed spectrum of C^t Gamma1 C.
SignedSpectrum spectrumFromModel(const SymmetricMatrix& sigma, const SymmetricMatrix& gamma1,
                                 double zeroTol = 1e-10);

struct EvaluatorConfig {
    McConfig mc;
    QuadConfig quad;
    SeriesOptions series;
};

/// G(R) for a resolved method; Monte Carlo evaluators draw their samples here.
/// The returned function is safe to call from several threads.
TailFunction makeEvaluator(const SignedSpectrum& spectrum, Method method, const EvaluatorConfig& cfg);

struct VarResult {
    double alpha = 0.0;
    double R = 0.0;
    double V = 0.0;
    double gAtR = 0.0;
    double standardError = 0.0;
    Method method = Method::Auto;
    std::size_t nPlus = 0;
    std::size_t nMinus = 0;
    std::size_t iterations = 0;
};

/// V for a solved radius: R^2/2 - theta, or -R^2/2 - theta on the positive-only
/// path where the region is the ellipsoid sum d+ chi2 <= R^2 = -2 (V + theta).
double varForMethod(Method method, double R, double theta);

struct VarRequest {
    SignedSpectrum spectrum;
    double theta = 0.0;
    std::vector<double> alphas;
    Method method = Method::Auto;
    EvaluatorConfig config;
    std::optional<double> tolerance;
};

/// Solves G(R) = alpha for every alpha (concurrently); results ordered by alpha descending.
std::vector<VarResult> computeVar(const VarRequest& request);

struct GPoint {
    double R = 0.0;
    TailEstimate g;
};

std::vector<GPoint> computeG(const SignedSpectrum& spectrum, Method method, const EvaluatorConfig& cfg,
                             const std::vector<double>& radii);

/// {"results":[{alpha,R,V,gAtR,standardError,method,nPlus,nMinus}...],"config":config}
nlohmann::ordered_json varReportJson(const std::vector<VarResult>& results,
                                     const nlohmann::ordered_json& config);

void printVarTable(std::ostream& out, const std::vector<VarResult>& results);
void printGTable(std::ostream& out, const std::vector<GPoint>& points);

}  // namespace hypervar
