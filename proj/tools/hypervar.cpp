// hypervar: quadratic Value-at-Risk for delta-hedged option portfolios.
//
//   hypervar covariance --prices p.csv --lambda 0.94 --out sigma.csv
//   hypervar var --sigma sigma.csv --gamma1-diag d.csv --theta -31.2689 --alpha 0.05,0.025 --seed 42
//   hypervar var --instruments inst.csv --prices p.csv --lambda 0.94 --alpha 0.05 --seed 42
//   hypervar gfun --sigma sigma.csv --gamma1-diag d.csv --R 0.5,0.9,1.2 --method oracle --seed 7

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>

#include "hypervar/errors.hpp"
#include "hypervar/io.hpp"
#include "hypervar/pipeline.hpp"
#include "hypervar/portfolio.hpp"

using namespace hypervar;

namespace {

enum ExitCode { kOk = 0, kInputError = 2, kNumericalError = 3, kInternalError = 4 };

struct ModelInputs {
    std::string sigmaPath;
    std::string gamma1DiagPath;
    std::string gamma1Path;
    std::string spectrumPath;
    std::string instrumentsPath;
    std::string pricesPath;
    std::optional<double> theta;
    double lambda = 0.94;
    double dayCount = 252.0;
    double zeroTol = 1e-10;
    bool symmetrize = false;
};

struct SamplingOptions {
    std::uint64_t seed = 42;
    std::size_t replicates = 32;
    std::size_t samples = 100000;
    bool plain = false;
    std::string method = "auto";
};

void addModelOptions(CLI::App* cmd, ModelInputs& in) {
    cmd->add_option("--sigma", in.sigmaPath, "Covariance CSV (n x n, daily log-returns)");
    cmd->add_option("--gamma1-diag", in.gamma1DiagPath, "Diagonal of Gamma1 (CSV vector)");
    cmd->add_option("--gamma1", in.gamma1Path, "Full Gamma1 matrix CSV");
    cmd->add_option("--spectrum", in.spectrumPath, "Signed eigenvalues of C^t Gamma1 C (CSV vector)");
    cmd->add_option("--instruments", in.instrumentsPath, "Instruments CSV");
    cmd->add_option("--prices", in.pricesPath, "Close prices CSV, oldest first");
    cmd->add_option("--theta", in.theta, "Portfolio theta per day");
    cmd->add_option("--lambda", in.lambda, "EWMA decay")->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--day-count", in.dayCount, "Days per year for theta and volatility");
    cmd->add_option("--zero-tol", in.zeroTol, "Relative threshold for dropping zero eigenvalues");
    cmd->add_flag("--symmetrize", in.symmetrize, "Average the triangles of slightly asymmetric input matrices");
}

void addSamplingOptions(CLI::App* cmd, SamplingOptions& s) {
    cmd->add_option("--seed", s.seed, "Random seed");
    cmd->add_option("--replicates", s.replicates, "Monte Carlo replicates (>= 2)");
    cmd->add_option("--samples", s.samples, "Integrand evaluations per replicate");
    cmd->add_flag("--no-antithetic", s.plain, "Disable antithetic radius pairing");
    cmd->add_option("--method", s.method, "auto | neg-only | pos-only | mixed | general | oracle");
}

struct LoadedModel {
    SignedSpectrum spectrum;
    double theta = 0.0;
    std::string source;
};

LoadedModel loadModel(const ModelInputs& in, bool needTheta) {
    LoadedModel out;
    if (!in.spectrumPath.empty()) {
        out.spectrum = SignedSpectrum::fromEigenvalues(io::readVectorCsv(in.spectrumPath), in.zeroTol);
        out.source = "spectrum";
    } else if (!in.instrumentsPath.empty()) {
        if (in.pricesPath.empty() && in.sigmaPath.empty())
            throw InputError("--instruments needs --prices or --sigma for the covariance");
        const auto instruments = readInstrumentsCsv(in.instrumentsPath);
        SymmetricMatrix sigma;
        if (!in.sigmaPath.empty()) {
            sigma = io::readSymmetricCsv(in.sigmaPath, in.symmetrize);
        } else {
            const ReturnSeries series = readPricesCsv(in.pricesPath);
            const SymmetricMatrix full = ewmaCovariance(series, in.lambda);
            // Reorder covariance columns to the instruments' underlying order.
            std::vector<std::string> names;
            for (const auto& inst : instruments)
                if (std::find(names.begin(), names.end(), inst.name) == names.end()) names.push_back(inst.name);
            std::vector<std::size_t> col;
            for (const auto& name : names) {
                const auto it = std::find(series.tickers.begin(), series.tickers.end(), name);
                if (it == series.tickers.end()) throw InputError("no price column for underlying " + name);
                col.push_back(static_cast<std::size_t>(it - series.tickers.begin()));
            }
            sigma = SymmetricMatrix(names.size());
            for (std::size_t i = 0; i < names.size(); ++i)
                for (std::size_t j = 0; j <= i; ++j) sigma.set(i, j, full(col[i], col[j]));
        }
        const QuadraticModel model = buildQuadraticModel(instruments, sigma, in.dayCount);
        if (!model.deltaHedged())
            throw InputError("portfolio is not delta-hedged (max |Delta1| exceeds 1e-8 of gross value); "
                             "set hedge_shares to -quantity * delta");
        out.spectrum = spectrumFromModel(model.sigma, model.gamma1, in.zeroTol);
        out.theta = model.theta;
        out.source = "instruments";
        if (in.theta) out.theta = *in.theta;
        return out;
    } else {
        if (in.sigmaPath.empty()) throw InputError("supply --sigma, --spectrum or --instruments");
        const SymmetricMatrix sigma = io::readSymmetricCsv(in.sigmaPath, in.symmetrize);
        SymmetricMatrix gamma1;
        if (!in.gamma1DiagPath.empty())
            gamma1 = SymmetricMatrix::diagonal(io::readVectorCsv(in.gamma1DiagPath));
        else if (!in.gamma1Path.empty())
            gamma1 = io::readSymmetricCsv(in.gamma1Path, in.symmetrize);
        else
            throw InputError("--sigma needs --gamma1-diag or --gamma1");
        out.spectrum = spectrumFromModel(sigma, gamma1, in.zeroTol);
        out.source = "sigma";
    }
    if (needTheta) {
        if (!in.theta) throw InputError("--theta is required with direct model inputs");
        out.theta = *in.theta;
    }
    return out;
}

EvaluatorConfig evaluatorConfig(const SamplingOptions& s) {
    EvaluatorConfig cfg;
    cfg.mc.seed = s.seed;
    cfg.mc.replicates = s.replicates;
    cfg.mc.samplesPerReplicate = s.samples;
    cfg.mc.antithetic = !s.plain;
    cfg.quad.seed = s.seed;
    cfg.quad.rotations = s.replicates;
    return cfg;
}

double smallestEigenvalue(const SymmetricMatrix& m) { return symEigen(m).eigenvalues.front(); }

int runCovariance(const std::string& pricesPath, double lambda, const std::string& outPath) {
    const ReturnSeries series = readPricesCsv(pricesPath);
    const SymmetricMatrix sigma = ewmaCovariance(series, lambda);
    if (outPath.empty())
        io::writeMatrixCsv(std::cout, sigma.full());
    else
        io::writeMatrixCsv(outPath, sigma.full());
    std::cerr << "dimension " << sigma.size() << ", smallest eigenvalue " << smallestEigenvalue(sigma) << '\n';
    return kOk;
}

int runVar(const ModelInputs& in, const SamplingOptions& s, const std::vector<double>& alphas,
           std::optional<double> tol, const std::string& outPath, bool jsonToStdout) {
    const LoadedModel model = loadModel(in, true);
    VarRequest req;
    req.spectrum = model.spectrum;
    req.theta = model.theta;
    req.alphas = alphas;
    req.method = parseMethod(s.method);
    req.config = evaluatorConfig(s);
    req.tolerance = tol;
    const auto results = computeVar(req);

    for (const auto& r : results) {
        // Invariant: the emitted V is the exact identity applied to the emitted R.
        if (r.V != varForMethod(r.method, r.R, req.theta)) {
            std::cerr << "internal error: V does not match R and theta\n";
            return kInternalError;
        }
    }

    nlohmann::ordered_json config;
    config["source"] = model.source;
    config["theta"] = model.theta;
    config["alphas"] = alphas;
    config["method"] = s.method;
    config["seed"] = s.seed;
    config["replicates"] = s.replicates;
    config["samplesPerReplicate"] = s.samples;
    config["antithetic"] = !s.plain;
    config["tolerance"] = tol ? nlohmann::ordered_json(*tol) : nlohmann::ordered_json(nullptr);
    config["lambda"] = in.lambda;
    config["zeroTol"] = in.zeroTol;
    const auto doc = varReportJson(results, config);

    if (jsonToStdout) {
        std::cout << doc.dump(2) << '\n';
    } else {
        printVarTable(std::cout, results);
    }
    if (!outPath.empty()) {
        std::ofstream out(outPath);
        if (!out) throw InputError("cannot write " + outPath);
        out << doc.dump(2) << '\n';
    }
    return kOk;
}

int runGfun(const ModelInputs& in, const SamplingOptions& s, const std::vector<double>& radii,
            const std::string& csvPath) {
    const LoadedModel model = loadModel(in, false);
    const auto points = computeG(model.spectrum, parseMethod(s.method), evaluatorConfig(s), radii);
    printGTable(std::cout, points);
    if (!csvPath.empty()) {
        std::ofstream out(csvPath);
        if (!out) throw InputError("cannot write " + csvPath);
        out.precision(17);
        out << "R,G,standardError\n";
        for (const auto& p : points) out << p.R << ',' << p.g.value << ',' << p.g.standardError << '\n';
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quadratic Value-at-Risk over hyperboloid regions"};
    app.require_subcommand(1);

    std::string pricesPath, outPath;
    double lambda = 0.94;
    auto* cov = app.add_subcommand("covariance", "EWMA covariance of daily log-returns");
    cov->add_option("--prices", pricesPath, "Close prices CSV, oldest first")->required();
    cov->add_option("--lambda", lambda, "EWMA decay")->check(CLI::Range(0.0, 1.0));
    cov->add_option("--out", outPath, "Output CSV (stdout when omitted)");

    ModelInputs varIn;
    SamplingOptions varSampling;
    std::vector<double> alphas{0.05};
    std::optional<double> tol;
    std::string reportPath;
    bool json = false;
    auto* var = app.add_subcommand("var", "Solve G(R) = alpha and report Value-at-Risk");
    addModelOptions(var, varIn);
    addSamplingOptions(var, varSampling);
    var->add_option("--alpha", alphas, "Tail probabilities")->delimiter(',')->check(CLI::Range(0.0, 1.0));
    var->add_option("--tol", tol, "Solver tolerance on |G(R) - alpha|");
    var->add_option("--out", reportPath, "Write the JSON report here");
    var->add_flag("--json", json, "Print the JSON report instead of the table");

    ModelInputs gIn;
    SamplingOptions gSampling;
    std::vector<double> radii;
    std::string csvPath;
    auto* gfun = app.add_subcommand("gfun", "Evaluate G at given radii");
    addModelOptions(gfun, gIn);
    addSamplingOptions(gfun, gSampling);
    gfun->add_option("--R", radii, "Radii")->delimiter(',')->required();
    gfun->add_option("--csv", csvPath, "Export R,G,SE as CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kInputError;
    }

    try {
        if (cov->parsed()) return runCovariance(pricesPath, lambda, outPath);
        if (var->parsed()) return runVar(varIn, varSampling, alphas, tol, reportPath, json);
        if (gfun->parsed()) return runGfun(gIn, gSampling, radii, csvPath);
    } catch (const NotPositiveDefinite& e) {
        std::cerr << "error: " << e.what() << "\n  hint: the covariance must be positive definite; "
                     "check for duplicated or constant series\n";
        return kNumericalError;
    } catch (const SeriesBudgetExceeded& e) {
        std::cerr << "error: " << e.what() << "\n  hint: eigenvalue magnitudes span too many orders; "
                     "raise --zero-tol to drop negligible ones\n";
        return kNumericalError;
    } catch (const NoSolution& e) {
        std::cerr << "error: " << e.what() << "\n  hint: alpha exceeds the mass of the loss region at R = 0; "
                     "choose a smaller alpha\n";
        return kNumericalError;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const NumericalError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kNumericalError;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kInternalError;
    }
    return kInternalError;
}
