#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "hypervar/chi2mix.hpp"
#include "hypervar/errors.hpp"
#include "hypervar/pipeline.hpp"
#include "hypervar/portfolio.hpp"

namespace py = pybind11;
using namespace hypervar;

namespace {

using Rows = std::vector<std::vector<double>>;

Matrix toMatrix(const Rows& rows) {
    Matrix m(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != rows.size()) throw DimensionMismatch("matrix must be square");
        for (std::size_t j = 0; j < rows.size(); ++j) m(i, j) = rows[i][j];
    }
    return m;
}

Rows toRows(const SymmetricMatrix& s) {
    Rows out(s.size(), std::vector<double>(s.size()));
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = 0; j < s.size(); ++j) out[i][j] = s(i, j);
    return out;
}

EvaluatorConfig samplingConfig(std::uint64_t seed, std::size_t replicates, std::size_t samples, bool antithetic) {
    EvaluatorConfig cfg;
    cfg.mc.seed = seed;
    cfg.mc.replicates = replicates;
    cfg.mc.samplesPerReplicate = samples;
    cfg.mc.antithetic = antithetic;
    cfg.quad.seed = seed;
    cfg.quad.rotations = replicates;
    return cfg;
}

py::dict spectrumDict(const SignedSpectrum& s) {
    py::dict d;
    d["d_plus"] = s.dPlus;
    d["d_minus"] = s.dMinus;
    d["zero_count"] = s.zeroCount;
    return d;
}

}  // namespace

PYBIND11_MODULE(hypervar, m) {
    m.doc() = "Quadratic Value-at-Risk over hyperboloid regions";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<InputError>(m, "InputError", base.ptr());
    py::register_exception<NumericalError>(m, "NumericalError", base.ptr());

    m.def(
        "signed_spectrum",
        [](const Rows& sigma, const Rows& gamma1, double zeroTol, bool symmetrize) {
            const auto s = symmetrize ? SymmetricMatrix::symmetrized(toMatrix(sigma))
                                      : SymmetricMatrix::fromFull(toMatrix(sigma));
            const auto g = symmetrize ? SymmetricMatrix::symmetrized(toMatrix(gamma1))
                                      : SymmetricMatrix::fromFull(toMatrix(gamma1));
            return spectrumDict(spectrumFromModel(s, g, zeroTol));
        },
        py::arg("sigma"), py::arg("gamma1"), py::arg("zero_tol") = 1e-10, py::arg("symmetrize") = false,
        "Positive and negative parts of the spectrum of C^t Gamma1 C, with sigma = C C^t.");

    m.def(
        "mixture_upper_tail",
        [](const std::vector<double>& weights, double x) {
            const auto t = mixtureUpperTail(ChiSquareMixture(weights), x);
            return py::make_tuple(t.value, t.standardError);
        },
        py::arg("weights"), py::arg("x"), "P(sum w_j chi2_1 >= x) and its truncation bound.");

    m.def(
        "tail_probability",
        [](double R, const std::vector<double>& eigenvalues, const std::string& method, std::uint64_t seed,
           std::size_t replicates, std::size_t samples, bool antithetic) {
            const auto spectrum = SignedSpectrum::fromEigenvalues(eigenvalues);
            const auto p = computeG(spectrum, parseMethod(method), samplingConfig(seed, replicates, samples, antithetic),
                                    {R});
            return py::make_tuple(p.front().g.value, p.front().g.standardError, p.front().g.method);
        },
        py::arg("R"), py::arg("eigenvalues"), py::arg("method") = "auto", py::arg("seed") = 42,
        py::arg("replicates") = 32, py::arg("samples") = 100000, py::arg("antithetic") = true,
        "G(R) for a signed spectrum: (value, standard error, method tag).");

    m.def(
        "compute_var",
        [](const std::vector<double>& eigenvalues, double theta, const std::vector<double>& alphas,
           const std::string& method, std::uint64_t seed, std::size_t replicates, std::size_t samples,
           bool antithetic, std::optional<double> tolerance) {
            VarRequest req;
            req.spectrum = SignedSpectrum::fromEigenvalues(eigenvalues);
            req.theta = theta;
            req.alphas = alphas;
            req.method = parseMethod(method);
            req.config = samplingConfig(seed, replicates, samples, antithetic);
            req.tolerance = tolerance;
            py::list out;
            for (const auto& r : computeVar(req)) {
                py::dict d;
                d["alpha"] = r.alpha;
                d["R"] = r.R;
                d["V"] = r.V;
                d["g_at_R"] = r.gAtR;
                d["standard_error"] = r.standardError;
                d["method"] = methodName(r.method);
                d["n_plus"] = r.nPlus;
                d["n_minus"] = r.nMinus;
                out.append(d);
            }
            return out;
        },
        py::arg("eigenvalues"), py::arg("theta"), py::arg("alphas"), py::arg("method") = "auto",
        py::arg("seed") = 42, py::arg("replicates") = 32, py::arg("samples") = 100000, py::arg("antithetic") = true,
        py::arg("tolerance") = py::none(), "Solve G(R) = alpha for each alpha; rows ordered by alpha descending.");

    m.def(
        "ewma_covariance",
        [](const Rows& returns, double lambda) {
            ReturnSeries series;
            if (!returns.empty())
                for (std::size_t j = 0; j < returns.front().size(); ++j) series.tickers.push_back(std::to_string(j));
            series.observations = returns;
            return toRows(ewmaCovariance(series, lambda));
        },
        py::arg("returns"), py::arg("lam") = 0.94, "EWMA covariance of return rows (oldest first).");

    m.def(
        "bs_greeks",
        [](const std::string& kind, double spot, double strike, double rate, double maturity, double vol) {
            Instrument inst;
            inst.name = "option";
            if (kind == "call")
                inst.kind = OptionKind::Call;
            else if (kind == "put")
                inst.kind = OptionKind::Put;
            else
                throw InputError("kind must be call or put");
            inst.spot = spot;
            inst.strike = strike;
            inst.rate = rate;
            inst.maturity = maturity;
            inst.vol = vol;
            const auto g = bsGreeks(inst);
            py::dict d;
            d["price"] = g.price;
            d["delta"] = g.delta;
            d["gamma"] = g.gamma;
            d["theta_annual"] = g.thetaAnnual;
            return d;
        },
        py::arg("kind"), py::arg("spot"), py::arg("strike"), py::arg("rate"), py::arg("maturity"), py::arg("vol"),
        "Black-Scholes price and greeks of a European option.");
}
