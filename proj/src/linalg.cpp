#include "hypervar/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hypervar/errors.hpp"

namespace hypervar {

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::transposed() const {
    Matrix t(n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

double Matrix::maxAbs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.size() != b.size()) throw DimensionMismatch("matrix product: dimension mismatch");
    const std::size_t n = a.size();
    Matrix c(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

SymmetricMatrix::SymmetricMatrix(std::size_t n) : m_(n) {
    if (n == 0) throw InputError("symmetric matrix must have dimension >= 1");
}

SymmetricMatrix SymmetricMatrix::identity(std::size_t n) {
    SymmetricMatrix s(n);
    for (std::size_t i = 0; i < n; ++i) s.set(i, i, 1.0);
    return s;
}

SymmetricMatrix SymmetricMatrix::diagonal(std::span<const double> d) {
    SymmetricMatrix s(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) s.set(i, i, d[i]);
    return s;
}

SymmetricMatrix SymmetricMatrix::fromFull(const Matrix& full, double relTol) {
    const double scale = full.maxAbs();
    const std::size_t n = full.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(full(i, j) - full(j, i)) > relTol * scale)
                throw InputError("matrix is not symmetric at (" + std::to_string(i + 1) + "," +
                                 std::to_string(j + 1) + ")");
    return symmetrized(full);
}

SymmetricMatrix SymmetricMatrix::symmetrized(const Matrix& full) {
    const std::size_t n = full.size();
    SymmetricMatrix s(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) s.set(i, j, 0.5 * (full(i, j) + full(j, i)));
    return s;
}

void SymmetricMatrix::set(std::size_t i, std::size_t j, double v) {
    m_(i, j) = v;
    m_(j, i) = v;
}

SymmetricMatrix LowerTriangular::product() const {
    const std::size_t n = size();
    SymmetricMatrix s(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k <= j; ++k) acc += m_(i, k) * m_(j, k);
            s.set(i, j, acc);
        }
    return s;
}

SignedSpectrum SignedSpectrum::fromEigenvalues(std::span<const double> eigenvalues, double zeroTol) {
    SignedSpectrum s;
    double radius = 0.0;
    for (double e : eigenvalues) radius = std::max(radius, std::abs(e));
    for (double e : eigenvalues) {
        if (radius == 0.0 || std::abs(e) <= zeroTol * radius)
            ++s.zeroCount;
        else if (e > 0)
            s.dPlus.push_back(e);
        else
            s.dMinus.push_back(-e);
    }
    if (s.dPlus.empty() && s.dMinus.empty()) throw AllZeroSpectrum();
    std::sort(s.dPlus.begin(), s.dPlus.end());
    std::sort(s.dMinus.begin(), s.dMinus.end());
    s.basis = Matrix::identity(eigenvalues.size());
    return s;
}

LowerTriangular cholesky(const SymmetricMatrix& sigma) {
    const std::size_t n = sigma.size();
    double maxDiag = 0.0;
    for (std::size_t i = 0; i < n; ++i) maxDiag = std::max(maxDiag, sigma(i, i));
    const double pivotFloor = static_cast<double>(n) * 1e-14 * maxDiag;

    Matrix l(n);
    for (std::size_t j = 0; j < n; ++j) {
        double pivot = sigma(j, j);
        for (std::size_t k = 0; k < j; ++k) pivot -= l(j, k) * l(j, k);
        if (!(pivot > pivotFloor)) throw NotPositiveDefinite(j, pivot);
        const double ljj = std::sqrt(pivot);
        l(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double acc = sigma(i, j);
            for (std::size_t k = 0; k < j; ++k) acc -= l(i, k) * l(j, k);
            l(i, j) = acc / ljj;
        }
    }
    return LowerTriangular(std::move(l));
}

EigenDecomposition symEigen(const SymmetricMatrix& input) {
    const std::size_t n = input.size();
    Matrix a = input.full();
    Matrix v = Matrix::identity(n);

    double frob = 0.0;
    for (double x : a.data()) frob += x * x;
    frob = std::sqrt(frob);
    const double threshold = 1e-14 * frob;
    constexpr int kMaxSweeps = 100;

    auto offNorm = [&] {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j) s += a(i, j) * a(i, j);
        return std::sqrt(s);
    };

    int sweep = 0;
    for (; sweep < kMaxSweeps && offNorm() > threshold; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                // Rotation angle zeroing a(p,q); t is the smaller root for stability.
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = std::copysign(1.0, theta) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                a(p, q) = a(q, p) = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }
    if (offNorm() > threshold)
        throw NoConvergence("Jacobi eigensolver: off-diagonal norm above tolerance after " +
                            std::to_string(kMaxSweeps) + " sweeps");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto i, auto j) { return a(i, i) < a(j, j); });

    EigenDecomposition out;
    out.eigenvalues.resize(n);
    out.basis = Matrix(n);
    for (std::size_t c = 0; c < n; ++c) {
        out.eigenvalues[c] = a(order[c], order[c]);
        for (std::size_t r = 0; r < n; ++r) out.basis(r, c) = v(r, order[c]);
    }
    return out;
}

SignedSpectrum buildSignedSpectrum(const LowerTriangular& c, const SymmetricMatrix& gamma1,
                                   double zeroTol) {
    if (c.size() != gamma1.size())
        throw DimensionMismatch("Cholesky factor and Gamma1 differ in dimension");
    const Matrix& cm = c.full();
    const Matrix m = cm.transposed() * gamma1.full() * cm;
    const EigenDecomposition eig = symEigen(SymmetricMatrix::symmetrized(m));

    double radius = 0.0;
    for (double e : eig.eigenvalues) radius = std::max(radius, std::abs(e));

    const std::size_t n = eig.eigenvalues.size();
    SignedSpectrum s;
    s.basis = Matrix(n);
    // Basis columns: positive part first, then negative part, then dropped zeros.
    std::vector<std::size_t> pos, neg, zero;
    for (std::size_t k = 0; k < n; ++k) {
        const double e = eig.eigenvalues[k];
        if (radius == 0.0 || std::abs(e) <= zeroTol * radius)
            zero.push_back(k);
        else if (e > 0)
            pos.push_back(k);
        else
            neg.push_back(k);
    }
    if (pos.empty() && neg.empty()) throw AllZeroSpectrum();

    // Eigenvalues are ascending, so negatives arrive with decreasing magnitude.
    std::reverse(neg.begin(), neg.end());
    std::size_t col = 0;
    auto place = [&](const std::vector<std::size_t>& idx) {
        for (std::size_t k : idx) {
            for (std::size_t r = 0; r < n; ++r) s.basis(r, col) = eig.basis(r, k);
            ++col;
        }
    };
    place(pos);
    place(neg);
    place(zero);
    for (std::size_t k : pos) s.dPlus.push_back(eig.eigenvalues[k]);
    for (std::size_t k : neg) s.dMinus.push_back(-eig.eigenvalues[k]);
    s.zeroCount = zero.size();
    return s;
}

}  // namespace hypervar
