#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace hypervar {

/// Dense row-major square matrix.
class Matrix {
public:
    Matrix() = default;
    explicit Matrix(std::size_t n, double fill = 0.0) : n_(n), data_(n * n, fill) {}

    static Matrix identity(std::size_t n);

    std::size_t size() const noexcept { return n_; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
    std::span<const double> row(std::size_t i) const { return {data_.data() + i * n_, n_}; }
    std::span<const double> data() const noexcept { return data_; }

    Matrix transposed() const;
    double maxAbs() const;

private:
    std::size_t n_ = 0;
    std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);

/// Symmetric n x n matrix. Every write goes to both (i,j) and (j,i), so the
/// stored entries are exactly symmetric.
class SymmetricMatrix {
public:
    SymmetricMatrix() = default;
    explicit SymmetricMatrix(std::size_t n);

    static SymmetricMatrix identity(std::size_t n);
    static SymmetricMatrix diagonal(std::span<const double> d);

    /// Accepts a full square matrix whose asymmetry is within
    /// `relTol * max|entry|` and averages the two triangles.
    static SymmetricMatrix fromFull(const Matrix& full, double relTol = 1e-12);

    /// Averages the two triangles unconditionally.
    static SymmetricMatrix symmetrized(const Matrix& full);

    std::size_t size() const noexcept { return m_.size(); }
    double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
    void set(std::size_t i, std::size_t j, double v);
    const Matrix& full() const noexcept { return m_; }
    double maxAbs() const { return m_.maxAbs(); }

private:
    Matrix m_;
};

/// Lower-triangular factor with positive diagonal.
class LowerTriangular {
public:
    LowerTriangular() = default;
    explicit LowerTriangular(Matrix m) : m_(std::move(m)) {}

    std::size_t size() const noexcept { return m_.size(); }
    double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
    const Matrix& full() const noexcept { return m_; }

    /// L * L^t
    SymmetricMatrix product() const;

private:
    Matrix m_;
};

struct EigenDecomposition {
    std::vector<double> eigenvalues;  // ascending
    Matrix basis;                     // columns are eigenvectors
};

/// Eigen-split of C^t Gamma1 C into positive weights and negative-part magnitudes.
struct SignedSpectrum {
    std::vector<double> dPlus;   // ascending, > 0
    std::vector<double> dMinus;  // ascending magnitudes of negative eigenvalues
    Matrix basis;
    std::size_t zeroCount = 0;

    std::size_t nPlus() const noexcept { return dPlus.size(); }
    std::size_t nMinus() const noexcept { return dMinus.size(); }

    /// Spectrum given directly as signed eigenvalues (basis set to identity).
    static SignedSpectrum fromEigenvalues(std::span<const double> eigenvalues, double zeroTol = 1e-10);
};

/// Throws NotPositiveDefinite when a pivot falls below n * 1e-14 * max diagonal.
LowerTriangular cholesky(const SymmetricMatrix& sigma);

/// Cyclic Jacobi; throws NoConvergence if 100 sweeps do not reduce the
/// off-diagonal norm below 1e-14 * ||A||_F.
EigenDecomposition symEigen(const SymmetricMatrix& a);

/// Eigen-decomposes M = C^t Gamma1 C. Eigenvalues with |lambda| <= zeroTol * max|lambda|
/// are dropped. Throws AllZeroSpectrum if nothing survives.
SignedSpectrum buildSignedSpectrum(const LowerTriangular& c, const SymmetricMatrix& gamma1,
                                   double zeroTol = 1e-10);

}  // namespace hypervar
