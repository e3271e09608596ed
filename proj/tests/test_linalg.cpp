#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "hypervar/errors.hpp"
#include "hypervar/io.hpp"
#include "hypervar/linalg.hpp"

using namespace hypervar;

namespace {

SymmetricMatrix randomSymmetric(std::size_t n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    SymmetricMatrix a(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j <= i; ++j) a.set(i, j, u(rng));
    return a;
}

SymmetricMatrix randomSpd(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> z;
    Matrix b(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) b(i, j) = z(rng);
    SymmetricMatrix s(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            double acc = i == j ? 0.1 : 0.0;
            for (std::size_t k = 0; k < n; ++k) acc += b(i, k) * b(j, k);
            s.set(i, j, acc);
        }
    return s;
}

double maxDiff(const Matrix& a, const Matrix& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
    return m;
}

Matrix reconstruct(const EigenDecomposition& e) {
    const std::size_t n = e.eigenvalues.size();
    Matrix out(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                out(i, j) += e.basis(i, k) * e.eigenvalues[k] * e.basis(j, k);
    return out;
}

std::vector<double> sortedValues(const SignedSpectrum& s) {
    std::vector<double> v;
    for (double d : s.dPlus) v.push_back(d);
    for (double d : s.dMinus) v.push_back(-d);
    std::sort(v.begin(), v.end());
    return v;
}

}  // namespace

TEST(SymmetricMatrix, WritesAreMirrored) {
    SymmetricMatrix a(3);
    a.set(0, 2, 5.0);
    EXPECT_EQ(a(2, 0), 5.0);
    EXPECT_THROW(SymmetricMatrix(0), InputError);
}

TEST(SymmetricMatrix, FromFullRejectsAsymmetry) {
    Matrix m(2);
    m(0, 0) = 1.0;
    m(1, 1) = 1.0;
    m(0, 1) = 0.5;
    m(1, 0) = 0.5 + 1e-6;
    EXPECT_THROW(SymmetricMatrix::fromFull(m), InputError);
    const auto s = SymmetricMatrix::symmetrized(m);
    EXPECT_DOUBLE_EQ(s(0, 1), 0.5 + 0.5e-6);
}

TEST(Cholesky, IdentityAndDiagonal) {
    const auto l = cholesky(SymmetricMatrix::identity(3));
    EXPECT_EQ(maxDiff(l.full(), Matrix::identity(3)), 0.0);

    const std::vector<double> d{4.0, 9.0};
    const auto l2 = cholesky(SymmetricMatrix::diagonal(d));
    EXPECT_DOUBLE_EQ(l2(0, 0), 2.0);
    EXPECT_DOUBLE_EQ(l2(1, 1), 3.0);
    EXPECT_EQ(l2(0, 1), 0.0);
    EXPECT_EQ(l2(1, 0), 0.0);
}

TEST(Cholesky, ReportsFailingPivot) {
    SymmetricMatrix a(3);
    a.set(0, 0, 1.0);
    a.set(1, 1, 1.0);
    a.set(0, 1, 1.0);  // rank-deficient leading 2x2 block
    a.set(2, 2, 1.0);
    try {
        cholesky(a);
        FAIL() << "expected NotPositiveDefinite";
    } catch (const NotPositiveDefinite& e) {
        EXPECT_EQ(e.pivot(), 1u);
    }
}

TEST(Cholesky, Calls9x9Reconstructs) {
    const auto sigma = io::readSymmetricCsv(std::string(HYPERVAR_DATA_DIR) + "/cac40_calls_sigma.csv");
    const auto l = cholesky(sigma);
    for (std::size_t i = 0; i < l.size(); ++i) {
        EXPECT_GT(l(i, i), 0.0);
        for (std::size_t j = i + 1; j < l.size(); ++j) EXPECT_EQ(l(i, j), 0.0);
    }
    EXPECT_LE(maxDiff(l.product().full(), sigma.full()), 1e-12 * sigma.maxAbs());
}

TEST(Cholesky, RandomRoundTrip) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 1 + trial % 12;
        const auto s = randomSpd(n, rng);
        const auto l = cholesky(s);
        EXPECT_LE(maxDiff(l.product().full(), s.full()), 1e-12 * s.maxAbs()) << "n=" << n;
    }
}

TEST(SymEigen, TrivialCases) {
    const std::vector<double> d{2.0, -1.0};
    const auto e = symEigen(SymmetricMatrix::diagonal(d));
    EXPECT_DOUBLE_EQ(e.eigenvalues[0], -1.0);
    EXPECT_DOUBLE_EQ(e.eigenvalues[1], 2.0);
    EXPECT_DOUBLE_EQ(std::abs(e.basis(1, 0)), 1.0);
    EXPECT_DOUBLE_EQ(std::abs(e.basis(0, 1)), 1.0);

    SymmetricMatrix swap(2);
    swap.set(0, 1, 1.0);
    const auto f = symEigen(swap);
    EXPECT_NEAR(f.eigenvalues[0], -1.0, 1e-15);
    EXPECT_NEAR(f.eigenvalues[1], 1.0, 1e-15);
}

TEST(SymEigen, RandomReconstructionAndOrthogonality) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 1 + trial % 12;
        const auto a = randomSymmetric(n, rng);
        const auto e = symEigen(a);
        EXPECT_TRUE(std::is_sorted(e.eigenvalues.begin(), e.eigenvalues.end()));
        EXPECT_LE(maxDiff(reconstruct(e), a.full()), 1e-10 * a.maxAbs());
        EXPECT_LE(maxDiff(e.basis.transposed() * e.basis, Matrix::identity(n)), 1e-10);
    }
}

TEST(SymEigen, AgreesWithEigenLibrary) {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 2 + trial % 10;
        const auto a = randomSymmetric(n, rng);
        Eigen::MatrixXd m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) m(i, j) = a(i, j);
        const Eigen::VectorXd ref = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m).eigenvalues();
        const auto e = symEigen(a);
        for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(e.eigenvalues[i], ref(i), 1e-12);
    }
}

TEST(SignedSpectrum, DiagonalCases) {
    const auto id2 = cholesky(SymmetricMatrix::identity(2));
    const std::vector<double> neg{-1.0, -2.0};
    const auto s = buildSignedSpectrum(id2, SymmetricMatrix::diagonal(neg));
    EXPECT_TRUE(s.dPlus.empty());
    ASSERT_EQ(s.dMinus.size(), 2u);
    EXPECT_DOUBLE_EQ(s.dMinus[0], 1.0);
    EXPECT_DOUBLE_EQ(s.dMinus[1], 2.0);
    EXPECT_EQ(s.zeroCount, 0u);

    const auto id3 = cholesky(SymmetricMatrix::identity(3));
    const std::vector<double> mixed{3.0, 0.0, -5.0};
    const auto t = buildSignedSpectrum(id3, SymmetricMatrix::diagonal(mixed), 1e-10);
    ASSERT_EQ(t.dPlus.size(), 1u);
    ASSERT_EQ(t.dMinus.size(), 1u);
    EXPECT_DOUBLE_EQ(t.dPlus[0], 3.0);
    EXPECT_DOUBLE_EQ(t.dMinus[0], 5.0);
    EXPECT_EQ(t.zeroCount, 1u);
    EXPECT_LE(maxDiff(t.basis.transposed() * t.basis, Matrix::identity(3)), 1e-10);
}

TEST(SignedSpectrum, AllZeroThrows) {
    const auto id2 = cholesky(SymmetricMatrix::identity(2));
    EXPECT_THROW(buildSignedSpectrum(id2, SymmetricMatrix(2)), AllZeroSpectrum);
}

TEST(SignedSpectrum, MixedExampleSignCounts) {
    const auto sigma = io::readSymmetricCsv(std::string(HYPERVAR_DATA_DIR) + "/cac40_mixed_sigma.csv", true);
    const auto d = io::readVectorCsv(std::string(HYPERVAR_DATA_DIR) + "/cac40_mixed_gamma1_diag.csv");
    const auto s = buildSignedSpectrum(cholesky(sigma), SymmetricMatrix::diagonal(d));
    EXPECT_EQ(s.nPlus(), 5u);
    EXPECT_EQ(s.nMinus(), 5u);
}

TEST(SignedSpectrum, CallsExampleMatchesIndependentSolver) {
    const auto sigma = io::readSymmetricCsv(std::string(HYPERVAR_DATA_DIR) + "/cac40_calls_sigma.csv");
    const auto d = io::readVectorCsv(std::string(HYPERVAR_DATA_DIR) + "/cac40_calls_gamma1_diag.csv");
    const auto c = cholesky(sigma);
    const auto s = buildSignedSpectrum(c, SymmetricMatrix::diagonal(d));
    ASSERT_EQ(s.nMinus(), 9u);

    // Independent route: eigenvalues of diag(d) * Sigma share the spectrum of C^t diag(d) C.
    const std::size_t n = d.size();
    Eigen::MatrixXd ds(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) ds(i, j) = d[i] * sigma(i, j);
    Eigen::VectorXd ref = Eigen::EigenSolver<Eigen::MatrixXd>(ds).eigenvalues().real();
    std::sort(ref.data(), ref.data() + n);
    const auto got = sortedValues(s);
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(got[i], ref(i), 1e-12);

    // Frozen from the same independent computation.
    const double frozen[] = {-0.34564498, -0.10260819, -0.06490628, -0.04614178, -0.03797495,
                             -0.01600497, -0.01326442, -0.01057339, -0.00589497};
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(got[i], frozen[i], 1e-8);
}

TEST(SignedSpectrum, PermutationInvariant) {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 2 + trial % 8;
        const auto sigma = randomSpd(n, rng);
        auto gamma = randomSymmetric(n, rng);
        std::vector<std::size_t> perm(n);
        for (std::size_t i = 0; i < n; ++i) perm[i] = i;
        std::shuffle(perm.begin(), perm.end(), rng);
        SymmetricMatrix ps(n), pg(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j <= i; ++j) {
                ps.set(i, j, sigma(perm[i], perm[j]));
                pg.set(i, j, gamma(perm[i], perm[j]));
            }
        const auto a = sortedValues(buildSignedSpectrum(cholesky(sigma), gamma));
        const auto b = sortedValues(buildSignedSpectrum(cholesky(ps), pg));
        ASSERT_EQ(a.size(), b.size());
        for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-10);
    }
}

TEST(MatrixIo, ParseErrorsCarryLineNumbers) {
    std::istringstream bad("1,2\n3,x\n");
    try {
        io::readSquareCsv(bad, "m.csv");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 2u);
    }
    std::istringstream ragged("1,2\n3\n");
    EXPECT_THROW(io::readSquareCsv(ragged, "m.csv"), ParseError);
    std::istringstream rect("1,2\n3,4\n5,6\n");
    EXPECT_THROW(io::readSquareCsv(rect, "m.csv"), ParseError);
}

TEST(MatrixIo, WriteReadRoundTripIsExact) {
    std::mt19937_64 rng(3);
    const auto a = randomSymmetric(5, rng);
    std::stringstream buf;
    io::writeMatrixCsv(buf, a.full());
    const Matrix back = io::readSquareCsv(buf);
    EXPECT_EQ(maxDiff(back, a.full()), 0.0);
}
