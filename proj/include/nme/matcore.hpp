#pragma once

// Dense complex matrix primitives: Hermitian eigendecomposition, principal
// fractional powers, spectral norm/radius and Loewner-order comparisons.

#include <complex>
#include <cstddef>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "nme/errors.hpp"

namespace nme {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

namespace tol {
inline constexpr double kHermitian = 1e-12;   // ||M - M*|| <= kHermitian * (1 + ||M||)
inline constexpr double kEig = 1e-12;         // relative reconstruction error
inline constexpr double kPositive = 1e-12;    // pd threshold, relative to lambda_max
inline constexpr double kSpectralRadius = 1e-8;
inline constexpr int kGelfandMaxSquarings = 40;
}  // namespace tol

/// Square matrix with finite complex entries. Holds A and B.
class ComplexMatrix {
public:
    explicit ComplexMatrix(Matrix m, std::string name = "matrix");

    [[nodiscard]] const Matrix& mat() const noexcept { return m_; }
    [[nodiscard]] Eigen::Index dim() const noexcept { return m_.rows(); }

private:
    Matrix m_;
};

/// Square complex matrix equal to its conjugate transpose (within kHermitian).
///
/// The stored value is always exactly Hermitian: construction replaces the
/// input by (M + M*)/2 after validating it.
class HermitianMatrix {
public:
    explicit HermitianMatrix(const Matrix& m, std::string_view name = "matrix");

    /// Skips validation; use only for values that are Hermitian by construction
    /// up to rounding (products like A* X A). Still re-symmetrizes.
    static HermitianMatrix from_symmetrized(const Matrix& m);

    static HermitianMatrix identity(Eigen::Index n, double scale = 1.0);
    static HermitianMatrix diagonal(const RealVector& d);

    [[nodiscard]] const Matrix& mat() const noexcept { return m_; }
    [[nodiscard]] Eigen::Index dim() const noexcept { return m_.rows(); }

    HermitianMatrix operator+(const HermitianMatrix& o) const;
    HermitianMatrix operator-(const HermitianMatrix& o) const;
    HermitianMatrix operator*(double k) const;

private:
    struct Trusted {};
    HermitianMatrix(Trusted, Matrix m) : m_(std::move(m)) {}
    Matrix m_;
};

struct EigenPair {
    RealVector values;  // ascending
    Matrix vectors;     // unitary, columns are eigenvectors
};

EigenPair herm_eig(const HermitianMatrix& m);

double lambda_min(const HermitianMatrix& m);
double lambda_max(const HermitianMatrix& m);

/// Principal power V diag(lambda^r) V*. Requires M positive definite unless r
/// is a non-negative integer.
HermitianMatrix herm_power(const HermitianMatrix& m, double r);

/// V diag(lambda^r) V* from a decomposition already computed. No positivity
/// check; callers reuse one decomposition for several exponents.
HermitianMatrix herm_power(const EigenPair& eig, double r);

/// Largest singular value.
double spectral_norm(const Matrix& m);
inline double spectral_norm(const HermitianMatrix& m) { return spectral_norm(m.mat()); }
inline double spectral_norm(const ComplexMatrix& m) { return spectral_norm(m.mat()); }

/// Gelfand estimate lim ||M^(2^k)||^(1/2^k) by repeated normalized squaring.
/// Throws NumericalError if successive estimates do not settle.
double spectral_radius(const Matrix& m);

/// L <= R in the Loewner order, i.e. lambda_min(R - L) >= -tol.
bool loewner_leq(const HermitianMatrix& lhs, const HermitianMatrix& rhs, double tol);

/// lambda_min(M) > tol.
bool is_hpd(const HermitianMatrix& m, double tol);

/// lambda_min(M) > kPositive * lambda_max(M), with lambda_max > 0.
bool is_hpd(const HermitianMatrix& m);

/// A* M A for Hermitian M, re-symmetrized.
HermitianMatrix congruence(const Matrix& a, const HermitianMatrix& m);

/// Inverse of a Hermitian positive definite matrix via Cholesky.
HermitianMatrix hpd_inverse(const HermitianMatrix& m);

/// Smallest singular value of a square matrix.
double smallest_singular_value(const Matrix& m);

}  // namespace nme
