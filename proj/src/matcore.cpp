#include "nme/matcore.hpp"

#include <cmath>
#include <cstdio>
#include <utility>

namespace nme {

namespace {

std::string entry_location(std::string_view name, Eigen::Index i, Eigen::Index j) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "[row %td, col %td]", static_cast<std::ptrdiff_t>(i),
                  static_cast<std::ptrdiff_t>(j));
    return std::string(name) + buf;
}

void require_square_finite(const Matrix& m, std::string_view name) {
    if (m.rows() == 0 || m.cols() == 0) {
        throw ValidationError(std::string(name) + ": dimension must be at least 1");
    }
    if (m.rows() != m.cols()) {
        throw ValidationError(std::string(name) + ": matrix is not square (" +
                              std::to_string(m.rows()) + "x" + std::to_string(m.cols()) + ")");
    }
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) {
                throw ValidationError(entry_location(name, i, j) + ": entry is not finite");
            }
        }
    }
}

Matrix symmetrized(const Matrix& m) { return (m + m.adjoint()) * 0.5; }

bool is_nonnegative_integer(double r) { return r >= 0.0 && std::floor(r) == r; }

}  // namespace

ComplexMatrix::ComplexMatrix(Matrix m, std::string name) : m_(std::move(m)) {
    require_square_finite(m_, name);
}

HermitianMatrix::HermitianMatrix(const Matrix& m, std::string_view name) {
    require_square_finite(m, name);
    const Matrix skew = m - m.adjoint();
    const double asym = spectral_norm(skew);
    if (asym > tol::kHermitian * (1.0 + spectral_norm(m))) {
        Eigen::Index bi = 0;
        Eigen::Index bj = 0;
        skew.cwiseAbs().maxCoeff(&bi, &bj);
        throw ValidationError(entry_location(name, bi, bj) +
                              ": matrix is not Hermitian (entry differs from conjugate of its transpose)");
    }
    m_ = symmetrized(m);
}

HermitianMatrix HermitianMatrix::from_symmetrized(const Matrix& m) {
    return HermitianMatrix(Trusted{}, symmetrized(m));
}

HermitianMatrix HermitianMatrix::identity(Eigen::Index n, double scale) {
    return HermitianMatrix(Trusted{}, Matrix::Identity(n, n) * scale);
}

HermitianMatrix HermitianMatrix::diagonal(const RealVector& d) {
    return HermitianMatrix(Trusted{}, d.cast<Complex>().asDiagonal().toDenseMatrix());
}

HermitianMatrix HermitianMatrix::operator+(const HermitianMatrix& o) const {
    return from_symmetrized(m_ + o.m_);
}

HermitianMatrix HermitianMatrix::operator-(const HermitianMatrix& o) const {
    return from_symmetrized(m_ - o.m_);
}

HermitianMatrix HermitianMatrix::operator*(double k) const { return HermitianMatrix(Trusted{}, m_ * k); }

EigenPair herm_eig(const HermitianMatrix& m) {
    if (m.dim() == 0) throw ValidationError("herm_eig: empty matrix");
    // Householder tridiagonalization followed by implicit symmetric QR.
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m.mat(), Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("herm_eig: tridiagonal QR iteration did not converge");
    }
    return {solver.eigenvalues(), solver.eigenvectors()};
}

double lambda_min(const HermitianMatrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m.mat(), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw NumericalError("lambda_min: eigensolver failed");
    return solver.eigenvalues()(0);
}

double lambda_max(const HermitianMatrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m.mat(), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw NumericalError("lambda_max: eigensolver failed");
    return solver.eigenvalues()(solver.eigenvalues().size() - 1);
}

HermitianMatrix herm_power(const HermitianMatrix& m, double r) {
    if (!std::isfinite(r)) throw ValidationError("herm_power: exponent is not finite");
    if (r == 0.0) return HermitianMatrix::identity(m.dim());
    if (r == 1.0) return m;

    const EigenPair eig = herm_eig(m);
    const double lo = eig.values(0);
    const double hi = eig.values(eig.values.size() - 1);
    if (!is_nonnegative_integer(r) && !(hi > 0.0 && lo > tol::kPositive * hi)) {
        throw ValidationError("herm_power: fractional or negative power of a matrix that is not positive definite");
    }
    return herm_power(eig, r);
}

HermitianMatrix herm_power(const EigenPair& eig, double r) {
    RealVector powered(eig.values.size());
    for (Eigen::Index i = 0; i < powered.size(); ++i) {
        powered(i) = std::pow(eig.values(i), r);
    }
    return HermitianMatrix::from_symmetrized(eig.vectors * powered.cast<Complex>().asDiagonal() *
                                             eig.vectors.adjoint());
}

double spectral_norm(const Matrix& m) {
    if (m.size() == 0) return 0.0;
    const double top = lambda_max(HermitianMatrix::from_symmetrized(m.adjoint() * m));
    return top > 0.0 ? std::sqrt(top) : 0.0;
}

double spectral_radius(const Matrix& m) {
    if (m.rows() != m.cols()) throw ValidationError("spectral_radius: matrix is not square");
    // M^(2^k) = exp(log_scale) * power with ||power|| = 1 after each step.
    Matrix power = m;
    double log_scale = 0.0;
    double previous = -1.0;
    for (int k = 0; k <= tol::kGelfandMaxSquarings; ++k) {
        const double nrm = spectral_norm(power);
        if (nrm == 0.0) return 0.0;
        log_scale += std::log(nrm);
        power /= nrm;
        const double estimate = std::exp(std::ldexp(log_scale, -k));
        if (previous >= 0.0 && std::abs(estimate - previous) < tol::kSpectralRadius * estimate) {
            return estimate;
        }
        previous = estimate;
        power = (power * power).eval();
        log_scale *= 2.0;
    }
    throw NumericalError("spectral_radius: Gelfand estimate did not settle after " +
                         std::to_string(tol::kGelfandMaxSquarings) + " squarings");
}

bool loewner_leq(const HermitianMatrix& lhs, const HermitianMatrix& rhs, double tol) {
    if (lhs.dim() != rhs.dim()) throw ValidationError("loewner_leq: dimension mismatch");
    return lambda_min(rhs - lhs) >= -tol;
}

bool is_hpd(const HermitianMatrix& m, double tol) { return lambda_min(m) > tol; }

bool is_hpd(const HermitianMatrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m.mat(), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) return false;
    const double lo = solver.eigenvalues()(0);
    const double hi = solver.eigenvalues()(solver.eigenvalues().size() - 1);
    return hi > 0.0 && lo > tol::kPositive * hi;
}

HermitianMatrix congruence(const Matrix& a, const HermitianMatrix& m) {
    return HermitianMatrix::from_symmetrized(a.adjoint() * m.mat() * a);
}

HermitianMatrix hpd_inverse(const HermitianMatrix& m) {
    Eigen::LLT<Matrix> llt(m.mat());
    if (llt.info() != Eigen::Success) {
        throw NumericalError("hpd_inverse: matrix is not positive definite");
    }
    return HermitianMatrix::from_symmetrized(llt.solve(Matrix::Identity(m.dim(), m.dim())));
}

double smallest_singular_value(const Matrix& m) {
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues().minCoeff();
}

}  // namespace nme
